#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "scmp/floorplan.hpp"

namespace scmp {

// Magic-state cultivation on idle ancilla tiles.  Each participating tile
// cycles Idle -> Cultivating -> ReadyMagic; routing through a tile preempts
// any cultivation in progress (the half-grown state is discarded).

enum class TilePhase : uint8_t { Idle, Routing, Cultivating, ReadyMagic };

struct CultivationConfig {
    Cycle latency = 26;   // cycles from start until a magic state is ready
    double pFail = 0.0;   // per-attempt failure probability (restarts)
};

class CultivationField {
public:
    CultivationField() = default;
    CultivationField(const std::vector<TileId>& tiles, CultivationConfig cfg);

    // Advance one cycle.  Tiles in Routing stay put; Idle tiles begin a new
    // attempt; Cultivating tiles either complete, fail (draw < pFail), or
    // continue.  `draw` yields uniform [0,1) variates.
    void tick(const std::function<double()>& draw);

    // Advance `n` cycles at once. Closed form when pFail == 0, otherwise
    // equivalent to n successive ticks.
    void advance(Cycle n, const std::function<double()>& draw);

    // Mark the field as having run long enough that every non-routing tile
    // already holds a magic state (steady-state start).
    void warmStart();

    // Routing preemption: the tile is needed as wire; any progress or ready
    // state is lost.
    void beginRouting(TileId t);
    void endRouting(TileId t);

    // Consume a ready magic state (tile returns to Idle next tick).
    void consume(TileId t);

    TilePhase phaseOf(TileId t) const;
    int readyCount() const { return readyCount_; }

    // The `need` ready tiles nearest to `target` (by precomputed distance),
    // ties to lowest id.  Returns fewer if not enough are ready.
    std::vector<TileId> assignMagic(const FloorplanGraph& g, TileId target, int need) const;

    const std::vector<TileId>& tiles() const { return tiles_; }

private:
    struct Slot {
        TileId tile = kNoTile;
        TilePhase phase = TilePhase::Idle;
        Cycle progress = 0;
    };
    int slotIndex(TileId t) const;

    CultivationConfig cfg_;
    std::vector<TileId> tiles_;
    std::vector<int> indexOf_;  // tile id -> slot index, -1 if absent
    std::vector<Slot> slots_;
    int readyCount_ = 0;
};

}  // namespace scmp
