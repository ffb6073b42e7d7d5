#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scmp {

using TileId = std::uint32_t;
using WorkloadId = std::uint32_t;
using Cycle = std::int64_t;

inline constexpr TileId kNoTile = static_cast<TileId>(-1);
inline constexpr std::int32_t kNoOwner = -1;

enum class TileClass : std::uint8_t { Data, Ancilla, MagicPort };

/// Geometry and class layout of a floorplan grid.
struct LayoutSpec {
    int rows = 20;
    int cols = 12;
    double data_density = 0.5;
    std::string layout_pattern = "rows";  // "rows" | "checkerboard"
    int num_ports = 50;
    std::string port_rule = "uniform";
};

/// Tile grid as an undirected 4-neighbor graph with typed vertices and
/// precomputed all-pairs hop distances. Immutable after construction.
class FloorplanGraph {
public:
    static FloorplanGraph buildGrid(int rows, int cols, const LayoutSpec& spec);
    /// Direct class assignment, row-major. Used by tests and custom layouts.
    static FloorplanGraph fromClasses(int rows, int cols, std::vector<TileClass> classes);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int size() const { return rows_ * cols_; }

    TileClass classOf(TileId t) const { return classes_[t]; }
    const std::vector<TileId>& neighbors(TileId t) const { return adj_[t]; }

    int row(TileId t) const { return static_cast<int>(t) / cols_; }
    int col(TileId t) const { return static_cast<int>(t) % cols_; }
    TileId at(int r, int c) const { return static_cast<TileId>(r * cols_ + c); }

    /// Shortest-path hop count. Precomputed for |V| <= 4096, BFS on demand above.
    int dist(TileId u, TileId v) const;

    /// min over v in set of dist(u, v). The set must be non-empty.
    template <class Container>
    int distToSet(TileId u, const Container& set) const {
        int best = -1;
        for (TileId v : set) {
            int d = dist(u, v);
            if (best < 0 || d < best) best = d;
        }
        return best;
    }

    const std::vector<TileId>& dataTiles() const { return data_; }
    const std::vector<TileId>& ancillaTiles() const { return ancilla_; }
    const std::vector<TileId>& portTiles() const { return ports_; }

private:
    FloorplanGraph() = default;
    void finalize();
    void bfsFrom(TileId src, std::vector<std::uint16_t>& out) const;

    int rows_ = 0;
    int cols_ = 0;
    std::vector<TileClass> classes_;
    std::vector<std::vector<TileId>> adj_;
    std::vector<TileId> data_, ancilla_, ports_;
    std::vector<std::uint16_t> distMatrix_;  // empty when |V| > 4096
};

enum class OwnKind : std::uint8_t { None, Data, Core, Primary, Secondary, PortReserve };

/// Which workload owns which tile. Single-writer, owned by one simulation.
class Occupancy {
public:
    explicit Occupancy(int numTiles)
        : owner_(numTiles, kNoOwner), kind_(numTiles, OwnKind::None) {}

    bool isFree(TileId t) const { return owner_[t] == kNoOwner; }
    std::int32_t ownerOf(TileId t) const { return owner_[t]; }
    OwnKind kindOf(TileId t) const { return kind_[t]; }

    void occupy(TileId t, WorkloadId w, OwnKind k);
    void release(TileId t);

    std::vector<TileId> occupiedData(const FloorplanGraph& g) const;
    std::vector<TileId> occupiedAncilla(const FloorplanGraph& g) const;
    std::vector<TileId> reservedPorts(const FloorplanGraph& g) const;

private:
    std::vector<std::int32_t> owner_;
    std::vector<OwnKind> kind_;
};

/// Connected components of the free data+ancilla subgraph (ports excluded).
std::vector<std::vector<TileId>> freeComponents(const FloorplanGraph& g, const Occupancy& occ);

}  // namespace scmp
