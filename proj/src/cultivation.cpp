#include "scmp/cultivation.hpp"

#include <algorithm>
#include <stdexcept>

namespace scmp {

CultivationField::CultivationField(const std::vector<TileId>& tiles, CultivationConfig cfg)
    : cfg_(cfg), tiles_(tiles) {
    TileId maxId = 0;
    for (TileId t : tiles_) maxId = std::max(maxId, t);
    indexOf_.assign(maxId + 1, -1);
    slots_.resize(tiles_.size());
    for (size_t i = 0; i < tiles_.size(); ++i) {
        indexOf_[tiles_[i]] = static_cast<int>(i);
        slots_[i].tile = tiles_[i];
    }
}

int CultivationField::slotIndex(TileId t) const {
    if (t >= indexOf_.size() || indexOf_[t] < 0)
        throw std::out_of_range("tile not in cultivation field");
    return indexOf_[t];
}

void CultivationField::tick(const std::function<double()>& draw) {
    for (Slot& s : slots_) {
        switch (s.phase) {
            case TilePhase::Routing:
            case TilePhase::ReadyMagic:
                break;
            case TilePhase::Idle:
                s.phase = TilePhase::Cultivating;
                s.progress = 1;
                if (s.progress >= cfg_.latency) {  // degenerate latency <= 1
                    s.phase = TilePhase::ReadyMagic;
                    ++readyCount_;
                }
                break;
            case TilePhase::Cultivating:
                if (cfg_.pFail > 0.0 && draw() < cfg_.pFail) {
                    s.progress = 0;  // attempt failed, restart
                    break;
                }
                ++s.progress;
                if (s.progress >= cfg_.latency) {
                    s.phase = TilePhase::ReadyMagic;
                    ++readyCount_;
                }
                break;
        }
    }
}

void CultivationField::advance(Cycle n, const std::function<double()>& draw) {
    if (cfg_.pFail > 0.0) {
        for (Cycle i = 0; i < n; ++i) tick(draw);
        return;
    }
    for (Slot& s : slots_) {
        if (s.phase != TilePhase::Idle && s.phase != TilePhase::Cultivating) continue;
        s.progress += n;
        s.phase = TilePhase::Cultivating;
        if (s.progress >= cfg_.latency) {
            s.phase = TilePhase::ReadyMagic;
            ++readyCount_;
        }
    }
}

void CultivationField::warmStart() {
    for (Slot& s : slots_) {
        if (s.phase == TilePhase::Idle || s.phase == TilePhase::Cultivating) {
            s.phase = TilePhase::ReadyMagic;
            ++readyCount_;
        }
    }
}

void CultivationField::beginRouting(TileId t) {
    Slot& s = slots_[slotIndex(t)];
    if (s.phase == TilePhase::ReadyMagic) --readyCount_;
    s.phase = TilePhase::Routing;
    s.progress = 0;
}

void CultivationField::endRouting(TileId t) {
    Slot& s = slots_[slotIndex(t)];
    if (s.phase == TilePhase::Routing) s.phase = TilePhase::Idle;
}

void CultivationField::consume(TileId t) {
    Slot& s = slots_[slotIndex(t)];
    if (s.phase != TilePhase::ReadyMagic)
        throw std::logic_error("consuming a tile with no ready magic state");
    s.phase = TilePhase::Idle;
    s.progress = 0;
    --readyCount_;
}

TilePhase CultivationField::phaseOf(TileId t) const { return slots_[slotIndex(t)].phase; }

std::vector<TileId> CultivationField::assignMagic(const FloorplanGraph& g, TileId target,
                                                  int need) const {
    std::vector<std::pair<int, TileId>> ready;
    for (const Slot& s : slots_)
        if (s.phase == TilePhase::ReadyMagic) ready.emplace_back(g.dist(s.tile, target), s.tile);
    std::sort(ready.begin(), ready.end());
    std::vector<TileId> out;
    for (size_t i = 0; i < ready.size() && static_cast<int>(out.size()) < need; ++i)
        out.push_back(ready[i].second);
    return out;
}

}  // namespace scmp
