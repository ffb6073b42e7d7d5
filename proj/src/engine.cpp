#include "scmp/engine.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

namespace scmp {
namespace {

struct Resident {
    WorkloadId id = 0;
    size_t wIndex = 0;
    WorkloadState state = WorkloadState::Queue;
    Cycle stateSince = 0;

    std::vector<PhaseDescriptor> phases;
    size_t phaseIdx = 0;
    bool atBoundary = true;     // phases[phaseIdx] not yet granted
    Cycle boundarySince = 0;
    Cycle phaseEndAt = -1;      // exclusive end of the running phase
    bool awaitingBooking = false;

    std::vector<TileId> data, core;
    std::vector<TileId> heldPhase;   // ancilla held by the running phase
    std::optional<TileId> homePort;
    std::vector<TileId> ring;        // primary scratchpad P_i (at admission)
    std::vector<TileId> localAncilla;  // routable ancilla, nearest first
    std::vector<int> portLatency;    // per port-vector index
    bool tentativeCore = false;      // un-park attempt in flight this tick
};

class Sim {
public:
    Sim(const SimConfig& cfg, const std::vector<Workload>& ws, SimResult& out)
        : cfg_(cfg),
          g_(FloorplanGraph::buildGrid(cfg.layout.rows, cfg.layout.cols, cfg.layout)),
          occ_(g_.size()),
          ws_(ws),
          out_(out),
          rng_(cfg.seed) {
        if (cfg_.mode == MagicMode::Ports) {
            if (g_.portTiles().empty())
                throw std::invalid_argument("port mode requires num_ports > 0");
            for (TileId p : g_.portTiles()) {
                PortModel pm;
                pm.port = p;
                pm.tInit = cfg_.tInitPort;
                pm.tPrep = cfg_.tPrep;
                pm.warmed = cfg_.warmStart;
                ports_.push_back(pm);
            }
        } else {
            field_ = CultivationField(g_.ancillaTiles(),
                                      {cfg_.cultivationLatency, cfg_.pFail});
            if (cfg_.warmStart) field_.warmStart();
        }
        coreBudget_ = static_cast<int>((1.0 - cfg_.coreReserveFrac) *
                                       static_cast<double>(g_.ancillaTiles().size()));
        draw_ = [this] { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); };
    }

    void run() {
        std::vector<size_t> arrivalOrder(ws_.size());
        for (size_t i = 0; i < ws_.size(); ++i) arrivalOrder[i] = i;
        std::stable_sort(arrivalOrder.begin(), arrivalOrder.end(), [&](size_t a, size_t b) {
            return ws_[a].arrivalTime < ws_[b].arrivalTime;
        });
        size_t nextArrival = 0;
        size_t nDone = 0;
        Cycle lastProgress = 0;

        for (Cycle t = 0; t < cfg_.horizon; ++t) {
            // 1. arrivals
            while (nextArrival < arrivalOrder.size() &&
                   ws_[arrivalOrder[nextArrival]].arrivalTime <= t) {
                size_t wi = arrivalOrder[nextArrival++];
                Resident r;
                r.id = ws_[wi].id;
                r.wIndex = wi;
                r.stateSince = t;
                r.phases = phaseSequence(ws_[wi], cfg_.phaseModel);
                residents_.push_back(std::move(r));
                resourceEvent_ = true;
                lastProgress = t;
            }

            // 2/3. admission + placement
            // Random placement can fail on an unlucky draw, so queued work
            // retries periodically instead of waiting for a resource event.
            if (!resourceEvent_ && cfg_.policy.placement == PlacementKind::Random &&
                t >= nextAdmitRetry_ && anyQueued()) {
                resourceEvent_ = true;
                nextAdmitRetry_ = t + kAdmitRetry;
            }
            if (resourceEvent_) {
                tryAdmissions(t);
                tryUnpark(t);
                resourceEvent_ = false;
            }

            // 4. scheduler boundary arbitration
            arbitrate(t);

            // 5. magic-state service
            bookMagic(t);
            if (cfg_.mode == MagicMode::Cultivation) field_.advance(1, draw_);

            // 6. advance / retire
            for (Resident& r : residents_) {
                if (r.state != WorkloadState::Running || r.atBoundary) continue;
                if (r.phaseEndAt != t + 1) continue;
                for (TileId a : r.heldPhase) releaseTile(a);
                r.heldPhase.clear();
                ++r.phaseIdx;
                if (r.phaseIdx == r.phases.size()) {
                    for (TileId a : r.core) releaseTile(a);
                    for (TileId d : r.data) releaseTile(d);
                    r.core.clear();
                    setState(r, WorkloadState::Complete, t + 1);
                    out_.workloads[r.wIndex].completedAt = t + 1;
                    out_.makespan = std::max(out_.makespan, t + 1);
                    ++nDone;
                } else {
                    r.atBoundary = true;
                    r.boundarySince = t + 1;
                }
                resourceEvent_ = true;
                lastProgress = t;
            }

            // 7. record
            if (cfg_.recordTrace) recordRow(t);

            if (nDone == ws_.size()) {
                finishDwell(t + 1);
                return;
            }
            if (t - lastProgress > kStallLimit && !anyTransitionsPending()) {
                out_.horizonHit = true;
                finishDwell(t + 1);
                return;
            }

            // fast-forward across quiet stretches
            Cycle target = quietUntil(t, arrivalOrder, nextArrival);
            if (anyTransitionsPending())
                target = std::min(target, lastProgress + kStallLimit + 1);
            if (target > t + 1) {
                Cycle n = target - (t + 1);
                if (cfg_.recordTrace && !out_.trace.empty()) {
                    TickRow row = out_.trace.back();
                    for (Cycle k = 1; k <= n; ++k) {
                        row.t = t + k;
                        out_.trace.push_back(row);
                    }
                }
                if (cfg_.mode == MagicMode::Cultivation) field_.advance(n, draw_);
                t += n;
            }
        }
        out_.horizonHit = true;
        finishDwell(cfg_.horizon);
    }

private:
    static constexpr Cycle kStallLimit = 200'000;
    static constexpr Cycle kAdmitRetry = 1'000;
    static constexpr int kGrantRadius = 2;
    Cycle nextAdmitRetry_ = 0;

    bool anyQueued() const {
        for (const Resident& r : residents_)
            if (r.state == WorkloadState::Queue) return true;
        return false;
    }

    void setState(Resident& r, WorkloadState to, Cycle t) {
        if (!legalTransition(r.state, to))
            throw std::logic_error(std::string("illegal transition ") + toString(r.state) +
                                   " -> " + toString(to));
        out_.workloads[r.wIndex].dwell[static_cast<int>(r.state)] += t - r.stateSince;
        out_.transitions.push_back({t, r.id, r.state, to});
        r.state = to;
        r.stateSince = t;
    }

    void occupyTile(TileId t, WorkloadId w, OwnKind k) {
        occ_.occupy(t, w, k);
        if (cfg_.mode == MagicMode::Cultivation && g_.classOf(t) == TileClass::Ancilla)
            field_.beginRouting(t);
    }
    void releaseTile(TileId t) {
        occ_.release(t);
        if (cfg_.mode == MagicMode::Cultivation && g_.classOf(t) == TileClass::Ancilla)
            field_.endRouting(t);
    }

    int freeAncillaCount() const {
        int n = 0;
        for (TileId a : g_.ancillaTiles()) n += occ_.isFree(a);
        return n;
    }

    // ---- admission ----

    struct Region {
        std::vector<TileId> freeData;
    };

    std::vector<Region> freeRegions() const {
        std::vector<Region> out;
        for (auto& comp : freeComponents(g_, occ_)) {
            Region reg;
            for (TileId v : comp)
                if (g_.classOf(v) == TileClass::Data) reg.freeData.push_back(v);
            if (!reg.freeData.empty()) out.push_back(std::move(reg));
        }
        return out;
    }

    void tryAdmissions(Cycle t) {
        bool progress = true;
        while (progress) {
            progress = false;
            std::vector<size_t> queued;
            for (size_t i = 0; i < residents_.size(); ++i)
                if (residents_[i].state == WorkloadState::Queue) queued.push_back(i);
            if (queued.empty()) return;

            auto regions = freeRegions();
            std::vector<AdmissionCandidate> cands;
            for (size_t ri : queued) {
                const Workload& w = ws_[residents_[ri].wIndex];
                AdmissionCandidate c;
                c.workload = w.id;
                c.qubits = w.qubits;
                c.arrival = w.arrivalTime;
                c.bestRegionSlack = std::numeric_limits<int>::max();
                for (auto& reg : regions) {
                    int slack = static_cast<int>(reg.freeData.size()) - w.qubits;
                    if (slack >= 0) {
                        c.fitsOneRegion = true;
                        c.bestRegionSlack = std::min(c.bestRegionSlack, slack);
                    }
                }
                if (!c.fitsOneRegion) c.bestRegionSlack = 0;
                cands.push_back(c);
            }
            for (size_t oi : admissionOrder(cands, cfg_.policy.admission)) {
                // Strict FIFO blocks on the head of the queue; Preference may
                // skip past workloads that do not fit anywhere yet.
                if (cfg_.policy.admission == AdmissionKind::Fifo) {
                    if (cands[oi].fitsOneRegion && tryPlace(residents_[queued[oi]], t, regions))
                        progress = true;
                    break;
                }
                if (!cands[oi].fitsOneRegion) continue;
                if (tryPlace(residents_[queued[oi]], t, regions)) {
                    progress = true;
                    break;  // regions changed; recompute
                }
            }
        }
    }

    bool tryPlace(Resident& r, Cycle t, const std::vector<Region>& regions) {
        const Workload& w = ws_[r.wIndex];
        // best-fit region: smallest free-data surplus that still fits
        const Region* reg = nullptr;
        if (cfg_.policy.placement == PlacementKind::Random) {
            std::vector<const Region*> fitting;
            for (auto& rr : regions)
                if (static_cast<int>(rr.freeData.size()) >= w.qubits) fitting.push_back(&rr);
            if (fitting.empty()) return false;
            reg = fitting[rng_() % fitting.size()];
        } else {
            for (auto& rr : regions) {
                if (static_cast<int>(rr.freeData.size()) < w.qubits) continue;
                if (!reg || rr.freeData.size() < reg->freeData.size()) reg = &rr;
            }
            if (!reg) return false;
        }

        // anchor: home port in port mode, lowest-id free data tile otherwise
        std::optional<TileId> home;
        TileId anchor;
        if (cfg_.mode == MagicMode::Ports) {
            size_t pi = choosePort(t, reg->freeData);
            home = ports_[pi].port;
            anchor = *home;
        } else {
            anchor = *std::min_element(reg->freeData.begin(), reg->freeData.end());
        }

        std::vector<std::uint8_t> freeAnc0(g_.size(), 0);
        for (TileId a : g_.ancillaTiles()) freeAnc0[a] = occ_.isFree(a);
        const bool randomPlace = cfg_.policy.placement != PlacementKind::Compact;
        const int draws = randomPlace ? 8 : 1;  // random draws may route infeasibly; resample

        std::vector<TileId> data;
        std::optional<CoreResult> core;
        for (int attempt = 0; attempt < draws; ++attempt) {
            data.clear();
            if (!randomPlace) {
                auto part = compactPartition(g_, {{r.id, w.qubits, anchor}}, reg->freeData);
                if (!part) return false;
                data = std::move(part->clusters[0].tiles);
            } else {
                // Random feasible cluster: grow around a uniformly random
                // seed tile, taking the q nearest free data tiles with
                // randomized tie order.
                std::vector<TileId> pool = reg->freeData;
                TileId seed = pool[rng_() % pool.size()];
                std::vector<int> noisy(g_.size(), 0);
                for (TileId v : pool)
                    noisy[v] = g_.dist(seed, v) + static_cast<int>(rng_() % 14);
                std::shuffle(pool.begin(), pool.end(), rng_);
                std::stable_sort(pool.begin(), pool.end(), [&](TileId a, TileId b) {
                    return noisy[a] < noisy[b];
                });
                pool.resize(w.qubits);
                data = std::move(pool);
            }
            std::vector<std::uint8_t> freeAnc = freeAnc0;
            TileId root = home ? *home : data[0];
            core = buildCore(g_, data, root, freeAnc, randomPlace ? &rng_ : nullptr);
            if (core && coreCommitted() + static_cast<int>(core->ancilla.size()) <= coreBudget_ &&
                routablePlacement(r, data, core->ancilla))
                break;
            core.reset();
        }
        if (!core) return false;

        for (TileId d : data) occupyTile(d, r.id, OwnKind::Data);
        for (TileId a : core->ancilla) occupyTile(a, r.id, OwnKind::Core);
        r.data = std::move(data);
        r.core = std::move(core->ancilla);
        r.homePort = home;
        initResidentGeometry(r);
        out_.workloads[r.wIndex].admittedAt = t;
        setState(r, WorkloadState::Ready, t);
        r.atBoundary = true;
        r.boundarySince = t;
        return true;
    }

    // A placement is only viable if, after its core is pinned, enough nearby
    // free ancilla remain to route the workload's widest phase.
    bool routablePlacement(const Resident& r, const std::vector<TileId>& data,
                           const std::vector<TileId>& coreTiles) const {
        int maxPrim = 0;
        for (const PhaseDescriptor& ph : r.phases)
            maxPrim = std::max(maxPrim, ph.primaryTiles);
        std::vector<std::uint8_t> inCore(g_.size(), 0);
        for (TileId a : coreTiles) inCore[a] = 1;
        int supply = 0;
        for (TileId a : g_.ancillaTiles()) {
            if (!occ_.isFree(a) || inCore[a]) continue;
            if (g_.distToSet(a, data) <= kGrantRadius) ++supply;
            if (supply >= maxPrim) return true;
        }
        return supply >= maxPrim;
    }

    size_t choosePort(Cycle t, const std::vector<TileId>& freeData) {
        auto nearestData = [&](size_t pi) { return g_.distToSet(ports_[pi].port, freeData); };
        size_t best = 0;
        switch (cfg_.policy.portChoice) {
            case PortChoice::MinDeliver: {
                Cycle bestScore = std::numeric_limits<Cycle>::max();
                for (size_t p = 0; p < ports_.size(); ++p) {
                    Cycle warm = ports_[p].warmed ? 0 : ports_[p].tInit;
                    Cycle s = std::max(t, ports_[p].busyUntil) + warm + ports_[p].tPrep +
                              nearestData(p);
                    if (s < bestScore) {
                        bestScore = s;
                        best = p;
                    }
                }
                return best;
            }
            case PortChoice::Nearest: {
                int bestD = std::numeric_limits<int>::max();
                for (size_t p = 0; p < ports_.size(); ++p) {
                    int d = nearestData(p);
                    if (d < bestD) {
                        bestD = d;
                        best = p;
                    }
                }
                return best;
            }
            case PortChoice::RandomIdle: {
                std::vector<size_t> idle;
                for (size_t p = 0; p < ports_.size(); ++p)
                    if (ports_[p].busyUntil <= t) idle.push_back(p);
                if (idle.empty()) return rng_() % ports_.size();
                return idle[rng_() % idle.size()];
            }
        }
        return best;
    }

    void initResidentGeometry(Resident& r) {
        std::vector<TileId> verts = r.data;
        verts.insert(verts.end(), r.core.begin(), r.core.end());
        std::vector<std::uint8_t> inRing(g_.size(), 0);
        for (TileId v : verts)
            for (TileId n : g_.neighbors(v))
                if (g_.classOf(n) == TileClass::Ancilla && occ_.isFree(n)) inRing[n] = 1;
        r.ring.clear();
        for (TileId a : g_.ancillaTiles())
            if (inRing[a]) r.ring.push_back(a);

        // A phase can only route through ancilla close to its own data; tiles
        // further out are unusable for this workload's lattice surgery.
        r.localAncilla.clear();
        std::vector<int> d(g_.size(), 0);
        for (TileId a : g_.ancillaTiles()) {
            d[a] = g_.distToSet(a, r.data);
            if (d[a] <= kGrantRadius) r.localAncilla.push_back(a);
        }
        std::sort(r.localAncilla.begin(), r.localAncilla.end(),
                  [&](TileId x, TileId y) { return d[x] != d[y] ? d[x] < d[y] : x < y; });

        r.portLatency.clear();
        for (auto& pm : ports_) r.portLatency.push_back(g_.distToSet(pm.port, r.data));
    }

    int coreCommitted() const {
        int n = 0;
        for (const Resident& r : residents_)
            if (r.state != WorkloadState::Queue && r.state != WorkloadState::Complete &&
                (r.state != WorkloadState::Parked || r.tentativeCore))
                n += static_cast<int>(r.core.size());
        return n;
    }

    void tryUnpark(Cycle /*t*/) {
        // rebuild cores for parked residents, oldest first; the rebuilt core is
        // tentative until this tick's arbitration keeps or drops it
        std::vector<Resident*> parked;
        for (Resident& r : residents_)
            if (r.state == WorkloadState::Parked) parked.push_back(&r);
        std::stable_sort(parked.begin(), parked.end(), [](const Resident* a, const Resident* b) {
            return a->stateSince != b->stateSince ? a->stateSince < b->stateSince
                                                  : a->id < b->id;
        });
        for (Resident* r : parked) {
            std::vector<std::uint8_t> freeAnc(g_.size(), 0);
            for (TileId a : g_.ancillaTiles()) freeAnc[a] = occ_.isFree(a);
            TileId root = r->homePort ? *r->homePort : r->data[0];
            auto core = buildCore(g_, r->data, root, freeAnc);
            if (!core) continue;
            if (coreCommitted() + static_cast<int>(core->ancilla.size()) > coreBudget_)
                continue;
            for (TileId a : core->ancilla) occupyTile(a, r->id, OwnKind::Core);
            r->core = std::move(core->ancilla);
            r->tentativeCore = true;
        }
    }

    // ---- arbitration ----

    void arbitrate(Cycle t) {
        std::vector<Resident*> cand;
        for (Resident& r : residents_) {
            bool boundary = (r.state == WorkloadState::Ready) ||
                            (r.state == WorkloadState::WaitPrimary) ||
                            (r.state == WorkloadState::WaitSecondary) ||
                            (r.state == WorkloadState::Running && r.atBoundary) ||
                            (r.state == WorkloadState::Parked && r.tentativeCore);
            if (boundary) cand.push_back(&r);
        }
        if (cand.empty()) return;

        std::vector<ArbCandidate> acs;
        for (Resident* r : cand) {
            ArbCandidate c;
            c.workload = r->id;
            c.phase = r->phases[r->phaseIdx];
            c.boundarySince = r->boundarySince;
            c.freshBoundary = (r->state == WorkloadState::Running);
            // Never demand more routing tiles than the neighborhood can ever
            // supply; tiles pinned under cores are gone for good.
            int cap = 0;
            for (TileId a : r->localAncilla) {
                OwnKind k = occ_.kindOf(a);
                if (k == OwnKind::None || k == OwnKind::Primary || k == OwnKind::Secondary)
                    ++cap;
            }
            c.phase.primaryTiles = std::min(c.phase.primaryTiles, cap);
            c.ringTotal = static_cast<int>(r->ring.size());
            for (TileId a : r->ring) c.ringFree += occ_.isFree(a);
            c.coreSize = static_cast<int>(r->core.size());
            if (cfg_.mode == MagicMode::Cultivation) c.magicReadyNeeded = c.phase.magicStates;
            acs.push_back(c);
        }
        ArbPools pools;
        pools.freeSecondary = freeAncillaCount();
        pools.coreBudget = coreBudget_;
        pools.coreCommitted = coreCommitted();
        pools.magicReady = cfg_.mode == MagicMode::Cultivation
                               ? field_.readyCount()
                               : std::numeric_limits<int>::max();
        auto decisions =
            ancillaArbitrate(acs, pools, cfg_.policy.arbitration, t, cfg_.parkPatience);

        for (size_t i = 0; i < cand.size(); ++i) {
            Resident& r = *cand[i];
            const ArbDecision& d = decisions[i];
            switch (d.action) {
                case ArbAction::Grant:
                    executeGrant(r, d, t);
                    break;
                case ArbAction::WaitPrimary:
                case ArbAction::WaitSecondary: {
                    WorkloadState ws = d.action == ArbAction::WaitPrimary
                                           ? WorkloadState::WaitPrimary
                                           : WorkloadState::WaitSecondary;
                    if (r.state == WorkloadState::Running) setState(r, ws, t);
                    else if (r.state == WorkloadState::Parked) dropTentativeCore(r);
                    // Ready stays Ready; an existing wait keeps its flavor
                    break;
                }
                case ArbAction::DelayMagic:
                    if (r.state == WorkloadState::Running ||
                        r.state == WorkloadState::WaitPrimary ||
                        r.state == WorkloadState::WaitSecondary ||
                        r.state == WorkloadState::Parked)
                        setState(r, WorkloadState::Ready, t);  // keeps its core
                    r.tentativeCore = false;
                    break;
                case ArbAction::Park:
                    if (r.state == WorkloadState::Running) {
                        for (TileId a : r.core) releaseTile(a);
                        r.core.clear();
                        setState(r, WorkloadState::Parked, t);
                        resourceEvent_ = true;
                    } else if (r.state == WorkloadState::Parked) {
                        dropTentativeCore(r);
                    }
                    break;
            }
        }
    }

    void dropTentativeCore(Resident& r) {
        for (TileId a : r.core) releaseTile(a);
        r.core.clear();
        r.tentativeCore = false;
    }

    void executeGrant(Resident& r, const ArbDecision& d, Cycle t) {
        const PhaseDescriptor& ph = r.phases[r.phaseIdx];
        if (cfg_.mode == MagicMode::Cultivation && ph.magicStates > field_.readyCount()) {
            // lost a same-tick race; behave as magic-delayed
            if (r.state != WorkloadState::Ready) setState(r, WorkloadState::Ready, t);
            r.tentativeCore = false;
            return;
        }
        int need = d.primaryGrant + d.secondaryGrant;
        std::vector<TileId> tiles;
        for (TileId a : r.ring) {
            if (static_cast<int>(tiles.size()) >= d.primaryGrant) break;
            if (occ_.isFree(a)) tiles.push_back(a);
        }
        size_t nPrimary = tiles.size();

        // Hierarchy-aware spill stays out of other residents' scratchpad
        // rings; without it a grant may strand a neighbor at its boundary.
        std::vector<std::uint8_t> reserved;
        if (cfg_.policy.arbitration == ArbitrationKind::Hierarchy) {
            reserved.assign(g_.size(), 0);
            for (const Resident& other : residents_) {
                if (&other == &r) continue;
                if (other.state == WorkloadState::Queue ||
                    other.state == WorkloadState::Complete)
                    continue;
                for (TileId a : other.ring) reserved[a] = 1;
            }
            for (TileId a : r.ring) reserved[a] = 0;
        }
        for (TileId a : r.localAncilla) {
            if (static_cast<int>(tiles.size()) >= need) break;
            if (!occ_.isFree(a)) continue;
            if (!reserved.empty() && reserved[a]) continue;
            if (std::find(tiles.begin(), tiles.end(), a) != tiles.end()) continue;
            tiles.push_back(a);
        }
        // A hierarchy grant may still claim reserved tiles when nothing else
        // is left; reservation is a preference, starvation is worse.
        if (!reserved.empty()) {
            for (TileId a : r.localAncilla) {
                if (static_cast<int>(tiles.size()) >= need) break;
                if (!occ_.isFree(a)) continue;
                if (std::find(tiles.begin(), tiles.end(), a) != tiles.end()) continue;
                tiles.push_back(a);
            }
        }
        if (static_cast<int>(tiles.size()) < need) {
            // pool accounting said yes but the routable tiles are gone
            if (r.state == WorkloadState::Running)
                setState(r, WorkloadState::WaitSecondary, t);
            else if (r.state == WorkloadState::Parked)
                dropTentativeCore(r);
            return;
        }
        for (size_t k = 0; k < tiles.size(); ++k)
            occupyTile(tiles[k], r.id, k < nPrimary ? OwnKind::Primary : OwnKind::Secondary);
        r.heldPhase = std::move(tiles);

        if (r.state == WorkloadState::WaitPrimary || r.state == WorkloadState::WaitSecondary ||
            r.state == WorkloadState::Parked) {
            setState(r, WorkloadState::Ready, t);
            r.tentativeCore = false;
        }
        if (r.state == WorkloadState::Ready) setState(r, WorkloadState::Running, t);
        r.atBoundary = false;

        if (ph.magicStates == 0) {
            r.phaseEndAt = t + ph.duration;
        } else if (cfg_.mode == MagicMode::Cultivation) {
            auto magic = field_.assignMagic(g_, r.data[0], ph.magicStates);
            for (TileId m : magic) field_.consume(m);
            r.phaseEndAt = t + 1 + ph.duration;
        } else {
            r.awaitingBooking = true;
            r.phaseEndAt = t + ph.duration;  // provisional; fixed in bookMagic
        }
    }

    // ---- magic-state port booking ----

    void bookMagic(Cycle t) {
        if (cfg_.mode != MagicMode::Ports) return;
        std::vector<Resident*> pending;
        for (Resident& r : residents_)
            if (r.awaitingBooking) pending.push_back(&r);
        if (pending.empty()) return;

        std::vector<MagicRequest> reqs;
        std::vector<int> lat;
        for (Resident* r : pending) {
            reqs.push_back({r->id, t, r->phases[r->phaseIdx].magicStates});
            lat.push_back(*std::min_element(r->portLatency.begin(), r->portLatency.end()));
        }
        for (size_t i : magicServiceOrder(reqs, lat, t)) {
            Resident& r = *pending[i];
            Cycle first = std::numeric_limits<Cycle>::max(), last = 0;
            for (int k = 0; k < reqs[i].count; ++k) {
                PortGrant pg = assignPort(ports_, reqs[i], r.portLatency, t,
                                          cfg_.policy.portChoice, rng_());
                first = std::min(first, pg.deliveryAt);
                last = std::max(last, pg.deliveryAt);
            }
            Cycle dur = r.phases[r.phaseIdx].duration;
            r.phaseEndAt = std::max({t + dur, first + dur, last + 1});
            r.awaitingBooking = false;
        }
    }

    // ---- bookkeeping ----

    void recordRow(Cycle t) {
        TickRow row;
        row.t = t;
        for (TileId v : g_.dataTiles()) row.freeTotal += occ_.isFree(v);
        for (TileId v : g_.ancillaTiles()) row.freeTotal += occ_.isFree(v);
        if (row.freeTotal == 0) {
            row.cmaxFrac = 1.0;
        } else {
            size_t largest = 0;
            for (auto& comp : freeComponents(g_, occ_)) largest = std::max(largest, comp.size());
            row.cmaxFrac = static_cast<double>(largest) / row.freeTotal;
        }
        for (const Resident& r : residents_) {
            switch (r.state) {
                case WorkloadState::Running: ++row.nRunning; break;
                case WorkloadState::Parked: ++row.nParked; break;
                case WorkloadState::WaitPrimary: ++row.nWaitP; break;
                case WorkloadState::WaitSecondary: ++row.nWaitS; break;
                default: break;
            }
        }
        out_.trace.push_back(row);
    }

    bool anyTransitionsPending() const {
        // a stall is only a deadlock when nothing is mid-phase
        for (const Resident& r : residents_)
            if (r.state == WorkloadState::Running && !r.atBoundary) return false;
        return true;
    }

    /// First tick that needs full processing after t; t+1 if anything is live.
    Cycle quietUntil(Cycle t, const std::vector<size_t>& arrivalOrder, size_t nextArrival) {
        if (resourceEvent_) return t + 1;
        Cycle target = cfg_.horizon;
        for (const Resident& r : residents_) {
            switch (r.state) {
                case WorkloadState::Queue:
                case WorkloadState::Parked:
                    break;  // woken by resource events only
                case WorkloadState::Running:
                    if (r.atBoundary || r.awaitingBooking) return t + 1;
                    target = std::min(target, r.phaseEndAt - 1);
                    break;
                case WorkloadState::Complete:
                    break;
                default:
                    return t + 1;  // Ready / waiting states retry every tick
            }
        }
        if (nextArrival < arrivalOrder.size())
            target = std::min(target, ws_[arrivalOrder[nextArrival]].arrivalTime);
        if (cfg_.policy.placement == PlacementKind::Random && anyQueued())
            target = std::min(target, nextAdmitRetry_);
        return std::max(target, t + 1);
    }

    void finishDwell(Cycle tEnd) {
        for (Resident& r : residents_) {
            if (r.state == WorkloadState::Complete) continue;
            out_.workloads[r.wIndex].dwell[static_cast<int>(r.state)] += tEnd - r.stateSince;
            r.stateSince = tEnd;
        }
        if (out_.makespan == 0) out_.makespan = tEnd;
    }

    const SimConfig& cfg_;
    FloorplanGraph g_;
    Occupancy occ_;
    const std::vector<Workload>& ws_;
    SimResult& out_;
    std::mt19937_64 rng_;
    std::function<double()> draw_;
    std::vector<PortModel> ports_;
    CultivationField field_;
    std::vector<Resident> residents_;
    int coreBudget_ = 0;
    bool resourceEvent_ = false;
};

SimResult runCore(const SimConfig& cfg, const std::vector<Workload>& ws) {
    SimResult out;
    out.workloads.resize(ws.size());
    for (size_t i = 0; i < ws.size(); ++i) {
        out.workloads[i].id = ws[i].id;
        out.workloads[i].arrival = ws[i].arrivalTime;
    }
    Sim sim(cfg, ws, out);
    sim.run();
    return out;
}

}  // namespace

double SimResult::totalSolo() const {
    // only work actually finished counts toward throughput
    double s = 0;
    for (const auto& w : workloads)
        if (w.completedAt >= 0) s += static_cast<double>(w.soloTime);
    return s;
}

double SimResult::normalizedThroughput() const {
    return makespan > 0 ? totalSolo() / static_cast<double>(makespan) : 0.0;
}

double SimResult::meanSlowdown() const {
    double s = 0;
    int n = 0;
    for (const auto& w : workloads)
        if (w.completedAt >= 0 && w.soloTime > 0) {
            s += w.slowdown();
            ++n;
        }
    return n > 0 ? s / n : 0.0;
}

Cycle runSolo(const SimConfig& cfg, const Workload& w) {
    SimConfig solo = cfg;
    solo.recordTrace = false;
    solo.useGivenArrivals = true;
    // Solo times are the policy-independent normalizer: always the reference
    // mechanics. Per-policy solo baselines would inflate a bad policy's
    // numerator and denominator together and hide its cost.
    solo.policy = PolicyConfig::proposed();
    Workload alone = w;
    alone.arrivalTime = 0;
    SimResult r = runCore(solo, {alone});
    if (r.workloads[0].completedAt < 0)
        throw std::runtime_error("solo run did not complete within horizon");
    return r.workloads[0].completedAt;
}

SimResult runSimulation(const SimConfig& cfg, std::vector<Workload> workloads) {
    std::vector<Cycle> solo(workloads.size());
    Cycle soloSum = 0;
    for (size_t i = 0; i < workloads.size(); ++i) {
        solo[i] = runSolo(cfg, workloads[i]);
        soloSum += solo[i];
    }
    if (!cfg.useGivenArrivals) {
        double scale = cfg.arrivalNormCount > 0 && !workloads.empty()
                           ? static_cast<double>(cfg.arrivalNormCount) /
                                 static_cast<double>(workloads.size())
                           : 1.0;
        Cycle w = cfg.arrivalWindow >= 0
                      ? cfg.arrivalWindow
                      : static_cast<Cycle>(cfg.arrivalSpanFrac * scale *
                                           static_cast<double>(soloSum));
        // Poisson process: exponential inter-arrivals with mean W / N
        std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
        double mean = workloads.empty() ? 0.0
                                        : static_cast<double>(w) /
                                              static_cast<double>(workloads.size());
        std::exponential_distribution<double> gap(mean > 0 ? 1.0 / mean : 1.0);
        double at = 0.0;
        for (auto& wl : workloads) {
            wl.arrivalTime = static_cast<Cycle>(at);
            at += mean > 0 ? gap(rng) : 0.0;
        }
    }
    SimResult out = runCore(cfg, workloads);
    for (size_t i = 0; i < workloads.size(); ++i) out.workloads[i].soloTime = solo[i];
    return out;
}

}  // namespace scmp
