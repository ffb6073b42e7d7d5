#include "scmp/policies.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace scmp {

const char* toString(WorkloadState s) {
    switch (s) {
        case WorkloadState::Queue: return "Queue";
        case WorkloadState::Ready: return "Ready";
        case WorkloadState::Running: return "Running";
        case WorkloadState::Parked: return "Parked";
        case WorkloadState::WaitPrimary: return "WaitPrimary";
        case WorkloadState::WaitSecondary: return "WaitSecondary";
        default: return "Complete";
    }
}

bool legalTransition(WorkloadState from, WorkloadState to) {
    using S = WorkloadState;
    switch (from) {
        case S::Queue: return to == S::Ready;
        case S::Ready: return to == S::Running;
        case S::Running:
            return to == S::WaitPrimary || to == S::WaitSecondary || to == S::Parked ||
                   to == S::Complete || to == S::Ready;
        case S::Parked: return to == S::Ready;
        case S::WaitPrimary: return to == S::Ready;
        case S::WaitSecondary: return to == S::Ready;
        default: return false;
    }
}

PortGrant assignPort(std::vector<PortModel>& ports, const MagicRequest& req,
                     const std::vector<int>& latency, Cycle now, PortChoice choice,
                     std::uint64_t randomDraw) {
    if (ports.empty()) throw std::invalid_argument("no ports available");
    (void)req;
    size_t best = ports.size();
    Cycle bestDelivery = std::numeric_limits<Cycle>::max();

    auto deliveryOf = [&](size_t p) {
        Cycle start = std::max(now, ports[p].busyUntil);
        Cycle warmup = ports[p].warmed ? 0 : ports[p].tInit;
        return start + warmup + ports[p].tPrep + latency[p];
    };

    switch (choice) {
        case PortChoice::MinDeliver:
            for (size_t p = 0; p < ports.size(); ++p) {
                Cycle d = deliveryOf(p);
                if (d < bestDelivery) {
                    bestDelivery = d;
                    best = p;
                }
            }
            break;
        case PortChoice::Nearest: {
            int bestL = std::numeric_limits<int>::max();
            for (size_t p = 0; p < ports.size(); ++p) {
                if (latency[p] < bestL) {
                    bestL = latency[p];
                    best = p;
                }
            }
            bestDelivery = deliveryOf(best);
            break;
        }
        case PortChoice::RandomIdle: {
            std::vector<size_t> idle;
            for (size_t p = 0; p < ports.size(); ++p)
                if (ports[p].busyUntil <= now) idle.push_back(p);
            if (idle.empty()) {
                best = randomDraw % ports.size();
            } else {
                best = idle[randomDraw % idle.size()];
            }
            bestDelivery = deliveryOf(best);
            break;
        }
    }

    PortModel& port = ports[best];
    Cycle start = std::max(now, port.busyUntil);
    port.busyUntil = start + (port.warmed ? 0 : port.tInit) + port.tPrep;
    port.warmed = true;
    return {best, bestDelivery};
}

std::vector<size_t> magicServiceOrder(std::span<const MagicRequest> requests,
                                      std::span<const int> latency, Cycle now) {
    std::vector<size_t> order(requests.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        Cycle ageA = now - requests[a].issuedAt;
        Cycle ageB = now - requests[b].issuedAt;
        if (ageA != ageB) return ageA > ageB;
        if (latency[a] != latency[b]) return latency[a] < latency[b];
        return requests[a].workload < requests[b].workload;
    });
    return order;
}

PolicyConfig PolicyConfig::proposed() { return {}; }

PolicyConfig PolicyConfig::naive() {
    PolicyConfig p;
    p.arbitration = ArbitrationKind::FifoAny;
    p.portChoice = PortChoice::Nearest;
    return p;
}

PolicyConfig PolicyConfig::random() {
    PolicyConfig p;
    p.placement = PlacementKind::Random;
    p.arbitration = ArbitrationKind::FifoAny;
    p.admission = AdmissionKind::Fifo;
    p.portChoice = PortChoice::RandomIdle;
    return p;
}

PolicyConfig PolicyConfig::ablation(int level) {
    PolicyConfig p;
    // Port-anchored cluster seeding is part of the placement policy, so the
    // delivery-port rule switches together with it at level 1.
    p.placement = level >= 1 ? PlacementKind::Compact : PlacementKind::Random;
    p.portChoice = level >= 1 ? PortChoice::MinDeliver : PortChoice::Nearest;
    p.arbitration = level >= 2 ? ArbitrationKind::Hierarchy : ArbitrationKind::FifoAny;
    p.admission = level >= 3 ? AdmissionKind::Preference : AdmissionKind::Fifo;
    return p;
}

PolicyConfig PolicyConfig::fromName(const std::string& name, const std::string& ablation) {
    if (!ablation.empty() && ablation != "none") {
        if (ablation.size() == 2 && (ablation[0] == 'C' || ablation[0] == 'c') &&
            ablation[1] >= '0' && ablation[1] <= '3')
            return PolicyConfig::ablation(ablation[1] - '0');
        throw std::invalid_argument("unknown ablation: " + ablation);
    }
    if (name == "proposed") return proposed();
    if (name == "naive") return naive();
    if (name == "random") return random();
    throw std::invalid_argument("unknown policy: " + name);
}

std::vector<ArbDecision> ancillaArbitrate(std::span<const ArbCandidate> candidates,
                                          ArbPools pools, ArbitrationKind kind, Cycle now,
                                          Cycle parkPatience) {
    std::vector<size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), size_t{0});
    if (kind == ArbitrationKind::Hierarchy) {
        // Blocking phases first, then oldest boundary, then lowest id.
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            const auto& ca = candidates[a];
            const auto& cb = candidates[b];
            if (ca.phase.blocking != cb.phase.blocking) return ca.phase.blocking;
            if (ca.boundarySince != cb.boundarySince) return ca.boundarySince < cb.boundarySince;
            return ca.workload < cb.workload;
        });
    } else {
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            const auto& ca = candidates[a];
            const auto& cb = candidates[b];
            if (ca.boundarySince != cb.boundarySince) return ca.boundarySince < cb.boundarySince;
            return ca.workload < cb.workload;
        });
    }

    std::vector<ArbDecision> decisions(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i)
        decisions[i].workload = candidates[i].workload;

    std::vector<char> parked(candidates.size(), 0);
    if (kind == ArbitrationKind::Hierarchy && pools.coreCommitted > pools.coreBudget) {
        // Residency check: shed lowest-priority cores until the budget fits.
        for (auto it = order.rbegin(); it != order.rend() && pools.coreCommitted > pools.coreBudget;
             ++it) {
            const auto& c = candidates[*it];
            if (c.coreSize == 0) continue;
            decisions[*it].action = ArbAction::Park;
            parked[*it] = 1;
            pools.coreCommitted -= c.coreSize;
        }
    }

    // Oldest ancilla-blocked boundary among higher-priority candidates; a
    // fresh lower-priority boundary parks (releasing its core into the shared
    // pool) once that starvation has persisted past the patience window.
    Cycle oldestBlockedAge = -1;
    for (size_t idx : order) {
        if (parked[idx]) continue;
        const ArbCandidate& c = candidates[idx];
        ArbDecision& d = decisions[idx];

        auto failAncilla = [&](ArbAction wait) {
            d.action = wait;
            if (kind == ArbitrationKind::Hierarchy && c.freshBoundary && c.coreSize > 0 &&
                oldestBlockedAge >= parkPatience) {
                d.action = ArbAction::Park;
            }
            oldestBlockedAge = std::max(oldestBlockedAge, now - c.boundarySince);
        };

        int primGrant, secNeed;
        if (kind == ArbitrationKind::Hierarchy) {
            primGrant = std::min(c.phase.primaryTiles, c.ringFree);
            int spill = c.phase.primaryTiles - primGrant;
            if (c.phase.primaryTiles > 0 && c.ringFree == 0 && c.ringTotal > 0) {
                // The local ring exists but is held by someone else.
                failAncilla(ArbAction::WaitPrimary);
                continue;
            }
            secNeed = c.phase.secondaryTiles + spill;
        } else {
            primGrant = 0;
            secNeed = c.phase.primaryTiles + c.phase.secondaryTiles;
        }

        if (secNeed > pools.freeSecondary) {
            failAncilla(ArbAction::WaitSecondary);
            continue;
        }
        if (c.magicReadyNeeded > pools.magicReady) {
            d.action = ArbAction::DelayMagic;
            continue;
        }
        d.action = ArbAction::Grant;
        d.primaryGrant = primGrant;
        d.secondaryGrant = secNeed;
        pools.freeSecondary -= secNeed + primGrant;
        pools.magicReady -= c.magicReadyNeeded;
    }
    return decisions;
}

std::vector<size_t> admissionOrder(std::span<const AdmissionCandidate> candidates,
                                   AdmissionKind kind) {
    std::vector<size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), size_t{0});
    if (kind == AdmissionKind::Fifo) {
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (candidates[a].arrival != candidates[b].arrival)
                return candidates[a].arrival < candidates[b].arrival;
            return candidates[a].workload < candidates[b].workload;
        });
        return order;
    }
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const auto& ca = candidates[a];
        const auto& cb = candidates[b];
        if (ca.fitsOneRegion != cb.fitsOneRegion) return ca.fitsOneRegion;
        if (ca.qubits != cb.qubits) return ca.qubits > cb.qubits;
        if (ca.arrival != cb.arrival) return ca.arrival < cb.arrival;
        return ca.workload < cb.workload;
    });
    return order;
}

std::vector<size_t> dataLimitedOrder(std::span<const AdmissionCandidate> candidates) {
    std::vector<size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const auto& ca = candidates[a];
        const auto& cb = candidates[b];
        if (ca.qubits != cb.qubits) return ca.qubits > cb.qubits;
        if (ca.bestRegionSlack != cb.bestRegionSlack) return ca.bestRegionSlack < cb.bestRegionSlack;
        return ca.workload < cb.workload;
    });
    return order;
}

}  // namespace scmp
