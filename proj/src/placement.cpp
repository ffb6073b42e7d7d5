#include "scmp/placement.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace scmp {

namespace {
constexpr int kInf = std::numeric_limits<int>::max() / 2;
}

std::optional<PartitionResult> compactPartition(const FloorplanGraph& g,
                                                const std::vector<ClusterDemand>& demands,
                                                const std::vector<TileId>& freeData,
                                                std::uint64_t* opCounter) {
    const size_t k = demands.size();
    PartitionResult result;
    result.clusters.resize(k);

    std::vector<TileId> pool = freeData;  // unassigned free data vertices
    // Per-cluster distance from each pool candidate to the partial cluster,
    // updated incrementally so each argmin is a single O(|pool|) scan.
    std::vector<std::vector<int>> clusterDist(k);

    auto take = [&](size_t ci, size_t poolIdx) {
        TileId v = pool[poolIdx];
        result.clusters[ci].tiles.push_back(v);
        result.order.emplace_back(demands[ci].id, v);
        pool.erase(pool.begin() + poolIdx);
        for (auto& cd : clusterDist)
            if (!cd.empty()) cd.erase(cd.begin() + poolIdx);
        auto& own = clusterDist[ci];
        for (size_t i = 0; i < pool.size(); ++i)
            own[i] = std::min(own[i], g.dist(pool[i], v));
        if (opCounter) *opCounter += pool.size();
    };

    // Seeding pass.
    for (size_t i = 0; i < k; ++i) {
        result.clusters[i].id = demands[i].id;
        if (demands[i].qubits <= 0) continue;
        if (pool.empty()) return std::nullopt;
        size_t best = 0;
        int bestD = kInf;
        for (size_t p = 0; p < pool.size(); ++p) {
            int d = g.dist(demands[i].anchor, pool[p]);
            if (d < bestD || (d == bestD && pool[p] < pool[best])) {
                bestD = d;
                best = p;
            }
        }
        if (opCounter) *opCounter += pool.size();
        // Initialize this cluster's incremental distances before consuming.
        clusterDist[i].assign(pool.size(), kInf);
        TileId seed = pool[best];
        for (size_t p = 0; p < pool.size(); ++p) clusterDist[i][p] = g.dist(pool[p], seed);
        take(i, best);
    }

    // Round-robin growth.
    bool unfinished = true;
    while (unfinished) {
        unfinished = false;
        for (size_t i = 0; i < k; ++i) {
            if (static_cast<int>(result.clusters[i].tiles.size()) >= demands[i].qubits) continue;
            if (pool.empty()) return std::nullopt;
            size_t best = 0;
            int bestD = kInf;
            for (size_t p = 0; p < pool.size(); ++p) {
                int d = clusterDist[i][p];
                if (d < bestD || (d == bestD && pool[p] < pool[best])) {
                    bestD = d;
                    best = p;
                }
            }
            if (opCounter) *opCounter += pool.size();
            take(i, best);
            if (static_cast<int>(result.clusters[i].tiles.size()) < demands[i].qubits)
                unfinished = true;
        }
    }
    return result;
}

std::optional<CoreResult> buildCore(const FloorplanGraph& g, const std::vector<TileId>& data,
                                    TileId root, std::vector<std::uint8_t>& freeAncilla,
                                    std::mt19937_64* rng) {
    const int n = g.size();
    CoreResult result;

    std::vector<std::uint8_t> inCore(n, 0), isData(n, 0), remaining(n, 0);
    inCore[root] = 1;
    size_t remainingCount = 0;
    for (TileId d : data) {
        isData[d] = 1;
        if (d != root) {
            remaining[d] = 1;
            ++remainingCount;
        }
    }

    std::vector<std::uint8_t> consumed(n, 0);  // staged until success
    std::vector<int> distArr(n);
    std::vector<int> ancCost(n, 1);
    std::vector<TileId> parent(n);

    while (remainingCount > 0) {
        std::fill(distArr.begin(), distArr.end(), kInf);
        std::fill(parent.begin(), parent.end(), kNoTile);
        if (rng) {
            // Random feasible routing: perturb each ancilla's cost so the
            // shortest path under these weights is an arbitrary feasible path.
            for (int t = 0; t < n; ++t)
                ancCost[t] = 1 + static_cast<int>((*rng)() % 4);
        }

        // Multi-source shortest paths from the current core. Vertices in the
        // core or in D_i cost 0; free ancilla cost ancCost (1 when
        // deterministic); everything else is blocked. A priority queue handles
        // both the 0-1 and the randomized weight cases.
        using QEntry = std::pair<int, TileId>;
        std::priority_queue<QEntry, std::vector<QEntry>, std::greater<>> pq;
        for (int t = 0; t < n; ++t) {
            if (inCore[t]) {
                distArr[t] = 0;
                pq.emplace(0, t);
            }
        }
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du != distArr[u]) continue;
            for (TileId v : g.neighbors(u)) {
                int w;
                if (inCore[v] || isData[v]) {
                    w = 0;
                } else if (g.classOf(v) == TileClass::Ancilla && freeAncilla[v] && !consumed[v]) {
                    w = ancCost[v];
                } else {
                    continue;
                }
                // Strict improvement only: equal-cost re-parenting could pair
                // two data vertices with each other and cut the path to the
                // core. The queue pops (cost, tile) in order, so the parent
                // choice is still deterministic.
                int nd = du + w;
                if (nd < distArr[v]) {
                    distArr[v] = nd;
                    parent[v] = u;
                    pq.emplace(nd, v);
                }
            }
        }

        // Next data vertex to attach: cheapest (ties take the lowest TileId),
        // or uniform over the reachable ones when routing randomly.
        TileId bestTarget = kNoTile;
        if (rng) {
            std::vector<TileId> reach;
            for (int t = 0; t < n; ++t)
                if (remaining[t] && distArr[t] < kInf) reach.push_back(t);
            if (!reach.empty()) bestTarget = reach[(*rng)() % reach.size()];
        } else {
            // Most constrained first: among the cheapest targets, prefer the
            // one with the fewest equal-cost approach edges. Committing it
            // early leaves its path ancilla in the core for the flexible
            // targets to reuse.
            int bestPreds = 0;
            for (int t = 0; t < n; ++t) {
                if (!remaining[t] || distArr[t] >= kInf) continue;
                int preds = 0;
                for (TileId u : g.neighbors(t))
                    if (distArr[u] == distArr[t]) ++preds;
                if (bestTarget == kNoTile || distArr[t] < distArr[bestTarget] ||
                    (distArr[t] == distArr[bestTarget] && preds < bestPreds)) {
                    bestTarget = t;
                    bestPreds = preds;
                }
            }
        }
        if (bestTarget == kNoTile) return std::nullopt;

        // Walk the path back into the core. In deterministic mode an ancilla
        // step picks, among the equal-cost predecessors, the one nearest to
        // the terminals still waiting: shortest paths tie often, and steering
        // them toward future work is what keeps the core near the optimum.
        std::vector<TileId> future;
        if (!rng)
            for (int t = 0; t < n; ++t)
                if (remaining[t] && t != static_cast<int>(bestTarget)) future.push_back(t);
        TileId v = bestTarget;
        while (!inCore[v]) {
            std::erase(future, v);
            TileId p = parent[v];
            if (!rng && !future.empty()) {
                bool freeAnc = g.classOf(v) == TileClass::Ancilla && !isData[v];
                int want = distArr[v] - (freeAnc ? ancCost[v] : 0);
                int bestD = g.distToSet(p, future);
                for (TileId u : g.neighbors(v)) {
                    if (distArr[u] != want) continue;
                    int d = g.distToSet(u, future);
                    if (d < bestD || (d == bestD && u < p)) {
                        bestD = d;
                        p = u;
                    }
                }
            }
            result.edges.emplace_back(p, v);
            inCore[v] = 1;
            if (remaining[v]) {
                remaining[v] = 0;
                --remainingCount;
            }
            if (g.classOf(v) == TileClass::Ancilla && !isData[v]) {
                consumed[v] = 1;
                result.ancilla.push_back(v);
            }
            v = p;
        }
    }

    for (TileId a : result.ancilla) freeAncilla[a] = 0;
    return result;
}

std::vector<TileId> ResidentAllocation::vertices() const {
    std::vector<TileId> v = data;
    v.insert(v.end(), core.begin(), core.end());
    if (port) v.push_back(*port);
    return v;
}

ScratchpadResult deriveScratchpads(const FloorplanGraph& g,
                                   const std::vector<ResidentAllocation>& allocations,
                                   const std::vector<std::uint8_t>& freeAncilla) {
    ScratchpadResult out;
    for (TileId a : g.ancillaTiles())
        if (freeAncilla[a]) out.shared.push_back(a);
    out.perWorkload.resize(allocations.size());
    std::vector<std::uint8_t> adjacent(g.size());
    for (size_t i = 0; i < allocations.size(); ++i) {
        std::fill(adjacent.begin(), adjacent.end(), 0);
        for (TileId v : allocations[i].vertices())
            for (TileId nb : g.neighbors(v)) adjacent[nb] = 1;
        for (TileId a : out.shared)
            if (adjacent[a]) out.perWorkload[i].push_back(a);
    }
    return out;
}

std::optional<std::vector<ResidentAllocation>> staticAllocate(
    const FloorplanGraph& g, const std::vector<PortDemand>& demands) {
    std::vector<ClusterDemand> cds;
    cds.reserve(demands.size());
    for (const PortDemand& d : demands) {
        if (d.port == kNoTile && d.qubits > 0)
            throw std::invalid_argument("staticAllocate requires a port or explicit anchor");
        cds.push_back({d.id, d.qubits, d.port});
    }
    auto part = compactPartition(g, cds, g.dataTiles());
    if (!part) return std::nullopt;

    std::vector<std::uint8_t> freeAncilla(g.size(), 0);
    for (TileId a : g.ancillaTiles()) freeAncilla[a] = 1;

    std::vector<ResidentAllocation> allocs;
    allocs.reserve(demands.size());
    for (size_t i = 0; i < demands.size(); ++i) {
        ResidentAllocation ra;
        ra.workload = demands[i].id;
        ra.data = part->clusters[i].tiles;
        ra.port = demands[i].port == kNoTile ? std::nullopt : std::make_optional(demands[i].port);
        if (!ra.data.empty() || ra.port) {
            TileId root = ra.port ? *ra.port : ra.data.front();
            auto core = buildCore(g, ra.data, root, freeAncilla);
            if (!core) return std::nullopt;
            ra.core = std::move(core->ancilla);
            ra.edges = std::move(core->edges);
        }
        allocs.push_back(std::move(ra));
    }
    ScratchpadResult pads = deriveScratchpads(g, allocs, freeAncilla);
    for (size_t i = 0; i < allocs.size(); ++i) allocs[i].scratchpad = std::move(pads.perWorkload[i]);
    return allocs;
}

}  // namespace scmp
