#pragma once

#include "scmp/floorplan.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace scmp {

/// One workload's data demand. `anchor` is the fixed magic-state port in port
/// mode, or the desired seed location in port-free mode; the cluster seeds at
/// the free data vertex nearest to it.
struct ClusterDemand {
    WorkloadId id = 0;
    int qubits = 0;
    TileId anchor = kNoTile;
};

struct CompactCluster {
    WorkloadId id = 0;
    std::vector<TileId> tiles;  // in growth order; tiles[0] is the seed
};

struct PartitionResult {
    std::vector<CompactCluster> clusters;
    /// Global assignment sequence (workload, tile) in the order vertices were
    /// claimed; lets a checker replay the shared free pool.
    std::vector<std::pair<WorkloadId, TileId>> order;
};

/// Greedy compact partitioning restricted to `freeData`. Clusters seed at the
/// free data vertex nearest each demand's anchor, then grow round-robin, each
/// step adding the free data vertex closest to the partial cluster. Ties take
/// the lowest TileId. Returns nullopt when freeData is exhausted first.
/// `opCounter`, when given, accumulates the number of argmin scan steps.
std::optional<PartitionResult> compactPartition(const FloorplanGraph& g,
                                                const std::vector<ClusterDemand>& demands,
                                                const std::vector<TileId>& freeData,
                                                std::uint64_t* opCounter = nullptr);

struct CoreResult {
    std::vector<TileId> ancilla;  // consumed free ancilla, in attachment order
    std::vector<std::pair<TileId, TileId>> edges;
};

/// Incremental rooted core construction. Starting from {root}, repeatedly
/// attaches the data vertex reachable through the fewest new free ancilla
/// (multi-source 0-1 shortest paths; already-claimed vertices and data
/// terminals traverse at zero cost). Consumed ancilla are cleared from
/// `freeAncilla` (a per-tile availability bitmap). Returns nullopt when some
/// data vertex is unreachable; the bitmap is left unchanged in that case.
std::optional<CoreResult> buildCore(const FloorplanGraph& g, const std::vector<TileId>& data,
                                    TileId root, std::vector<std::uint8_t>& freeAncilla,
                                    std::mt19937_64* rng = nullptr);

/// Resident subgraph of one workload plus its primary scratchpad.
struct ResidentAllocation {
    WorkloadId workload = 0;
    std::vector<TileId> data;
    std::vector<TileId> core;  // A_i, the minimum core ancilla
    std::optional<TileId> port;
    std::vector<std::pair<TileId, TileId>> edges;
    std::vector<TileId> scratchpad;  // P_i

    std::vector<TileId> vertices() const;  // D_i + A_i (+ port)
};

struct ScratchpadResult {
    std::vector<std::vector<TileId>> perWorkload;  // P_i, may overlap across workloads
    std::vector<TileId> shared;                    // S
};

ScratchpadResult deriveScratchpads(const FloorplanGraph& g,
                                   const std::vector<ResidentAllocation>& allocations,
                                   const std::vector<std::uint8_t>& freeAncilla);

struct PortDemand {
    WorkloadId id = 0;
    int qubits = 0;
    TileId port = kNoTile;  // kNoTile in port-free mode: root is the seed
};

/// Full static allocator: compact partitioning, rooted cores in input order,
/// then scratchpad derivation. Returns nullopt if either stage fails.
std::optional<std::vector<ResidentAllocation>> staticAllocate(
    const FloorplanGraph& g, const std::vector<PortDemand>& demands);

}  // namespace scmp
