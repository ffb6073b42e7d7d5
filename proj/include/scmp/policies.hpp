#pragma once

#include "scmp/floorplan.hpp"
#include "scmp/placement.hpp"
#include "scmp/workload.hpp"

#include <span>
#include <vector>

namespace scmp {

enum class WorkloadState : std::uint8_t {
    Queue,
    Ready,
    Running,
    Parked,
    WaitPrimary,
    WaitSecondary,
    Complete
};
inline constexpr int kNumStates = 7;

const char* toString(WorkloadState s);
bool legalTransition(WorkloadState from, WorkloadState to);

struct MagicRequest {
    WorkloadId workload = 0;
    Cycle issuedAt = 0;
    int count = 1;  // remaining magic states for the current phase
};

/// Fixed magic-state port with warmup and per-state production latency.
struct PortModel {
    TileId port = kNoTile;
    Cycle tInit = 11;
    Cycle tPrep = 11;
    Cycle busyUntil = 0;
    bool warmed = false;
};

struct PortGrant {
    size_t portIndex = 0;
    Cycle deliveryAt = 0;
};

enum class PortChoice : std::uint8_t { MinDeliver, Nearest, RandomIdle };

/// Books the next production slot of the port minimizing delivery time
/// t_init (once) + t_prep + L, starting no earlier than max(t, busyUntil).
/// `latency[p]` is the hop distance from port p to the requesting workload.
/// Updates the chosen port's busyUntil/warmed state.
PortGrant assignPort(std::vector<PortModel>& ports, const MagicRequest& req,
                     const std::vector<int>& latency, Cycle now,
                     PortChoice choice = PortChoice::MinDeliver,
                     std::uint64_t randomDraw = 0);

/// Sorts contending requests by (-age, latency-to-chosen-port, workload id):
/// oldest first, then lower latency, then lower id. `latency[i]` pairs with
/// requests[i].
std::vector<size_t> magicServiceOrder(std::span<const MagicRequest> requests,
                                      std::span<const int> latency, Cycle now);

enum class PlacementKind : std::uint8_t { Compact, Random };
enum class ArbitrationKind : std::uint8_t { Hierarchy, FifoAny };
enum class AdmissionKind : std::uint8_t { Preference, Fifo };

/// Policy knobs; named policies and ablation rows are fixed combinations.
struct PolicyConfig {
    PlacementKind placement = PlacementKind::Compact;
    ArbitrationKind arbitration = ArbitrationKind::Hierarchy;
    AdmissionKind admission = AdmissionKind::Preference;
    PortChoice portChoice = PortChoice::MinDeliver;

    static PolicyConfig proposed();
    static PolicyConfig naive();
    static PolicyConfig random();
    static PolicyConfig ablation(int level);  // 0..3 for C0..C3
    static PolicyConfig fromName(const std::string& name, const std::string& ablation);
};

// ---- Ancilla arbitration (one scheduler boundary) ----

struct ArbCandidate {
    WorkloadId workload = 0;
    PhaseDescriptor phase;
    Cycle boundarySince = 0;   // when the pending phase was exposed
    bool freshBoundary = false;  // phase became pending this tick (still Running)
    int ringFree = 0;   // free primary-scratchpad tiles adjacent to the core
    int ringTotal = 0;  // all ancilla tiles adjacent to the core
    int coreSize = 0;   // |A_i^min|
    int magicReadyNeeded = 0;  // cultivation mode: ready tiles required, else 0
};

enum class ArbAction : std::uint8_t { Grant, WaitPrimary, WaitSecondary, Park, DelayMagic };

struct ArbDecision {
    WorkloadId workload = 0;
    ArbAction action = ArbAction::Grant;
    int primaryGrant = 0;
    int secondaryGrant = 0;  // includes spill of unsatisfiable primary demand
};

struct ArbPools {
    int freeSecondary = 0;   // free ancilla outside all cores
    int coreBudget = 0;      // C_A
    int coreCommitted = 0;   // sum of resident |A_i^min|
    int magicReady = 0;      // cultivation ready-set size
};

/// Grants phases at a scheduler boundary. Hierarchy mode: parks residents
/// exceeding the core budget (lowest priority first), grants in
/// (blocking, oldest, lowest-id) order, carving primary tiles from each
/// workload's ring and spilling the deficit to the secondary pool; a fresh
/// boundary that fails while a higher-priority candidate is starved parks
/// instead of waiting. FifoAny mode: oldest-first grants from the shared pool
/// with no hierarchy and no parking.
std::vector<ArbDecision> ancillaArbitrate(std::span<const ArbCandidate> candidates,
                                          ArbPools pools, ArbitrationKind kind, Cycle now,
                                          Cycle parkPatience);

// ---- Admission ----

struct AdmissionCandidate {
    WorkloadId workload = 0;
    int qubits = 0;
    Cycle arrival = 0;
    bool fitsOneRegion = false;
    int bestRegionSlack = 0;  // sigma: data slack of the smallest hosting region
};

/// Orders admissible workloads. Preference: non-fragmenting (fits a single
/// free region) first, then larger, then older. Fifo: arrival order.
std::vector<size_t> admissionOrder(std::span<const AdmissionCandidate> candidates,
                                   AdmissionKind kind);

/// Data-limited admission order (scenario where data tiles are the
/// bottleneck): feasible workloads sorted lexicographically by
/// (-qubits, region slack).
std::vector<size_t> dataLimitedOrder(std::span<const AdmissionCandidate> candidates);

}  // namespace scmp
