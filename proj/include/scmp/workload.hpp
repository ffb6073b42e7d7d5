#pragma once

#include "scmp/floorplan.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace scmp {

enum class PauliAxis : std::uint8_t { X, Y, Z };

struct TGate {
    int qubit;
    int column;
    PauliAxis axis;
};

/// Synthetic Clifford+T circuit descriptor.
struct Workload {
    WorkloadId id = 0;
    int qubits = 0;
    int columns = 0;
    std::vector<TGate> tGates;                 // sorted by (column, qubit)
    std::vector<std::uint8_t> columnPhaseBits; // one Bernoulli(0.5) bit per column
    Cycle arrivalTime = 0;

    /// T-gate count per column.
    std::vector<int> tGatesPerColumn() const;
    int totalTGates() const { return static_cast<int>(tGates.size()); }
};

/// Scheduler-visible next-phase tuple.
struct PhaseDescriptor {
    int index = 0;        // phase position within the workload
    int primaryTiles = 0; // requested primary-scratchpad tile count
    int secondaryTiles = 0;
    int magicStates = 0;  // per-phase magic-state consumption
    Cycle duration = 1;
    bool blocking = false;
};

enum class MixCategory { Small, Medium, Big, Balanced };

struct WorkloadMix {
    MixCategory category = MixCategory::Balanced;
    int count = 100;
    std::uint64_t seed = 1;
};

struct PhaseModelConfig {
    Cycle cliffordDuration = 1;
    Cycle tLayerDuration = 3;
    int routingSlack = 1;
};

/// Samples tBudget distinct (qubit, column) cells uniformly without
/// replacement, each with a uniform axis; per-column phase bits at p=0.5.
/// Deterministic given seed.
Workload generateWorkload(int qubits, int columns, int tBudget, std::uint64_t seed);

/// Draws workload sizes and T-depths per mix category. Arrival times are left
/// at zero; the engine's arrival model assigns them.
std::vector<Workload> sampleMix(const WorkloadMix& mix);

/// One descriptor per circuit column, in column order.
std::vector<PhaseDescriptor> phaseSequence(const Workload& w, const PhaseModelConfig& cfg = {});

MixCategory mixCategoryFromString(const std::string& s);
std::string toString(MixCategory c);

std::string workloadsToJson(const std::vector<Workload>& ws);
std::vector<Workload> workloadsFromJson(const std::string& text);

}  // namespace scmp
