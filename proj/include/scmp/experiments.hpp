#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scmp/config.hpp"
#include "scmp/metrics.hpp"

namespace scmp {

/// One fully resolved (config, seed) run of a sweep.
struct RunSpec {
    std::string name;   // unique within the sweep, used as file stem
    std::string group;  // aggregation key, e.g. the policy or mix label
    Scenario scenario;
};

/// Expands a preset into runs. Presets: rq1 (policy comparison), rq2-ablation
/// (C0..C3), rq2-scaling (4 floorplan sizes x 3 policies), rq3 (4 mixes x
/// workload counts at a pinned arrival window), rq4 (ports vs cultivation).
std::vector<RunSpec> presetRuns(const std::string& preset,
                                const std::vector<std::uint64_t>& seeds);

/// Samples (or loads) the scenario's workloads and runs the simulation.
SimResult runScenario(const Scenario& sc);

struct RunOutcome {
    std::string name;
    std::string group;
    std::uint64_t seed = 0;
    MetricsReport metrics;
    std::string error;  // non-empty if the run failed
};

/// Runs all specs (up to `jobs` in parallel). When outDir is non-empty,
/// writes <name>.trace.csv (if traced) and <name>.summary.json per run plus
/// aggregate.json with per-group mean/stddev across seeds. Per-run failures
/// are recorded and the sweep continues.
std::vector<RunOutcome> runSweep(const std::vector<RunSpec>& specs, int jobs,
                                 const std::string& outDir);

std::string aggregateToJson(const std::vector<RunOutcome>& outcomes);

}  // namespace scmp
