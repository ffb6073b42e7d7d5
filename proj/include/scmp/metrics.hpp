#pragma once

#include <string>
#include <vector>

#include "scmp/engine.hpp"

namespace scmp {

/// Normalized throughput: sum of solo runtimes over shared-run makespan.
double normalizedThroughput(const SimResult& r);

/// Per-workload slowdown S_i = (completion - arrival) / soloTime, in workload
/// order; incomplete workloads are skipped.
std::vector<double> slowdown(const SimResult& r);

/// Largest free connected component as a fraction of all free tiles at one
/// trace row (1.0 when nothing is free).
double cmax(const TickRow& row);

/// Fraction of total admitted-workload lifetime spent per state.
struct WaitBreakdown {
    double queue = 0.0;
    double parked = 0.0;
    double waitPrimary = 0.0;
    double waitSecondary = 0.0;
};
WaitBreakdown waitBreakdown(const SimResult& r);

struct MetricsReport {
    double eta = 0.0;
    double meanSlowdown = 0.0;
    double stddevSlowdown = 0.0;
    WaitBreakdown waits;
    double cmaxMean = 0.0;  // over the trace, 0 if no trace
    double cmaxMax = 0.0;
    Cycle makespan = 0;
    int completed = 0;
    int total = 0;
    bool horizonHit = false;
};

MetricsReport computeMetrics(const SimResult& r);

std::string metricsToJson(const MetricsReport& m);

/// Per-run summary: global metrics plus per-workload timings.
std::string summaryToJson(const SimResult& r);

/// Trace CSV, one row per tick:
/// t, free_total, cmax_frac, n_running, n_parked, n_waitp, n_waits
std::string traceToCsv(const std::vector<TickRow>& trace);

}  // namespace scmp
