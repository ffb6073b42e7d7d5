#include "scmp/metrics.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace scmp {

using json = nlohmann::json;

double normalizedThroughput(const SimResult& r) { return r.normalizedThroughput(); }

std::vector<double> slowdown(const SimResult& r) {
    std::vector<double> out;
    for (const auto& w : r.workloads)
        if (w.completedAt >= 0 && w.soloTime > 0) out.push_back(w.slowdown());
    return out;
}

double cmax(const TickRow& row) { return row.cmaxFrac; }

WaitBreakdown waitBreakdown(const SimResult& r) {
    WaitBreakdown wb;
    double lifetime = 0.0;
    std::array<double, kNumStates> dwell{};
    for (const auto& w : r.workloads) {
        for (int s = 0; s < kNumStates; ++s) {
            dwell[s] += static_cast<double>(w.dwell[s]);
            lifetime += static_cast<double>(w.dwell[s]);
        }
    }
    if (lifetime <= 0) return wb;
    wb.queue = dwell[static_cast<int>(WorkloadState::Queue)] / lifetime;
    wb.parked = dwell[static_cast<int>(WorkloadState::Parked)] / lifetime;
    wb.waitPrimary = dwell[static_cast<int>(WorkloadState::WaitPrimary)] / lifetime;
    wb.waitSecondary = dwell[static_cast<int>(WorkloadState::WaitSecondary)] / lifetime;
    return wb;
}

MetricsReport computeMetrics(const SimResult& r) {
    MetricsReport m;
    m.eta = r.normalizedThroughput();
    auto s = slowdown(r);
    for (double v : s) m.meanSlowdown += v;
    if (!s.empty()) m.meanSlowdown /= static_cast<double>(s.size());
    for (double v : s) m.stddevSlowdown += (v - m.meanSlowdown) * (v - m.meanSlowdown);
    if (s.size() > 1)
        m.stddevSlowdown = std::sqrt(m.stddevSlowdown / static_cast<double>(s.size() - 1));
    else
        m.stddevSlowdown = 0.0;
    m.waits = waitBreakdown(r);
    if (!r.trace.empty()) {
        for (const auto& row : r.trace) {
            m.cmaxMean += row.cmaxFrac;
            m.cmaxMax = std::max(m.cmaxMax, row.cmaxFrac);
        }
        m.cmaxMean /= static_cast<double>(r.trace.size());
    }
    m.makespan = r.makespan;
    m.total = static_cast<int>(r.workloads.size());
    for (const auto& w : r.workloads) m.completed += (w.completedAt >= 0);
    m.horizonHit = r.horizonHit;
    return m;
}

static json metricsJson(const MetricsReport& m) {
    return json{{"eta", m.eta},
                {"mean_slowdown", m.meanSlowdown},
                {"stddev_slowdown", m.stddevSlowdown},
                {"wait_breakdown",
                 {{"queue", m.waits.queue},
                  {"parked", m.waits.parked},
                  {"wait_primary", m.waits.waitPrimary},
                  {"wait_secondary", m.waits.waitSecondary}}},
                {"cmax_mean", m.cmaxMean},
                {"cmax_max", m.cmaxMax},
                {"makespan", m.makespan},
                {"completed", m.completed},
                {"total", m.total},
                {"horizon_hit", m.horizonHit}};
}

std::string metricsToJson(const MetricsReport& m) { return metricsJson(m).dump(2); }

std::string summaryToJson(const SimResult& r) {
    json per = json::array();
    for (const auto& w : r.workloads) {
        json dwell;
        for (int s = 0; s < kNumStates; ++s)
            dwell[toString(static_cast<WorkloadState>(s))] = w.dwell[s];
        per.push_back({{"id", w.id},
                       {"arrival", w.arrival},
                       {"admitted_at", w.admittedAt},
                       {"completed_at", w.completedAt},
                       {"solo_time", w.soloTime},
                       {"slowdown", w.completedAt >= 0 && w.soloTime > 0 ? w.slowdown() : -1.0},
                       {"dwell", dwell}});
    }
    json out{{"metrics", metricsJson(computeMetrics(r))}, {"workloads", per}};
    return out.dump(2);
}

std::string traceToCsv(const std::vector<TickRow>& trace) {
    std::ostringstream os;
    os << "t,free_total,cmax_frac,n_running,n_parked,n_waitp,n_waits\n";
    for (const auto& r : trace) {
        os << r.t << ',' << r.freeTotal << ',' << r.cmaxFrac << ',' << r.nRunning << ','
           << r.nParked << ',' << r.nWaitP << ',' << r.nWaitS << '\n';
    }
    return os.str();
}

}  // namespace scmp
