#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scmp/metrics.hpp"

#include <json.hpp>

using namespace scmp;

namespace {

WorkloadRecord record(WorkloadId id, Cycle arrival, Cycle done, Cycle solo) {
    WorkloadRecord w;
    w.id = id;
    w.arrival = arrival;
    w.completedAt = done;
    w.soloTime = solo;
    return w;
}

SimResult twoWorkloadResult() {
    SimResult r;
    r.makespan = 200;
    r.workloads.push_back(record(0, 0, 100, 50));   // slowdown 2
    r.workloads.push_back(record(1, 10, 160, 50));  // slowdown 3
    return r;
}

}  // namespace

TEST_CASE("normalized throughput is total solo time over makespan") {
    auto r = twoWorkloadResult();
    CHECK(normalizedThroughput(r) == doctest::Approx(100.0 / 200.0));
}

TEST_CASE("slowdown skips incomplete workloads") {
    auto r = twoWorkloadResult();
    r.workloads.push_back(record(2, 0, -1, 50));  // never finished
    auto s = slowdown(r);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == doctest::Approx(2.0));
    CHECK(s[1] == doctest::Approx(3.0));
}

TEST_CASE("metrics report aggregates mean, stddev, and completion counts") {
    auto r = twoWorkloadResult();
    r.workloads.push_back(record(2, 0, -1, 50));
    auto m = computeMetrics(r);
    CHECK(m.meanSlowdown == doctest::Approx(2.5));
    CHECK(m.stddevSlowdown == doctest::Approx(std::sqrt(0.5)));  // sample stddev of {2,3}
    CHECK(m.completed == 2);
    CHECK(m.total == 3);
    CHECK(m.makespan == 200);
}

TEST_CASE("wait breakdown is dwell time over total lifetime") {
    SimResult r;
    WorkloadRecord w;
    w.dwell[static_cast<int>(WorkloadState::Queue)] = 10;
    w.dwell[static_cast<int>(WorkloadState::Running)] = 70;
    w.dwell[static_cast<int>(WorkloadState::WaitSecondary)] = 20;
    r.workloads.push_back(w);
    auto wb = waitBreakdown(r);
    CHECK(wb.queue == doctest::Approx(0.1));
    CHECK(wb.waitSecondary == doctest::Approx(0.2));
    CHECK(wb.parked == doctest::Approx(0.0));

    SimResult empty;
    auto none = waitBreakdown(empty);
    CHECK(none.queue == 0.0);
}

TEST_CASE("cmax statistics come from the trace") {
    SimResult r = twoWorkloadResult();
    r.trace.push_back({0, 100, 1.0, 0, 0, 0, 0});
    r.trace.push_back({1, 80, 0.5, 1, 0, 0, 0});
    r.trace.push_back({2, 60, 0.9, 1, 0, 0, 0});
    auto m = computeMetrics(r);
    CHECK(cmax(r.trace[1]) == doctest::Approx(0.5));
    CHECK(m.cmaxMean == doctest::Approx(0.8));
    CHECK(m.cmaxMax == doctest::Approx(1.0));
}

TEST_CASE("trace CSV has the pinned header and one row per tick") {
    std::vector<TickRow> trace{{0, 190, 1.0, 2, 0, 1, 0}, {5, 60, 0.25, 3, 1, 0, 2}};
    auto csv = traceToCsv(trace);
    CHECK(csv.rfind("t,free_total,cmax_frac,n_running,n_parked,n_waitp,n_waits\n", 0) == 0);
    CHECK(csv.find("0,190,1,2,0,1,0\n") != std::string::npos);
    CHECK(csv.find("5,60,0.25,3,1,0,2\n") != std::string::npos);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 3);
}

TEST_CASE("metrics and summary serialize to parseable JSON") {
    auto r = twoWorkloadResult();
    auto m = computeMetrics(r);
    auto jm = nlohmann::json::parse(metricsToJson(m));
    CHECK(jm.at("eta").get<double>() == doctest::Approx(0.5));
    CHECK(jm.at("completed").get<int>() == 2);
    CHECK(jm.at("wait_breakdown").contains("wait_secondary"));

    auto js = nlohmann::json::parse(summaryToJson(r));
    REQUIRE(js.at("workloads").size() == 2);
    CHECK(js.at("workloads")[0].at("slowdown").get<double>() == doctest::Approx(2.0));
    CHECK(js.at("metrics").at("mean_slowdown").get<double>() == doctest::Approx(2.5));
}
