#include "scmp/experiments.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace scmp {

namespace {

using json = nlohmann::json;

Scenario baseScenario(std::uint64_t seed) {
    Scenario sc = scenarioFromConfig(ConfigMap{});
    sc.sim.seed = seed;
    sc.mix.seed = seed;
    sc.sim.recordTrace = false;
    // T-layers route across a lane region an order wider than the T count;
    // this is what puts the shared ancilla pools under load at all
    sc.sim.phaseModel.routingSlack = 10;
    return sc;
}

std::string runName(const std::string& preset, const std::string& group, std::uint64_t seed) {
    std::ostringstream os;
    os << preset << "-" << group << "-s" << seed;
    return os.str();
}

void writeFile(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
}

}  // namespace

std::vector<RunSpec> presetRuns(const std::string& preset,
                                const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("seed list must be non-empty");
    std::vector<RunSpec> out;

    if (preset == "rq1") {
        for (const char* pol : {"proposed", "naive", "random"}) {
            for (auto s : seeds) {
                Scenario sc = baseScenario(s);
                sc.sim.policy = PolicyConfig::fromName(pol, "none");
                sc.sim.recordTrace = true;  // C_max(t) series
                out.push_back({runName(preset, pol, s), pol, sc});
            }
        }
    } else if (preset == "rq2-ablation") {
        for (int level = 0; level <= 3; ++level) {
            std::string grp = "c" + std::to_string(level);
            for (auto s : seeds) {
                Scenario sc = baseScenario(s);
                sc.sim.policy = PolicyConfig::ablation(level);
                out.push_back({runName(preset, grp, s), grp, sc});
            }
        }
    } else if (preset == "rq2-scaling") {
        struct Size {
            int rows, cols, count;
        };
        for (const Size& sz : {Size{20, 12, 100}, Size{30, 18, 250}, Size{40, 24, 400},
                               Size{60, 36, 900}}) {
            for (const char* pol : {"proposed", "naive", "random"}) {
                std::string grp = std::to_string(sz.rows) + "x" + std::to_string(sz.cols) +
                                  "-" + pol;
                for (auto s : seeds) {
                    Scenario sc = baseScenario(s);
                    sc.sim.layout.rows = sz.rows;
                    sc.sim.layout.cols = sz.cols;
                    // keep the boundary-port fraction of the default floorplan
                    int perimeter = 2 * (sz.rows + sz.cols) - 4;
                    sc.sim.layout.num_ports = perimeter * 5 / 6;
                    sc.sim.policy = PolicyConfig::fromName(pol, "none");
                    sc.mix.count = sz.count;
                    out.push_back({runName(preset, grp, s), grp, sc});
                }
            }
        }
    } else if (preset == "rq3") {
        for (MixCategory mix : {MixCategory::Small, MixCategory::Medium, MixCategory::Big,
                                MixCategory::Balanced}) {
            for (int count : {25, 50, 75, 100}) {
                std::string grp = toString(mix) + "-" + std::to_string(count);
                for (auto s : seeds) {
                    Scenario sc = baseScenario(s);
                    sc.mix.category = mix;
                    sc.mix.count = count;
                    // same arrival window at every count: load rises with count
                    sc.sim.arrivalNormCount = 100;
                    sc.sim.arrivalSpanFrac = 1.7;  // below saturation at 100
                    // wider lanes expose ancilla contention as load grows
                    sc.sim.phaseModel.routingSlack = 20;
                    out.push_back({runName(preset, grp, s), grp, sc});
                }
            }
        }
    } else if (preset == "rq4") {
        for (const char* mode : {"ports", "cultivation"}) {
            for (auto s : seeds) {
                Scenario sc = baseScenario(s);
                if (std::string(mode) == "cultivation") {
                    sc.sim.mode = MagicMode::Cultivation;
                    sc.sim.layout.num_ports = 0;
                }
                out.push_back({runName(preset, mode, s), mode, sc});
            }
        }
    } else {
        throw std::invalid_argument("unknown preset: " + preset);
    }
    return out;
}

SimResult runScenario(const Scenario& sc) {
    std::vector<Workload> ws;
    if (!sc.workloadsFile.empty()) {
        std::ifstream f(sc.workloadsFile);
        if (!f) throw std::runtime_error("cannot open workloads file: " + sc.workloadsFile);
        std::ostringstream buf;
        buf << f.rdbuf();
        ws = workloadsFromJson(buf.str());
    } else {
        ws = sampleMix(sc.mix);
    }
    return runSimulation(sc.sim, std::move(ws));
}

std::vector<RunOutcome> runSweep(const std::vector<RunSpec>& specs, int jobs,
                                 const std::string& outDir) {
    if (jobs < 1) jobs = 1;
    if (!outDir.empty()) std::filesystem::create_directories(outDir);

    std::vector<RunOutcome> outcomes(specs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < specs.size(); i = next.fetch_add(1)) {
            const RunSpec& spec = specs[i];
            RunOutcome& oc = outcomes[i];
            oc.name = spec.name;
            oc.group = spec.group;
            oc.seed = spec.scenario.sim.seed;
            try {
                SimResult r = runScenario(spec.scenario);
                oc.metrics = computeMetrics(r);
                if (!outDir.empty()) {
                    auto dir = std::filesystem::path(outDir);
                    if (!r.trace.empty())
                        writeFile(dir / (spec.name + ".trace.csv"), traceToCsv(r.trace));
                    writeFile(dir / (spec.name + ".summary.json"), summaryToJson(r));
                }
            } catch (const std::exception& e) {
                oc.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    if (!outDir.empty())
        writeFile(std::filesystem::path(outDir) / "aggregate.json", aggregateToJson(outcomes));
    return outcomes;
}

std::string aggregateToJson(const std::vector<RunOutcome>& outcomes) {
    struct Acc {
        std::vector<double> eta, slow;
        double queue = 0, parked = 0, waitP = 0, waitS = 0;
        int n = 0, failed = 0;
        std::vector<std::string> runs;
        std::vector<std::string> errors;
    };
    std::map<std::string, Acc> groups;
    for (const auto& oc : outcomes) {
        Acc& a = groups[oc.group];
        a.runs.push_back(oc.name);
        if (!oc.error.empty()) {
            ++a.failed;
            a.errors.push_back(oc.name + ": " + oc.error);
            continue;
        }
        a.eta.push_back(oc.metrics.eta);
        a.slow.push_back(oc.metrics.meanSlowdown);
        a.queue += oc.metrics.waits.queue;
        a.parked += oc.metrics.waits.parked;
        a.waitP += oc.metrics.waits.waitPrimary;
        a.waitS += oc.metrics.waits.waitSecondary;
        ++a.n;
    }
    auto meanStd = [](const std::vector<double>& xs) {
        double m = 0, sd = 0;
        for (double x : xs) m += x;
        if (!xs.empty()) m /= static_cast<double>(xs.size());
        for (double x : xs) sd += (x - m) * (x - m);
        sd = xs.size() > 1 ? std::sqrt(sd / static_cast<double>(xs.size() - 1)) : 0.0;
        return std::pair<double, double>{m, sd};
    };
    json out;
    for (auto& [name, a] : groups) {
        auto [em, es] = meanStd(a.eta);
        auto [sm, ss] = meanStd(a.slow);
        double inv = a.n > 0 ? 1.0 / a.n : 0.0;
        out[name] = {{"runs", a.runs},
                     {"n", a.n},
                     {"failed", a.failed},
                     {"errors", a.errors},
                     {"eta_mean", em},
                     {"eta_stddev", es},
                     {"slowdown_mean", sm},
                     {"slowdown_stddev", ss},
                     {"wait_breakdown_mean",
                      {{"queue", a.queue * inv},
                       {"parked", a.parked * inv},
                       {"wait_primary", a.waitP * inv},
                       {"wait_secondary", a.waitS * inv}}}};
    }
    return out.dump(2);
}

}  // namespace scmp
