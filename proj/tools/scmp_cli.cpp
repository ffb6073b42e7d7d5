#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "scmp/config.hpp"
#include "scmp/experiments.hpp"
#include "scmp/metrics.hpp"

namespace {

std::vector<std::uint64_t> parseSeeds(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoull(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty seed list: " + csv);
    return out;
}

void writeFile(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
}

int runSimulate(const std::string& configPath, const std::vector<std::string>& sets,
                long long seed, const std::string& outDir) {
    scmp::ConfigMap cfg = scmp::parseConfigFile(configPath);
    for (const auto& s : sets) cfg.setOverride(s);
    if (seed >= 0) cfg.set("seed", std::to_string(seed));
    scmp::Scenario sc = scmp::scenarioFromConfig(cfg);
    scmp::SimResult r = scmp::runScenario(sc);

    std::filesystem::create_directories(outDir);
    auto dir = std::filesystem::path(outDir);
    if (!r.trace.empty()) writeFile(dir / "trace.csv", scmp::traceToCsv(r.trace));
    writeFile(dir / "summary.json", scmp::summaryToJson(r));
    std::cout << scmp::metricsToJson(scmp::computeMetrics(r)) << "\n";
    return 0;
}

int runSweepCmd(const std::string& preset, const std::string& seedsCsv, int jobs,
                const std::string& outDir) {
    auto seeds = parseSeeds(seedsCsv);
    auto specs = scmp::presetRuns(preset, seeds);
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    auto outcomes = scmp::runSweep(specs, jobs, outDir);
    std::cout << scmp::aggregateToJson(outcomes) << "\n";
    for (const auto& oc : outcomes)
        if (!oc.error.empty()) return 2;  // per-run failures already recorded
    return 0;
}

int runGenWorkloads(const std::string& mixName, int count, long long seed,
                    const std::string& outFile) {
    scmp::WorkloadMix mix;
    mix.category = scmp::mixCategoryFromString(mixName);
    mix.count = count;
    mix.seed = static_cast<std::uint64_t>(seed);
    writeFile(outFile, scmp::workloadsToJson(scmp::sampleMix(mix)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surface-code multiprogramming simulator"};
    app.require_subcommand(1);

    std::string configPath, outDir = "out";
    std::vector<std::string> sets;
    long long seed = -1;
    auto* sim = app.add_subcommand("simulate", "run one simulation from a config file");
    sim->add_option("--config", configPath, "config file")->required();
    sim->add_option("--set", sets, "key=value override (repeatable)");
    sim->add_option("--seed", seed, "seed override");
    sim->add_option("--out", outDir, "output directory");

    std::string preset, seedsCsv = "1,2,3,4,5", sweepOut = "sweep-out";
    int jobs = 0;
    auto* sw = app.add_subcommand("sweep", "run a preset seed sweep");
    sw->add_option("--preset", preset, "rq1|rq2-ablation|rq2-scaling|rq3|rq4")->required();
    sw->add_option("--seeds", seedsCsv, "comma-separated seeds");
    sw->add_option("--jobs", jobs, "parallel runs (default: hardware)");
    sw->add_option("--out", sweepOut, "output directory");

    std::string mixName = "balanced", genOut = "workloads.json";
    int count = 100;
    long long genSeed = 1;
    auto* gen = app.add_subcommand("gen-workloads", "emit a synthetic workload batch");
    gen->add_option("--mix", mixName, "small|medium|big|balanced")->required();
    gen->add_option("--count", count, "number of workloads")->required();
    gen->add_option("--seed", genSeed, "generator seed");
    gen->add_option("--out", genOut, "output JSON file")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (sim->parsed()) return runSimulate(configPath, sets, seed, outDir);
        if (sw->parsed()) return runSweepCmd(preset, seedsCsv, jobs, sweepOut);
        if (gen->parsed()) return runGenWorkloads(mixName, count, genSeed, genOut);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg)
            if (c == '"') c = '\'';
        std::cerr << "{\"error\": \"" << msg << "\"}\n";
        return 1;
    }
    return 0;
}
