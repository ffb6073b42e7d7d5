#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scmp/config.hpp"

using namespace scmp;

TEST_CASE("sectioned and flat keys are interchangeable") {
    auto cfg = parseConfigText(
        "# comment\n"
        "[grid]\n"
        "rows = 16\n"
        "cols = 10  # trailing comment\n"
        "\n"
        "[sim]\n"
        "seed = 9\n"
        "policy = \"naive\"\n");
    CHECK(cfg.getInt("grid.rows", 0) == 16);
    CHECK(cfg.getInt("rows", 0) == 16);
    CHECK(cfg.getInt("cols", 0) == 10);
    CHECK(cfg.getStr("policy", "") == "naive");
    CHECK(cfg.getInt("missing", 42) == 42);
    CHECK(!cfg.has("missing"));
}

TEST_CASE("malformed lines and values are rejected") {
    CHECK_THROWS(parseConfigText("not an assignment\n"));
    auto cfg = parseConfigText("rows = banana\n");
    CHECK_THROWS(cfg.getInt("rows", 0));
    CHECK_THROWS(cfg.getNum("rows", 0.0));
}

TEST_CASE("command line overrides") {
    ConfigMap cfg;
    cfg.setOverride("seed=5");
    cfg.setOverride("policy = 'random'");
    CHECK(cfg.getInt("seed", 0) == 5);
    CHECK(cfg.getStr("policy", "") == "random");
    CHECK_THROWS(cfg.setOverride("no-equals-sign"));
}

TEST_CASE("scenario defaults match the reference table") {
    Scenario sc = scenarioFromConfig(ConfigMap{});
    CHECK(sc.sim.layout.rows == 20);
    CHECK(sc.sim.layout.cols == 12);
    CHECK(sc.sim.layout.data_density == 0.5);
    CHECK(sc.sim.layout.num_ports == 50);
    CHECK(sc.sim.tPrep == 11);
    CHECK(sc.sim.tInitPort == 11);
    CHECK(sc.sim.cultivationLatency == 26);
    CHECK(sc.sim.coreReserveFrac == 0.25);
    CHECK(sc.sim.mode == MagicMode::Ports);
    CHECK(sc.sim.phaseModel.cliffordDuration == 1);
    CHECK(sc.sim.phaseModel.tLayerDuration == 3);
    CHECK(static_cast<int>(sc.mix.category) == static_cast<int>(MixCategory::Balanced));
    CHECK(sc.mix.count == 100);
}

TEST_CASE("scenario picks up overrides and rejects unknown keys") {
    ConfigMap cfg;
    cfg.set("policy", "naive");
    cfg.set("mode", "cultivation");
    cfg.set("mix", "big");
    cfg.set("count", "25");
    cfg.set("seed", "3");
    Scenario sc = scenarioFromConfig(cfg);
    CHECK(sc.sim.policy.arbitration == ArbitrationKind::FifoAny);
    CHECK(sc.sim.mode == MagicMode::Cultivation);
    CHECK(sc.sim.layout.num_ports == 0);  // cultivation mode defaults to port-free
    CHECK(static_cast<int>(sc.mix.category) == static_cast<int>(MixCategory::Big));
    CHECK(sc.mix.count == 25);
    CHECK(sc.mix.seed == 3);  // workload seed follows the sim seed

    ConfigMap bad;
    bad.set("typo_key", "1");
    CHECK_THROWS(scenarioFromConfig(bad));
    ConfigMap badMode;
    badMode.set("mode", "psychic");
    CHECK_THROWS(scenarioFromConfig(badMode));
}

TEST_CASE("ablation selection comes through the config") {
    ConfigMap cfg;
    cfg.set("ablation", "C2");
    Scenario sc = scenarioFromConfig(cfg);
    CHECK(sc.sim.policy.arbitration == ArbitrationKind::Hierarchy);
    CHECK(sc.sim.policy.admission == AdmissionKind::Fifo);
}
