#include "scmp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace scmp {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string stripQuotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

void ConfigMap::setOverride(const std::string& assignment) {
    size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must be key=value: " + assignment);
    set(trim(assignment.substr(0, eq)), stripQuotes(trim(assignment.substr(eq + 1))));
}

const std::string* ConfigMap::find(const std::string& key) const {
    auto it = kv_.find(key);
    if (it != kv_.end()) return &it->second;
    // fall back to any section-qualified match
    for (auto& [k, v] : kv_) {
        size_t dot = k.rfind('.');
        if (dot != std::string::npos && k.substr(dot + 1) == key) return &v;
    }
    return nullptr;
}

bool ConfigMap::has(const std::string& key) const { return find(key) != nullptr; }

std::string ConfigMap::getStr(const std::string& key, const std::string& fallback) const {
    const std::string* v = find(key);
    return v ? *v : fallback;
}

double ConfigMap::getNum(const std::string& key, double fallback) const {
    const std::string* v = find(key);
    if (!v) return fallback;
    try {
        return std::stod(*v);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' is not numeric: " + *v);
    }
}

long long ConfigMap::getInt(const std::string& key, long long fallback) const {
    const std::string* v = find(key);
    if (!v) return fallback;
    try {
        return std::stoll(*v);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' is not an integer: " + *v);
    }
}

ConfigMap parseConfigText(const std::string& text) {
    ConfigMap out;
    std::istringstream in(text);
    std::string line, section;
    while (std::getline(in, line)) {
        size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("bad config line: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = stripQuotes(trim(line.substr(eq + 1)));
        out.set(section.empty() ? key : section + "." + key, val);
    }
    return out;
}

ConfigMap parseConfigFile(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parseConfigText(buf.str());
}

Scenario scenarioFromConfig(const ConfigMap& cfg) {
    static const std::set<std::string> known = {
        "rows", "cols", "data_density", "layout_pattern", "num_ports", "port_rule",
        "policy", "ablation", "core_reserve_frac", "t_prep", "t_init_port",
        "t_init_cultivation", "cultivation_latency", "mode", "p_fail", "park_patience",
        "arrival_span_frac", "arrival_window", "arrival_norm_count", "horizon", "seed",
        "record_trace",
        "mix", "count", "workload_seed", "workloads_file", "clifford_duration",
        "t_layer_duration", "routing_slack"};
    for (auto& [k, v] : cfg.raw()) {
        size_t dot = k.rfind('.');
        std::string base = dot == std::string::npos ? k : k.substr(dot + 1);
        if (!known.count(base)) throw std::invalid_argument("unknown config key: " + k);
    }

    Scenario sc;
    sc.sim.layout.rows = static_cast<int>(cfg.getInt("rows", 20));
    sc.sim.layout.cols = static_cast<int>(cfg.getInt("cols", 12));
    sc.sim.layout.data_density = cfg.getNum("data_density", 0.5);
    sc.sim.layout.layout_pattern = cfg.getStr("layout_pattern", "rows");
    sc.sim.layout.num_ports = static_cast<int>(cfg.getInt("num_ports", 50));
    sc.sim.layout.port_rule = cfg.getStr("port_rule", "uniform");

    sc.sim.policy =
        PolicyConfig::fromName(cfg.getStr("policy", "proposed"), cfg.getStr("ablation", "none"));

    std::string mode = cfg.getStr("mode", "ports");
    if (mode == "ports") sc.sim.mode = MagicMode::Ports;
    else if (mode == "cultivation") sc.sim.mode = MagicMode::Cultivation;
    else throw std::invalid_argument("unknown mode: " + mode);
    if (sc.sim.mode == MagicMode::Cultivation && !cfg.has("num_ports"))
        sc.sim.layout.num_ports = 0;

    sc.sim.tPrep = cfg.getInt("t_prep", 11);
    sc.sim.tInitPort = cfg.getInt("t_init_port", 11);
    sc.sim.cultivationLatency =
        cfg.getInt("cultivation_latency", cfg.getInt("t_init_cultivation", 26));
    sc.sim.pFail = cfg.getNum("p_fail", 0.0);
    sc.sim.coreReserveFrac = cfg.getNum("core_reserve_frac", 0.25);
    sc.sim.parkPatience = cfg.getInt("park_patience", 50);
    sc.sim.arrivalSpanFrac = cfg.getNum("arrival_span_frac", 0.3);
    sc.sim.arrivalWindow = cfg.getInt("arrival_window", -1);
    sc.sim.arrivalNormCount = static_cast<int>(cfg.getInt("arrival_norm_count", -1));
    sc.sim.horizon = cfg.getInt("horizon", 10'000'000);
    sc.sim.seed = static_cast<std::uint64_t>(cfg.getInt("seed", 1));
    sc.sim.recordTrace = cfg.getInt("record_trace", 1) != 0;
    sc.sim.phaseModel.cliffordDuration = cfg.getInt("clifford_duration", 1);
    sc.sim.phaseModel.tLayerDuration = cfg.getInt("t_layer_duration", 3);
    sc.sim.phaseModel.routingSlack = static_cast<int>(cfg.getInt("routing_slack", 1));

    sc.mix.category = mixCategoryFromString(cfg.getStr("mix", "balanced"));
    sc.mix.count = static_cast<int>(cfg.getInt("count", 100));
    sc.mix.seed = static_cast<std::uint64_t>(cfg.getInt("workload_seed", sc.sim.seed));
    sc.workloadsFile = cfg.getStr("workloads_file", "");
    return sc;
}

}  // namespace scmp
