#pragma once

#include <map>
#include <string>

#include "scmp/engine.hpp"
#include "scmp/workload.hpp"

namespace scmp {

/// Flat key/value view of a TOML-style config file. Section headers prefix
/// their keys ("[grid]" + "rows" -> "grid.rows"), but keys are also looked up
/// un-prefixed, so flat files and sectioned files are interchangeable.
class ConfigMap {
public:
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    /// Parses "key=value" (as passed to --set).
    void setOverride(const std::string& assignment);

    bool has(const std::string& key) const;
    std::string getStr(const std::string& key, const std::string& fallback) const;
    double getNum(const std::string& key, double fallback) const;
    long long getInt(const std::string& key, long long fallback) const;

    const std::map<std::string, std::string>& raw() const { return kv_; }

private:
    const std::string* find(const std::string& key) const;
    std::map<std::string, std::string> kv_;
};

ConfigMap parseConfigText(const std::string& text);
ConfigMap parseConfigFile(const std::string& path);

/// A fully resolved experiment: simulator config plus workload source.
struct Scenario {
    SimConfig sim;
    WorkloadMix mix;
    std::string workloadsFile;  // non-empty: load workloads instead of sampling
};

/// Applies recognized keys onto Table-style defaults. Unknown keys throw.
Scenario scenarioFromConfig(const ConfigMap& cfg);

}  // namespace scmp
