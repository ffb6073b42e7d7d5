#include "scmp/workload.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <stdexcept>

namespace scmp {

namespace {

char axisChar(PauliAxis a) {
    switch (a) {
        case PauliAxis::X: return 'X';
        case PauliAxis::Y: return 'Y';
        default: return 'Z';
    }
}

PauliAxis axisFromChar(char c) {
    switch (c) {
        case 'X': return PauliAxis::X;
        case 'Y': return PauliAxis::Y;
        case 'Z': return PauliAxis::Z;
        default: throw std::invalid_argument("bad axis");
    }
}

// Size-class qubit ranges, Small/Medium/Big.
struct ClassRange {
    int lo, hi;
};
constexpr ClassRange kClassRanges[3] = {{10, 20}, {40, 60}, {60, 100}};

int drawInRange(std::mt19937_64& rng, int lo, int hi) {
    return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

std::vector<int> Workload::tGatesPerColumn() const {
    std::vector<int> counts(columns, 0);
    for (const TGate& g : tGates) ++counts[g.column];
    return counts;
}

Workload generateWorkload(int qubits, int columns, int tBudget, std::uint64_t seed) {
    if (qubits < 1 || columns < 1) throw std::invalid_argument("qubits and columns must be >= 1");
    const long long cells = static_cast<long long>(qubits) * columns;
    if (tBudget < 0 || tBudget > cells)
        throw std::invalid_argument("tBudget exceeds qubit-column grid");

    std::mt19937_64 rng(seed);
    Workload w;
    w.qubits = qubits;
    w.columns = columns;

    // Partial Fisher-Yates over the flattened cell grid: tBudget distinct
    // cells, uniform without replacement.
    std::vector<long long> cellIdx(cells);
    for (long long i = 0; i < cells; ++i) cellIdx[i] = i;
    for (int k = 0; k < tBudget; ++k) {
        long long j = k + static_cast<long long>(rng() % static_cast<std::uint64_t>(cells - k));
        std::swap(cellIdx[k], cellIdx[j]);
        long long cell = cellIdx[k];
        TGate g;
        g.qubit = static_cast<int>(cell % qubits);
        g.column = static_cast<int>(cell / qubits);
        g.axis = static_cast<PauliAxis>(rng() % 3);
        w.tGates.push_back(g);
    }
    std::sort(w.tGates.begin(), w.tGates.end(), [](const TGate& a, const TGate& b) {
        return a.column != b.column ? a.column < b.column : a.qubit < b.qubit;
    });
    w.columnPhaseBits.resize(columns);
    for (int c = 0; c < columns; ++c) w.columnPhaseBits[c] = static_cast<std::uint8_t>(rng() & 1);
    return w;
}

std::vector<Workload> sampleMix(const WorkloadMix& mix) {
    if (mix.count < 1) throw std::invalid_argument("mix count must be >= 1");
    std::mt19937_64 rng(mix.seed);
    std::vector<Workload> out;
    out.reserve(mix.count);
    for (int i = 0; i < mix.count; ++i) {
        int cls;
        if (mix.category == MixCategory::Balanced) {
            cls = i % 3;  // round-robin over size classes
        } else {
            int named = static_cast<int>(mix.category);
            // 80% in the named class, remainder uniform over all classes.
            cls = (i % 5 < 4) ? named : static_cast<int>(rng() % 3);
        }
        const ClassRange& r = kClassRanges[cls];
        int q = drawInRange(rng, r.lo, r.hi);
        int tDepth = drawInRange(rng, 10, 1000);
        int columns = tDepth;
        long long cells = static_cast<long long>(q) * columns;
        int hiBudget = static_cast<int>(std::min<long long>(2LL * columns, cells));
        int tBudget = drawInRange(rng, columns, hiBudget);
        std::uint64_t wseed = rng();
        Workload w = generateWorkload(q, columns, tBudget, wseed);
        w.id = static_cast<WorkloadId>(i);
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<PhaseDescriptor> phaseSequence(const Workload& w, const PhaseModelConfig& cfg) {
    std::vector<int> perColumn = w.tGatesPerColumn();
    std::vector<PhaseDescriptor> phases;
    phases.reserve(w.columns);
    for (int k = 0; k < w.columns; ++k) {
        PhaseDescriptor p;
        p.index = k;
        p.magicStates = perColumn[k];
        p.blocking = p.magicStates > 0;
        p.duration = p.blocking ? cfg.tLayerDuration : cfg.cliffordDuration;
        p.primaryTiles = std::min(p.magicStates + cfg.routingSlack, w.qubits);
        p.secondaryTiles = std::max(0, p.magicStates - p.primaryTiles);
        phases.push_back(p);
    }
    return phases;
}

MixCategory mixCategoryFromString(const std::string& s) {
    if (s == "small") return MixCategory::Small;
    if (s == "medium") return MixCategory::Medium;
    if (s == "big") return MixCategory::Big;
    if (s == "balanced") return MixCategory::Balanced;
    throw std::invalid_argument("unknown mix category: " + s);
}

std::string toString(MixCategory c) {
    switch (c) {
        case MixCategory::Small: return "small";
        case MixCategory::Medium: return "medium";
        case MixCategory::Big: return "big";
        default: return "balanced";
    }
}

std::string workloadsToJson(const std::vector<Workload>& ws) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Workload& w : ws) {
        nlohmann::json jw;
        jw["id"] = w.id;
        jw["qubits"] = w.qubits;
        jw["columns"] = w.columns;
        jw["arrival_time"] = w.arrivalTime;
        nlohmann::json gates = nlohmann::json::array();
        for (const TGate& g : w.tGates)
            gates.push_back({{"qubit", g.qubit},
                             {"column", g.column},
                             {"axis", std::string(1, axisChar(g.axis))}});
        jw["t_gates"] = std::move(gates);
        jw["column_phase_bits"] = w.columnPhaseBits;
        arr.push_back(std::move(jw));
    }
    return arr.dump(2);
}

std::vector<Workload> workloadsFromJson(const std::string& text) {
    nlohmann::json arr = nlohmann::json::parse(text);
    std::vector<Workload> out;
    for (const auto& jw : arr) {
        Workload w;
        w.id = jw.at("id").get<WorkloadId>();
        w.qubits = jw.at("qubits").get<int>();
        w.columns = jw.at("columns").get<int>();
        w.arrivalTime = jw.value("arrival_time", Cycle{0});
        for (const auto& jg : jw.at("t_gates")) {
            TGate g;
            g.qubit = jg.at("qubit").get<int>();
            g.column = jg.at("column").get<int>();
            g.axis = axisFromChar(jg.at("axis").get<std::string>().at(0));
            w.tGates.push_back(g);
        }
        w.columnPhaseBits = jw.at("column_phase_bits").get<std::vector<std::uint8_t>>();
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace scmp
