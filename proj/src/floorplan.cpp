#include "scmp/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <stdexcept>

namespace scmp {

namespace {

// Clockwise walk of the grid boundary starting at (0,0).
std::vector<TileId> boundaryWalk(int rows, int cols) {
    std::vector<TileId> walk;
    auto at = [&](int r, int c) { return static_cast<TileId>(r * cols + c); };
    if (rows == 1 && cols == 1) return {at(0, 0)};
    if (rows == 1) {
        for (int c = 0; c < cols; ++c) walk.push_back(at(0, c));
        return walk;
    }
    if (cols == 1) {
        for (int r = 0; r < rows; ++r) walk.push_back(at(r, 0));
        return walk;
    }
    for (int c = 0; c < cols; ++c) walk.push_back(at(0, c));
    for (int r = 1; r < rows; ++r) walk.push_back(at(r, cols - 1));
    for (int c = cols - 2; c >= 0; --c) walk.push_back(at(rows - 1, c));
    for (int r = rows - 2; r >= 1; --r) walk.push_back(at(r, 0));
    return walk;
}

// Candidate order for data-tile assignment. The prefix of any length keeps
// every data tile adjacent to at least one ancilla tile, as long as the
// demanded density fits the pattern's data capacity.
std::vector<TileId> dataCandidates(int rows, int cols, const std::string& pattern,
                                   const std::vector<bool>& isPort) {
    std::vector<TileId> order;
    auto at = [&](int r, int c) { return static_cast<TileId>(r * cols + c); };
    auto pushIfFree = [&](int r, int c) {
        TileId t = at(r, c);
        if (!isPort[t]) order.push_back(t);
    };
    const bool hasInterior = rows >= 3 && cols >= 3;
    if (pattern == "checkerboard" || !hasInterior) {
        for (int parity = 0; parity < 2; ++parity)
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c)
                    if ((r + c) % 2 == parity) pushIfFree(r, c);
        return order;
    }
    // "rows": interior rows interleave data and ancilla, spacer rows at
    // interior index 1 mod 3, so each preferred data row touches a spacer row.
    std::vector<int> dataRows, spacerRows, riskyRows;
    const int irMax = rows - 3;
    for (int r = 1; r <= rows - 2; ++r) {
        int ir = r - 1;
        if (ir % 3 == 1) {
            spacerRows.push_back(r);
        } else if (ir % 3 == 0 && ir == irMax) {
            riskyRows.push_back(r);  // no spacer below; only used at extreme density
        } else {
            dataRows.push_back(r);
        }
    }
    for (int r : dataRows)
        for (int c = 1; c <= cols - 2; ++c) pushIfFree(r, c);
    for (int r : spacerRows)
        for (int c = 1; c <= cols - 2; ++c) pushIfFree(r, c);
    for (int r : riskyRows)
        for (int c = 1; c <= cols - 2; ++c) pushIfFree(r, c);
    // Boundary tiles last; only reached at extreme densities.
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (r == 0 || r == rows - 1 || c == 0 || c == cols - 1) pushIfFree(r, c);
    return order;
}

}  // namespace

FloorplanGraph FloorplanGraph::buildGrid(int rows, int cols, const LayoutSpec& spec) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("grid dimensions must be >= 1");
    if (spec.data_density <= 0.0 || spec.data_density > 1.0)
        throw std::invalid_argument("data_density must be in (0, 1]");
    const int n = rows * cols;
    std::vector<TileId> walk = boundaryWalk(rows, cols);
    if (spec.num_ports < 0 || static_cast<size_t>(spec.num_ports) > walk.size())
        throw std::invalid_argument("num_ports exceeds boundary tile count");

    std::vector<bool> isPort(n, false);
    for (int i = 0; i < spec.num_ports; ++i) {
        size_t idx = static_cast<size_t>(
            static_cast<double>(i) * static_cast<double>(walk.size()) / spec.num_ports);
        // Uniform spacing can collide on tiny boundaries; take the next free slot.
        while (isPort[walk[idx]]) idx = (idx + 1) % walk.size();
        isPort[walk[idx]] = true;
    }

    const int wantData = static_cast<int>(std::lround(spec.data_density * n));
    if (wantData + spec.num_ports > n)
        throw std::invalid_argument("data density and port count exceed the grid");

    std::vector<TileClass> classes(n, TileClass::Ancilla);
    for (int t = 0; t < n; ++t)
        if (isPort[t]) classes[t] = TileClass::MagicPort;
    std::vector<TileId> cand = dataCandidates(rows, cols, spec.layout_pattern, isPort);
    if (static_cast<int>(cand.size()) < wantData)
        throw std::invalid_argument("not enough non-port tiles for requested data density");
    for (int i = 0; i < wantData; ++i) classes[cand[i]] = TileClass::Data;

    return fromClasses(rows, cols, std::move(classes));
}

FloorplanGraph FloorplanGraph::fromClasses(int rows, int cols, std::vector<TileClass> classes) {
    if (static_cast<int>(classes.size()) != rows * cols)
        throw std::invalid_argument("class vector size mismatch");
    FloorplanGraph g;
    g.rows_ = rows;
    g.cols_ = cols;
    g.classes_ = std::move(classes);
    g.finalize();
    return g;
}

void FloorplanGraph::finalize() {
    const int n = size();
    adj_.assign(n, {});
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            TileId t = at(r, c);
            if (r > 0) adj_[t].push_back(at(r - 1, c));
            if (c > 0) adj_[t].push_back(at(r, c - 1));
            if (c + 1 < cols_) adj_[t].push_back(at(r, c + 1));
            if (r + 1 < rows_) adj_[t].push_back(at(r + 1, c));
        }
    }
    for (int t = 0; t < n; ++t) {
        switch (classes_[t]) {
            case TileClass::Data: data_.push_back(t); break;
            case TileClass::Ancilla: ancilla_.push_back(t); break;
            case TileClass::MagicPort: ports_.push_back(t); break;
        }
    }
    if (n <= 4096) {
        distMatrix_.assign(static_cast<size_t>(n) * n, 0);
        std::vector<std::uint16_t> row(n);
        for (int s = 0; s < n; ++s) {
            bfsFrom(s, row);
            std::memcpy(&distMatrix_[static_cast<size_t>(s) * n], row.data(),
                        n * sizeof(std::uint16_t));
        }
    }
}

void FloorplanGraph::bfsFrom(TileId src, std::vector<std::uint16_t>& out) const {
    const int n = size();
    out.assign(n, 0xffff);
    std::deque<TileId> q{src};
    out[src] = 0;
    while (!q.empty()) {
        TileId u = q.front();
        q.pop_front();
        for (TileId v : adj_[u]) {
            if (out[v] == 0xffff) {
                out[v] = static_cast<std::uint16_t>(out[u] + 1);
                q.push_back(v);
            }
        }
    }
}

int FloorplanGraph::dist(TileId u, TileId v) const {
    if (!distMatrix_.empty())
        return distMatrix_[static_cast<size_t>(u) * size() + v];
    std::vector<std::uint16_t> row;
    bfsFrom(u, row);
    return row[v];
}

void Occupancy::occupy(TileId t, WorkloadId w, OwnKind k) {
    if (owner_[t] != kNoOwner) throw std::logic_error("tile already owned");
    owner_[t] = static_cast<std::int32_t>(w);
    kind_[t] = k;
}

void Occupancy::release(TileId t) {
    owner_[t] = kNoOwner;
    kind_[t] = OwnKind::None;
}

std::vector<TileId> Occupancy::occupiedData(const FloorplanGraph& g) const {
    std::vector<TileId> out;
    for (TileId t : g.dataTiles())
        if (owner_[t] != kNoOwner) out.push_back(t);
    return out;
}

std::vector<TileId> Occupancy::occupiedAncilla(const FloorplanGraph& g) const {
    std::vector<TileId> out;
    for (TileId t : g.ancillaTiles())
        if (owner_[t] != kNoOwner) out.push_back(t);
    return out;
}

std::vector<TileId> Occupancy::reservedPorts(const FloorplanGraph& g) const {
    std::vector<TileId> out;
    for (TileId t : g.portTiles())
        if (owner_[t] != kNoOwner) out.push_back(t);
    return out;
}

std::vector<std::vector<TileId>> freeComponents(const FloorplanGraph& g, const Occupancy& occ) {
    const int n = g.size();
    std::vector<char> eligible(n, 0);
    for (int t = 0; t < n; ++t)
        eligible[t] = g.classOf(t) != TileClass::MagicPort && occ.isFree(t);
    std::vector<std::vector<TileId>> comps;
    std::vector<char> seen(n, 0);
    std::deque<TileId> q;
    for (int s = 0; s < n; ++s) {
        if (!eligible[s] || seen[s]) continue;
        comps.emplace_back();
        auto& comp = comps.back();
        seen[s] = 1;
        q.push_back(s);
        while (!q.empty()) {
            TileId u = q.front();
            q.pop_front();
            comp.push_back(u);
            for (TileId v : g.neighbors(u)) {
                if (eligible[v] && !seen[v]) {
                    seen[v] = 1;
                    q.push_back(v);
                }
            }
        }
    }
    return comps;
}

}  // namespace scmp
