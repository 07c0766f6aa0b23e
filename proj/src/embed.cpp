#include "fourcolor/embed.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace fourcolor {

bool EmbeddedTriangulation::adjacent(VertexId u, VertexId v) const {
    const auto& a = rot[u].size() <= rot[v].size() ? rot[u] : rot[v];
    VertexId target = rot[u].size() <= rot[v].size() ? v : u;
    return std::find(a.begin(), a.end(), target) != a.end();
}

int64_t EmbeddedTriangulation::edge_count() const {
    int64_t darts = 0;
    for (const auto& r : rot) darts += static_cast<int64_t>(r.size());
    return darts / 2;
}

std::vector<std::string> validate_triangulation(const EmbeddedTriangulation& g) {
    std::vector<std::string> out;
    const int32_t n = g.n();
    for (VertexId v = 0; v < n; ++v) {
        if (g.rot[v].size() < 3) {
            out.push_back("vertex " + std::to_string(v) + " has degree below 3");
            continue;
        }
        std::set<int32_t> seen;
        for (int32_t a : g.rot[v]) {
            if (a < 0 || a >= n || a == v) {
                out.push_back("vertex " + std::to_string(v) + " has a bad neighbor entry");
                continue;
            }
            if (!seen.insert(a).second)
                out.push_back("parallel edge at vertex " + std::to_string(v));
        }
    }
    if (!out.empty()) return out;
    // Each corner (x, y) consecutive in rot[v] must be a face: in rot[x], v
    // follows y; in rot[y], x follows v.
    auto follows = [&](VertexId v, int32_t after, int32_t target) {
        const auto& r = g.rot[v];
        for (size_t i = 0; i < r.size(); ++i)
            if (r[i] == after) return r[(i + 1) % r.size()] == target;
        return false;
    };
    for (VertexId v = 0; v < n; ++v) {
        const auto& r = g.rot[v];
        for (size_t i = 0; i < r.size(); ++i) {
            int32_t x = r[i];
            int32_t y = r[(i + 1) % r.size()];
            if (!follows(x, y, v) || !follows(y, v, x)) {
                out.push_back("corner (" + std::to_string(v) + "; " + std::to_string(x) + "," +
                              std::to_string(y) + ") does not close a facial triangle");
            }
        }
    }
    if (out.empty()) {
        int64_t m = g.edge_count();
        if (m != 3 * static_cast<int64_t>(n) - 6)
            out.push_back("edge count violates Euler's formula for a sphere triangulation");
    }
    return out;
}

EmbeddedTriangulation read_triangulation(const std::string& path) {
    RotationFile f = read_rotation_file(path);
    EmbeddedTriangulation g;
    g.rot = std::move(f.rotations);
    for (const auto& r : g.rot)
        for (int32_t a : r)
            if (a < 0) throw NotATriangulationError("boundary marker in a triangulation file");
    return g;
}

std::string write_triangulation(const EmbeddedTriangulation& g) {
    return write_rotation_text(g.rot, 0);
}

PseudoConfiguration to_pseudo_configuration(const EmbeddedTriangulation& g) {
    PseudoConfiguration c;
    c.z = from_rotations(g.n(), g.rot);
    c.range.reserve(g.n());
    for (VertexId v = 0; v < g.n(); ++v) {
        int32_t d = g.degree(v);
        c.range.push_back({d, d});
    }
    return c;
}

int64_t ChargeLedger::total() const {
    int64_t t = 0;
    for (int32_t x : final_charge) t += x;
    return t;
}

namespace {

ChargeLedger ledger_impl(const EmbeddedTriangulation& g, const RuleSet& rules, bool parallel) {
    auto issues = validate_triangulation(g);
    if (!issues.empty()) throw NotATriangulationError(issues.front());
    ChargeLedger led;
    PseudoConfiguration target = to_pseudo_configuration(g);
    led.z = target.z;
    const int32_t nd = led.z.dart_count();
    led.sent.assign(nd, 0);

    auto compute = [&](DartId e) {
        int32_t sum = 0;
        for (const Rule& r : rules.rules)
            if (always_applies(target, e, r)) sum += r.charge;
        led.sent[e] = sum;
    };
    if (parallel) {
#ifdef FOURCOLOR_OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
        for (DartId e = 0; e < nd; ++e) compute(e);
    } else {
        for (DartId e = 0; e < nd; ++e) compute(e);
    }

    led.initial.resize(g.n());
    led.final_charge.resize(g.n());
    for (VertexId v = 0; v < g.n(); ++v) led.initial[v] = 10 * (6 - g.degree(v));
    led.final_charge = led.initial;
    for (DartId e = 0; e < nd; ++e) {
        led.final_charge[led.z.head[e]] += led.sent[e];
        led.final_charge[led.z.tail(e)] -= led.sent[e];
    }
    return led;
}

}  // namespace

ChargeLedger charge_ledger(const EmbeddedTriangulation& g, const RuleSet& rules) {
    return ledger_impl(g, rules, true);
}

ChargeLedger charge_ledger_serial(const EmbeddedTriangulation& g, const RuleSet& rules) {
    return ledger_impl(g, rules, false);
}

}  // namespace fourcolor
