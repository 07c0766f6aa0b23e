#include "fourcolor/dart.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fourcolor {

PseudoTriangulation terminal_triangulation() {
    PseudoTriangulation z;
    z.vertex_count = 1;
    z.add_dart(0, 0, 0, 0);
    return z;
}

PseudoTriangulation from_rotations(int32_t n, const Rotations& rotations) {
    if (static_cast<int32_t>(rotations.size()) != n)
        throw ParseError("rotation count does not match vertex count");
    // darts[a][b] = dart with head a and tail b.
    std::map<std::pair<int32_t, int32_t>, DartId> darts;
    PseudoTriangulation z;
    z.vertex_count = n;
    for (int32_t a = 0; a < n; ++a) {
        for (int32_t b : rotations[a]) {
            if (b == -1) continue;
            if (b < 0 || b >= n) throw ParseError("neighbor index out of range");
            auto key = std::make_pair(a, b);
            if (darts.count(key))
                throw MultipleDartsError("multiple darts between vertices " +
                                         std::to_string(a) + " and " + std::to_string(b));
            darts[key] = z.add_dart(a, kNil, kNil, kNil);
        }
    }
    for (int32_t a = 0; a < n; ++a) {
        const auto& rot = rotations[a];
        int32_t size = static_cast<int32_t>(rot.size());
        for (int32_t i = 0; i < size; ++i) {
            int32_t b = rot[i];
            if (b == -1) continue;
            DartId e = darts.at({a, b});
            auto r = darts.find({b, a});
            if (r == darts.end())
                throw RotationDiscrepancyError("dart " + std::to_string(b) + "->" +
                                               std::to_string(a) + " missing from rotations");
            z.rev[e] = r->second;
            int32_t s = rot[(i + 1) % size];
            z.succ[e] = (s == -1) ? kNil : darts.at({a, s});
            int32_t p = rot[(i + size - 1) % size];
            z.pred[e] = (p == -1) ? kNil : darts.at({a, p});
        }
    }
    return z;
}

std::optional<Rotations> to_rotations(const PseudoTriangulation& z) {
    Rotations rot(z.vertex_count);
    std::vector<char> seen(z.dart_count(), 0);
    for (VertexId v = 0; v < z.vertex_count; ++v) {
        DartId e = first_dart(z, v);
        if (e == kNil) return std::nullopt;  // isolated vertex: not representable
        bool cyclic = !is_boundary_vertex(z, v);
        DartId cur = e;
        do {
            if (seen[cur]) return std::nullopt;
            seen[cur] = 1;
            rot[v].push_back(z.tail(cur));
            cur = z.succ[cur];
        } while (cur != kNil && cur != e);
        if (!cyclic) rot[v].push_back(-1);
        // Parallel darts make two table entries collide.
        std::vector<int32_t> sorted = rot[v];
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            return std::nullopt;
    }
    for (char s : seen)
        if (!s) return std::nullopt;  // dart outside every incidence list
    return rot;
}

const char* requirement_name(Requirement r) {
    switch (r) {
        case Requirement::M1: return "M1";
        case Requirement::M2: return "M2";
        case Requirement::M3: return "M3";
        case Requirement::M4: return "M4";
        case Requirement::M5: return "M5";
        case Requirement::M6: return "M6";
    }
    return "?";
}

std::vector<Violation> validate(const PseudoTriangulation& z) {
    std::vector<Violation> out;
    const int32_t nd = z.dart_count();
    std::vector<char> has_dart(z.vertex_count, 0);
    for (DartId e = 0; e < nd; ++e) has_dart[z.head[e]] = 1;
    for (VertexId v = 0; v < z.vertex_count; ++v)
        if (!has_dart[v]) out.push_back({Requirement::M1, v});
    for (DartId e = 0; e < nd; ++e) {
        if (z.rev[e] < 0 || z.rev[e] >= nd || z.rev[z.rev[e]] != e)
            out.push_back({Requirement::M2, e});
    }
    for (DartId e = 0; e < nd; ++e) {
        DartId s = z.succ[e];
        if (s != kNil && (s < 0 || s >= nd || z.pred[s] != e)) {
            out.push_back({Requirement::M3, e});
            continue;
        }
        DartId p = z.pred[e];
        if (p != kNil && (p < 0 || p >= nd || z.succ[p] != e))
            out.push_back({Requirement::M3, e});
    }
    for (DartId e = 0; e < nd; ++e) {
        DartId s = z.succ[e];
        if (s != kNil && s >= 0 && s < nd && z.head[s] != z.head[e])
            out.push_back({Requirement::M4, e});
    }
    auto valid_dart = [&](DartId d) { return d >= 0 && d < nd; };
    for (DartId e = 0; e < nd; ++e) {
        if (z.succ[e] == kNil) continue;
        if (!valid_dart(z.succ[e]) || !valid_dart(z.rev[z.succ[e]])) {
            out.push_back({Requirement::M5, e});
            continue;
        }
        DartId f = z.rev[z.succ[e]];
        if (z.succ[f] == kNil || !valid_dart(z.succ[f]) || !valid_dart(z.rev[z.succ[f]])) {
            out.push_back({Requirement::M5, e});
            continue;
        }
        DartId g = z.rev[z.succ[f]];
        if (z.succ[g] == kNil || !valid_dart(z.succ[g]) || z.rev[z.succ[g]] != e)
            out.push_back({Requirement::M5, e});
    }
    // (M6): darts with the same head form exactly one list, cyclic iff inner.
    std::vector<int32_t> list_count(z.vertex_count, 0);
    std::vector<char> visited(nd, 0);
    for (DartId e = 0; e < nd; ++e) {
        if (visited[e]) continue;
        // Walk back to the start of e's list (or all the way around).
        DartId start = e;
        {
            DartId cur = e;
            int32_t guard = 0;
            while (z.pred[cur] != kNil && valid_dart(z.pred[cur])) {
                cur = z.pred[cur];
                if (cur == e || ++guard > nd) break;  // cyclic
                start = cur;
            }
            if (z.pred[start] != kNil) start = e;  // cyclic list: any start
        }
        DartId cur = start;
        int32_t guard = 0;
        while (cur != kNil && valid_dart(cur) && !visited[cur] && guard++ <= nd) {
            visited[cur] = 1;
            cur = z.succ[cur];
            if (cur == start) break;
        }
        ++list_count[z.head[e]];
    }
    for (VertexId v = 0; v < z.vertex_count; ++v)
        if (has_dart[v] && list_count[v] != 1) out.push_back({Requirement::M6, v});
    return out;
}

PseudoTriangulation mirror(const PseudoTriangulation& z) {
    PseudoTriangulation m = z;
    std::swap(m.succ, m.pred);
    return m;
}

int degree(const PseudoTriangulation& z, VertexId v) {
    int d = 0;
    for (DartId e = 0; e < z.dart_count(); ++e)
        if (z.head[e] == v) ++d;
    return d;
}

bool is_boundary_vertex(const PseudoTriangulation& z, VertexId v) {
    for (DartId e = 0; e < z.dart_count(); ++e)
        if (z.head[e] == v && (z.succ[e] == kNil || z.pred[e] == kNil)) return true;
    return false;
}

bool is_boundary_dart(const PseudoTriangulation& z, DartId e) {
    return z.succ[e] == kNil || z.pred[e] == kNil;
}

DartId first_dart(const PseudoTriangulation& z, VertexId v) {
    DartId any = kNil;
    for (DartId e = 0; e < z.dart_count(); ++e) {
        if (z.head[e] != v) continue;
        if (z.pred[e] == kNil) return e;
        if (any == kNil) any = e;
    }
    return any;
}

std::vector<DartId> incidence_list(const PseudoTriangulation& z, VertexId v) {
    std::vector<DartId> out;
    DartId start = first_dart(z, v);
    if (start == kNil) return out;
    DartId cur = start;
    do {
        out.push_back(cur);
        cur = z.succ[cur];
    } while (cur != kNil && cur != start &&
             static_cast<int32_t>(out.size()) <= z.dart_count());
    return out;
}

namespace {
std::string trace_impl(const PseudoTriangulation& z, DartId root, bool require_all) {
    const int32_t nd = z.dart_count();
    if (root < 0 || root >= nd) throw DisconnectedFromRootError("root dart out of range");
    std::vector<int32_t> dnum(nd, kNil), vnum(z.vertex_count, kNil);
    std::vector<DartId> order;
    order.reserve(nd);
    int32_t next_v = 0;
    auto visit = [&](DartId d) {
        if (dnum[d] == kNil) {
            dnum[d] = static_cast<int32_t>(order.size());
            order.push_back(d);
        }
        return dnum[d];
    };
    visit(root);
    std::ostringstream os;
    for (size_t i = 0; i < order.size(); ++i) {
        DartId d = order[i];
        VertexId h = z.head[d];
        if (vnum[h] == kNil) vnum[h] = next_v++;
        os << vnum[h] << ' ' << visit(z.rev[d]) << ' ';
        os << (z.succ[d] == kNil ? kNil : visit(z.succ[d])) << ' ';
        os << (z.pred[d] == kNil ? kNil : visit(z.pred[d])) << ';';
    }
    if (require_all && static_cast<int32_t>(order.size()) != nd)
        throw DisconnectedFromRootError("pseudo-triangulation not connected from root dart");
    return os.str();
}
}  // namespace

std::string canonical_trace(const PseudoTriangulation& z, DartId root) {
    return trace_impl(z, root, true);
}

std::string component_trace(const PseudoTriangulation& z, DartId root) {
    return trace_impl(z, root, false);
}

bool isomorphic(const PseudoTriangulation& z1, const PseudoTriangulation& z2) {
    if (z1.dart_count() != z2.dart_count() || z1.vertex_count != z2.vertex_count)
        return false;
    if (z1.dart_count() == 0) return true;
    std::string t1 = canonical_trace(z1, 0);
    for (DartId r = 0; r < z2.dart_count(); ++r)
        if (canonical_trace(z2, r) == t1) return true;
    return false;
}

std::string write_rotation_text(const Rotations& rotations, int32_t ring_size) {
    std::ostringstream os;
    os << rotations.size() << ' ' << ring_size << '\n';
    for (size_t v = 0; v < rotations.size(); ++v) {
        os << v << ':';
        for (int32_t a : rotations[v]) os << ' ' << a;
        os << '\n';
    }
    return os.str();
}

namespace {
std::string next_content_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.find('#');
        if (pos != std::string::npos) line.erase(pos);
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) return line;
    }
    throw ParseError("unexpected end of input");
}
}  // namespace

RotationFile read_rotation_text(std::istream& in) {
    RotationFile f;
    {
        std::istringstream hs(next_content_line(in));
        if (!(hs >> f.n >> f.ring_size)) throw ParseError("bad header line, expected \"N R\"");
    }
    if (f.n < 0 || f.ring_size < 0 || f.ring_size > f.n)
        throw ParseError("bad header values");
    f.rotations.resize(f.n);
    for (int32_t i = 0; i < f.n; ++i) {
        std::string line = next_content_line(in);
        auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("rotation line missing ':'");
        int32_t v = -1;
        {
            std::istringstream vs(line.substr(0, colon));
            if (!(vs >> v) || v < 0 || v >= f.n) throw ParseError("bad vertex id in rotation line");
        }
        std::istringstream as(line.substr(colon + 1));
        int32_t a;
        while (as >> a) f.rotations[v].push_back(a);
    }
    return f;
}

RotationFile read_rotation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return read_rotation_text(in);
}

std::string write_dart_json(const PseudoTriangulation& z) {
    nlohmann::json j;
    j["nv"] = z.vertex_count;
    j["head"] = z.head;
    j["rev"] = z.rev;
    j["succ"] = z.succ;
    j["pred"] = z.pred;
    return j.dump();
}

PseudoTriangulation read_dart_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PseudoTriangulation z;
    z.vertex_count = j.at("nv").get<int32_t>();
    z.head = j.at("head").get<std::vector<VertexId>>();
    z.rev = j.at("rev").get<std::vector<DartId>>();
    z.succ = j.at("succ").get<std::vector<DartId>>();
    z.pred = j.at("pred").get<std::vector<DartId>>();
    if (z.rev.size() != z.head.size() || z.succ.size() != z.head.size() ||
        z.pred.size() != z.head.size())
        throw ParseError("inconsistent dart arrays");
    return z;
}

uint64_t trace_hash(const std::string& trace) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : trace) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace fourcolor
