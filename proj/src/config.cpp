#include "fourcolor/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace fourcolor {

namespace {

// Neighbors of v inside the configuration graph (ids >= ring_size).
int config_degree(const Configuration& c, VertexId v) {
    int d = 0;
    for (int32_t a : c.rotations[v])
        if (a >= c.ring_size) ++d;
    return d;
}

bool touches_ring_or_gap(const Configuration& c, VertexId v) {
    for (int32_t a : c.rotations[v])
        if (a == -1 || a < c.ring_size) return true;
    return false;
}

// Corners of the configuration graph's outer walk. A corner of vertex v is a
// maximal gap (run of ring/-1 entries) in its rotation; `last` and `first`
// are the configuration neighbors just before and after the gap.
struct Corner {
    VertexId v;
    VertexId last;   // config neighbor before the gap
    VertexId first;  // config neighbor after the gap
    int32_t external;  // ring slots at this corner
};

// Rotation of v restricted to configuration neighbors, gaps marked -1 and
// collapsed; entries are 0-based configuration indices.
std::vector<int32_t> config_rotation(const Configuration& c, VertexId v) {
    std::vector<int32_t> out;
    for (int32_t a : c.rotations[v]) {
        if (a == -1 || a < c.ring_size) {
            if (!out.empty() && out.back() == -1) continue;
            out.push_back(-1);
        } else {
            out.push_back(a - c.ring_size);
        }
    }
    // Collapse a gap wrapping around the end.
    if (out.size() > 1 && out.front() == -1 && out.back() == -1) out.pop_back();
    return out;
}

}  // namespace

int32_t expected_ring_size(const Configuration& c) {
    int64_t external = 0;
    for (VertexId v = c.ring_size; v < c.n; ++v)
        external += c.delta_of(v) - config_degree(c, v);
    // Outer walk length t: number of corners equals the number of gap
    // traversals, and each walk edge leaves one corner.
    int64_t t = 0;
    if (c.config_order() == 1) {
        t = 0;
    } else {
        for (VertexId v = c.ring_size; v < c.n; ++v) {
            auto rot = config_rotation(c, v);
            t += std::count(rot.begin(), rot.end(), -1);
        }
    }
    return static_cast<int32_t>(external - t);
}

namespace {

void validate_z_conditions(const Configuration& c) {
    int cut_vertices = 0;
    for (VertexId v = c.ring_size; v < c.n; ++v) {
        int d = config_degree(c, v);
        int32_t dv = c.delta_of(v);
        bool boundary = touches_ring_or_gap(c, v) || c.config_order() == 1;
        if (!boundary) {
            if (dv != d)
                throw InvariantViolationError("Z1: inner vertex " + std::to_string(v) +
                                              " has delta != degree");
            continue;
        }
        if (dv <= d)
            throw InvariantViolationError("Z2: boundary vertex " + std::to_string(v) +
                                          " has delta <= degree");
        auto rot = config_rotation(c, v);
        int gaps = static_cast<int>(std::count(rot.begin(), rot.end(), -1));
        if (gaps >= 2) {
            if (gaps != 2 || dv != d + 2)
                throw InvariantViolationError("Z3: cut-vertex " + std::to_string(v) +
                                              " must lie in two blocks with delta = degree + 2");
            ++cut_vertices;
        }
    }
    if (cut_vertices > 1)
        throw InvariantViolationError("Z3: more than one cut-vertex");
}

// Builds completion rotations for a bare configuration (file with R == 0).
// Input uses configuration-local ids 0..k-1; output uses completion ids with
// the ring first.
Configuration complete_bare(const Configuration& bare) {
    const int32_t k = bare.n;
    Configuration out;
    out.name = bare.name;
    out.delta = bare.delta;

    if (k == 1) {
        int32_t r = bare.delta[0];
        out.n = r + 1;
        out.ring_size = r;
        out.rotations.resize(out.n);
        for (int32_t j = 0; j < r; ++j) {
            int32_t prev = (j + r - 1) % r;
            int32_t next = (j + 1) % r;
            out.rotations[j] = {next, r, prev, -1};
        }
        for (int32_t j = 0; j < r; ++j) out.rotations[r].push_back(j);
        return out;
    }

    // Corners in outer-walk order.
    std::vector<Corner> corners;
    std::map<std::pair<VertexId, VertexId>, int> corner_by_walk_edge;  // (v, first) -> index
    std::vector<std::vector<int32_t>> rot(k);
    for (VertexId v = 0; v < k; ++v) rot[v] = config_rotation(bare, v);
    std::vector<int> external_left(k);
    for (VertexId v = 0; v < k; ++v)
        external_left[v] = bare.delta[v] - static_cast<int>(std::count_if(
                                               rot[v].begin(), rot[v].end(),
                                               [](int32_t a) { return a != -1; }));
    std::vector<std::vector<Corner>> corners_of(k);
    for (VertexId v = 0; v < k; ++v) {
        const auto& r = rot[v];
        int32_t sz = static_cast<int32_t>(r.size());
        int gaps = static_cast<int>(std::count(r.begin(), r.end(), -1));
        if (gaps == 0) continue;
        for (int32_t i = 0; i < sz; ++i) {
            if (r[i] != -1) continue;
            Corner c;
            c.v = v;
            c.last = r[(i + sz - 1) % sz];
            c.first = r[(i + 1) % sz];
            c.external = external_left[v] / gaps;  // (Z3): two gaps split 2 as 1+1
            corners_of[v].push_back(c);
        }
    }
    // Chain corners along the walk: from corner (v, first=w) the walk edge is
    // v->w and the next corner at w is the one whose `last` is v.
    std::vector<Corner> all;
    for (VertexId v = 0; v < k; ++v)
        for (const Corner& c : corners_of[v]) all.push_back(c);
    if (all.empty()) throw InvariantViolationError("configuration has no boundary");
    auto find_next = [&](const Corner& c) -> const Corner* {
        for (const Corner& d : corners_of[c.first])
            if (d.last == c.v) return &d;
        return nullptr;
    };
    std::vector<Corner> walk;
    std::set<std::pair<VertexId, VertexId>> seen;
    const Corner* cur = &all.front();
    while (true) {
        if (!seen.insert({cur->v, cur->first}).second) break;
        walk.push_back(*cur);
        cur = find_next(*cur);
        if (!cur) throw InvariantViolationError("broken outer walk");
    }
    if (walk.size() != all.size())
        throw InvariantViolationError("outer boundary is not a single closed walk");

    const int32_t t = static_cast<int32_t>(walk.size());
    int32_t ring = 0;
    for (const Corner& c : walk) ring += c.external;
    ring -= t;
    if (ring < 3) throw InvariantViolationError("ring shorter than 3");

    // Ring slots per corner: first slot shared with the previous corner.
    // Slot ids 0..ring-1 in walk order.
    std::vector<std::vector<int32_t>> slots(t);
    int32_t next_slot = 0;
    for (int32_t i = 0; i < t; ++i) {
        const Corner& c = walk[i];
        for (int32_t s = 0; s < c.external; ++s) {
            if (s == 0) {
                slots[i].push_back(i == 0 ? -1 : slots[i - 1].back());  // shared
            } else {
                slots[i].push_back(next_slot++);
            }
        }
    }
    // Close the cycle: the first corner's first slot is the last corner's last.
    slots[0].front() = slots[t - 1].back();
    // Corners whose only slot was shared forward need the propagated value.
    for (int32_t i = 1; i < t; ++i)
        if (slots[i].front() == -1) slots[i].front() = slots[i - 1].back();
    if (next_slot != ring) throw InvariantViolationError("ring slot allocation mismatch");

    out.n = k + ring;
    out.ring_size = ring;
    out.rotations.assign(out.n, {});
    auto cid = [&](VertexId v) { return v + ring; };  // configuration vertex id shift

    // Configuration vertex rotations: replace each gap with its slots.
    for (VertexId v = 0; v < k; ++v) {
        const auto& r = rot[v];
        int32_t sz = static_cast<int32_t>(r.size());
        if (std::count(r.begin(), r.end(), -1) == 0) {
            for (int32_t a : r) out.rotations[cid(v)].push_back(cid(a));
            continue;
        }
        for (int32_t i = 0; i < sz; ++i) {
            if (r[i] != -1) {
                out.rotations[cid(v)].push_back(cid(r[i]));
                continue;
            }
            // Find this corner in walk order; (v, last, first) identifies it
            // since distinct gaps of one vertex border distinct blocks.
            int32_t idx = -1;
            VertexId last = r[(i + sz - 1) % sz];
            VertexId first = r[(i + 1) % sz];
            for (int32_t w = 0; w < t; ++w) {
                if (walk[w].v == v && walk[w].last == last && walk[w].first == first) {
                    idx = w;
                    break;
                }
            }
            if (idx < 0) throw InvariantViolationError("corner bookkeeping failure");
            // Slots attach clockwise between `last` and `first`.
            for (int32_t s : slots[idx]) out.rotations[cid(v)].push_back(s);
        }
    }
    // Ring rotations: ring vertex j is adjacent to its ring neighbors and to
    // the configuration vertices whose corners carry it. Sharing only joins
    // consecutive walk corners, so the corners of one slot form a cyclic run;
    // the rotation lists them from the latest corner back to the earliest.
    std::vector<std::vector<int32_t>> corner_of(ring);
    for (int32_t i = 0; i < t; ++i)
        for (int32_t s : slots[i])
            if (corner_of[s].empty() || corner_of[s].back() != i) corner_of[s].push_back(i);
    for (int32_t j = 0; j < ring; ++j) {
        auto& run = corner_of[j];
        std::vector<char> in_run(t, 0);
        for (int32_t i : run) in_run[i] = 1;
        int32_t start = run.front();
        if (static_cast<int32_t>(run.size()) < t) {
            for (int32_t i : run)
                if (!in_run[(i + t - 1) % t]) start = i;
        }
        std::vector<VertexId> serve_order;
        for (size_t k = 0; k < run.size(); ++k)
            serve_order.push_back(walk[(start + k) % t].v);
        int32_t prev = (j + ring - 1) % ring;
        int32_t next = (j + 1) % ring;
        out.rotations[j].push_back(next);
        for (auto it = serve_order.rbegin(); it != serve_order.rend(); ++it)
            out.rotations[j].push_back(cid(*it));
        out.rotations[j].push_back(prev);
        out.rotations[j].push_back(-1);
    }
    return out;
}

}  // namespace

Configuration parse_config(std::istream& in, const std::string& name) {
    RotationFile header;
    Configuration c;
    c.name = name;
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        auto pos = line.find('#');
        if (pos != std::string::npos) line.erase(pos);
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) lines.push_back(line);
    }
    size_t at = 0;
    auto next_line = [&]() -> const std::string& {
        if (at >= lines.size()) throw ParseError("unexpected end of configuration file");
        return lines[at++];
    };
    {
        std::istringstream hs(next_line());
        if (!(hs >> c.n >> c.ring_size)) throw ParseError("bad header, expected \"N R\"");
    }
    if (c.n <= 0 || c.ring_size < 0 || c.ring_size >= c.n + 1)
        throw ParseError("bad header values");
    int32_t degree_lines = c.n - c.ring_size;
    for (int32_t i = 0; i < degree_lines; ++i) {
        std::istringstream ds(next_line());
        int32_t d;
        if (!(ds >> d) || d < 1) throw ParseError("bad degree line");
        c.delta.push_back(d);
    }
    c.rotations.resize(c.n);
    for (int32_t i = 0; i < c.n; ++i) {
        const std::string& rline = next_line();
        auto colon = rline.find(':');
        if (colon == std::string::npos) throw ParseError("rotation line missing ':'");
        int32_t v;
        {
            std::istringstream vs(rline.substr(0, colon));
            if (!(vs >> v) || v < 0 || v >= c.n) throw ParseError("bad vertex id");
        }
        std::istringstream as(rline.substr(colon + 1));
        int32_t a;
        while (as >> a) {
            if (a < -1 || a >= c.n) throw ParseError("neighbor out of range");
            c.rotations[v].push_back(a);
        }
    }
    if (c.ring_size == 0) {
        validate_z_conditions(c);
        c = complete_bare(c);
    }
    validate_z_conditions(c);
    if (expected_ring_size(c) != c.ring_size)
        throw InvariantViolationError("ring size does not match the defining formula");
    return c;
}

Configuration parse_config_text(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    return parse_config(in, name);
}

Configuration load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_config(in, std::filesystem::path(path).stem().string());
}

std::string serialize_config(const Configuration& c) {
    std::ostringstream os;
    os << c.n << ' ' << c.ring_size << '\n';
    for (int32_t d : c.delta) os << d << '\n';
    for (int32_t v = 0; v < c.n; ++v) {
        os << v << ':';
        for (int32_t a : c.rotations[v]) os << ' ' << a;
        os << '\n';
    }
    return os.str();
}

std::vector<Configuration> load_config_directory(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".conf") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    std::vector<Configuration> out;
    for (const auto& f : files) out.push_back(load_config_file(f));
    return out;
}

FreeCompletion free_completion(const Configuration& c) {
    FreeCompletion fc;
    fc.z = from_rotations(c.n, c.rotations);
    fc.ring.resize(c.ring_size);
    for (int32_t i = 0; i < c.ring_size; ++i) fc.ring[i] = i;
    return fc;
}

namespace {

// Adjacency of the configuration graph in completion ids.
std::vector<std::vector<VertexId>> config_adjacency(const Configuration& c) {
    std::vector<std::vector<VertexId>> adj(c.n);
    for (VertexId v = c.ring_size; v < c.n; ++v)
        for (int32_t a : c.rotations[v])
            if (a >= c.ring_size) adj[v].push_back(a);
    return adj;
}

std::vector<int> bfs_distances(const std::vector<std::vector<VertexId>>& adj, VertexId s,
                               VertexId lo) {
    std::vector<int> dist(adj.size(), -1);
    std::queue<VertexId> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (VertexId w : adj[v]) {
            if (w < lo || dist[w] >= 0) continue;
            dist[w] = dist[v] + 1;
            q.push(w);
        }
    }
    return dist;
}

}  // namespace

bool check_d0(const Configuration& c) {
    auto adj = config_adjacency(c);
    const VertexId lo = c.ring_size;
    // Outer-walk edges of the configuration graph: consecutive configuration
    // neighbors across a gap are walk-adjacent; more simply, an edge uv lies
    // on the outer boundary iff in u's rotation v is next to a gap entry and
    // vice versa. We collect boundary edges via the corner structure.
    std::set<std::pair<VertexId, VertexId>> boundary_edges;
    for (VertexId v = lo; v < c.n; ++v) {
        const auto& rot = c.rotations[v];
        int32_t sz = static_cast<int32_t>(rot.size());
        for (int32_t i = 0; i < sz; ++i) {
            if (rot[i] < lo && rot[i] != -2) {  // ring entry or -1: a gap
                VertexId before = rot[(i + sz - 1) % sz];
                VertexId after = rot[(i + 1) % sz];
                if (before >= lo) boundary_edges.insert({std::min(v, before), std::max(v, before)});
                if (after >= lo) boundary_edges.insert({std::min(v, after), std::max(v, after)});
            }
        }
    }
    std::vector<std::vector<int>> dist;
    for (VertexId v = lo; v < c.n; ++v) dist.push_back(bfs_distances(adj, v, lo));
    auto d = [&](VertexId u, VertexId w) { return dist[u - lo][w]; };
    int diameter = 0;
    for (VertexId u = lo; u < c.n; ++u)
        for (VertexId w = lo; w < c.n; ++w) {
            if (d(u, w) < 0) return false;  // disconnected
            diameter = std::max(diameter, d(u, w));
        }
    if (diameter > 4) return false;
    if (diameter < 4) return true;

    auto is_cut_vertex = [&](VertexId v) {
        auto rot = config_rotation(c, v - lo >= 0 ? v : v);
        // count gaps in the completion rotation of v
        const auto& r = c.rotations[v];
        int32_t sz = static_cast<int32_t>(r.size());
        int gaps = 0;
        bool in_gap = false;
        for (int32_t i = 0; i < sz; ++i) {
            bool g = r[i] < lo;
            if (g && !in_gap) ++gaps;
            in_gap = g;
        }
        if (in_gap && r[0] < lo) --gaps;  // wrapped, counted twice unless single
        if (gaps == 0 && in_gap) gaps = 1;
        return gaps >= 2;
    };
    auto external_degree = [&](VertexId v) {
        return c.delta_of(v) - static_cast<int32_t>(adj[v].size());
    };

    // For every pair at distance 4 there must be a witnessing path.
    for (VertexId u = lo; u < c.n; ++u) {
        for (VertexId w = lo; w < c.n; ++w) {
            if (u >= w || d(u, w) != 4) continue;
            bool ok = false;
            // Enumerate all length-4 paths u - a - b - e - w.
            for (VertexId a : adj[u]) {
                if (d(a, w) != 3) continue;
                for (VertexId b : adj[a]) {
                    if (d(b, w) != 2 || d(u, b) != 2) continue;
                    for (VertexId e : adj[b]) {
                        if (d(e, w) != 1 || d(u, e) != 3) continue;
                        bool on_boundary =
                            boundary_edges.count({std::min(u, a), std::max(u, a)}) &&
                            boundary_edges.count({std::min(a, b), std::max(a, b)}) &&
                            boundary_edges.count({std::min(b, e), std::max(b, e)}) &&
                            boundary_edges.count({std::min(e, w), std::max(e, w)});
                        if (!on_boundary) {
                            ok = true;
                            break;
                        }
                        for (VertexId mid : {a, b, e}) {
                            if (!is_cut_vertex(mid) && external_degree(mid) >= 2) {
                                ok = true;
                                break;
                            }
                        }
                        if (ok) break;
                    }
                    if (ok) break;
                }
                if (ok) break;
            }
            if (!ok) return false;
        }
    }
    return true;
}

std::vector<std::pair<int32_t, int32_t>> find_cut_pairs(const Configuration& c) {
    std::vector<std::pair<int32_t, int32_t>> pairs;
    for (VertexId v = c.ring_size; v < c.n; ++v) {
        const auto& rot = c.rotations[v];
        int32_t d = static_cast<int32_t>(rot.size());
        std::set<int32_t> ring_neighbors;
        int t = 0;
        for (int32_t j = 0; j < d; ++j) {
            int32_t k1 = rot[j];
            if (k1 >= 0 && k1 < c.ring_size) ring_neighbors.insert(k1);
            int32_t k2 = rot[(j + 1) % d];
            // border between ring and internal vertex
            if (k1 >= 0 && k1 < c.ring_size && k2 >= c.ring_size) ++t;
        }
        if (t >= 2 && ring_neighbors.size() != 2)
            throw InvalidConfigurationError("ring contact pattern contradicts (Z3) at vertex " +
                                            std::to_string(v));
        if (t == 2 && ring_neighbors.size() == 2) {
            auto it = ring_neighbors.begin();
            int32_t a = *it++;
            int32_t b = *it;
            pairs.emplace_back(a, b);
        }
    }
    return pairs;
}

namespace {

// removeRing: drop ring vertices not kept, renumber, rebuild rotations,
// assign [d+1, inf] to kept ring vertices and fixed degrees to the rest.
PseudoConfiguration remove_ring(const Configuration& c, const std::vector<bool>& remove) {
    std::vector<int32_t> old2new(c.n, -1);
    int32_t next_id = 0;
    for (int32_t i = 0; i < c.n; ++i) {
        if (i < c.ring_size && remove[i]) continue;
        old2new[i] = next_id++;
    }
    Rotations new_rot(next_id);
    for (int32_t i = 0; i < c.n; ++i) {
        if (i < c.ring_size && remove[i]) continue;
        for (int32_t j : c.rotations[i]) {
            if (j == -1 || (j < c.ring_size && remove[j])) {
                if (!new_rot[old2new[i]].empty() && new_rot[old2new[i]].back() == -1) continue;
                new_rot[old2new[i]].push_back(-1);
            } else {
                new_rot[old2new[i]].push_back(old2new[j]);
            }
        }
        auto& r = new_rot[old2new[i]];
        if (r.size() > 1 && r.front() == -1 && r.back() == -1) r.pop_back();
    }
    PseudoConfiguration out;
    out.z = from_rotations(next_id, new_rot);
    out.range.resize(next_id);
    for (int32_t i = 0; i < c.ring_size; ++i) {
        if (remove[i]) continue;
        int32_t k = old2new[i];
        int32_t d = 0;
        for (int32_t a : new_rot[k])
            if (a != -1) ++d;
        out.range[k] = DegreeRange{d + 1, kInfiniteDegree};
    }
    for (int32_t i = c.ring_size; i < c.n; ++i)
        out.range[old2new[i]] = DegreeRange{c.delta_of(i), c.delta_of(i)};
    return out;
}

}  // namespace

DartId maximum_degree_dart(const PseudoConfiguration& conf) {
    DartId f = kNil;
    std::pair<int32_t, int32_t> best{0, 0};
    for (DartId e = 0; e < conf.z.dart_count(); ++e) {
        VertexId y = conf.z.head[e];
        VertexId x = conf.z.tail(e);
        if (!conf.range[y].single() || !conf.range[x].single()) continue;
        std::pair<int32_t, int32_t> de{conf.range[y].lo, conf.range[x].lo};
        if (de > best) {
            f = e;
            best = de;
        }
    }
    return f;
}

std::vector<ExtendedConfiguration> extend_from_cut_vertices(const Configuration& c) {
    auto pairs = find_cut_pairs(c);
    std::vector<ExtendedConfiguration> out;
    size_t variants = size_t{1} << pairs.size();
    for (size_t s = 0; s < variants; ++s) {
        std::vector<bool> remove(c.ring_size, true);
        for (size_t i = 0; i < pairs.size(); ++i) {
            if (s & (size_t{1} << i))
                remove[pairs[i].first] = false;
            else
                remove[pairs[i].second] = false;
        }
        ExtendedConfiguration ext;
        ext.conf = remove_ring(c, remove);
        ext.special_dart = maximum_degree_dart(ext.conf);
        out.push_back(std::move(ext));
    }
    return out;
}

std::vector<ExtendedConfiguration> build_dbar(const std::vector<Configuration>& set) {
    std::vector<ExtendedConfiguration> out;
    for (const Configuration& c : set) {
        for (ExtendedConfiguration& e : extend_from_cut_vertices(c)) {
            ExtendedConfiguration mirrored;
            mirrored.conf.z = mirror(e.conf.z);
            mirrored.conf.range = e.conf.range;
            mirrored.special_dart = maximum_degree_dart(mirrored.conf);
            out.push_back(std::move(e));
            out.push_back(std::move(mirrored));
        }
    }
    return out;
}

namespace {

// darts_by_degree[dy][dx]: darts xy of the target with fixed degrees dx, dy
// up to kConfDegMax.
std::vector<std::vector<std::vector<DartId>>> darts_by_degree(const PseudoConfiguration& t) {
    std::vector<std::vector<std::vector<DartId>>> out(
        kConfDegMax + 1, std::vector<std::vector<DartId>>(kConfDegMax + 1));
    for (DartId e = 0; e < t.z.dart_count(); ++e) {
        int32_t dy = t.range[t.z.head[e]].lo;
        int32_t dx = t.range[t.z.tail(e)].lo;
        if (dy > kConfDegMax || dx > kConfDegMax) continue;
        out[dy][dx].push_back(e);
    }
    return out;
}

}  // namespace

std::optional<Containment> contain_conf_witness(const PseudoConfiguration& target,
                                                VertexId center,
                                                const std::vector<ExtendedConfiguration>& k) {
    auto by_degree = darts_by_degree(target);
    for (size_t m = 0; m < k.size(); ++m) {
        const ExtendedConfiguration& member = k[m];
        if (member.special_dart == kNil) continue;
        DartId f = member.special_dart;
        int32_t dy = member.conf.range[member.conf.z.head[f]].lo;
        int32_t dx = member.conf.range[member.conf.z.tail(f)].lo;
        if (dy > kConfDegMax || dx > kConfDegMax) continue;
        for (DartId fs : by_degree[dy][dx]) {
            if (dy > 8 && target.z.head[fs] != center) continue;
            auto phi = homomorphism(member.conf, f, target, fs, RangePredicate::kInclude);
            if (phi) return Containment{m, std::move(*phi)};
        }
    }
    return std::nullopt;
}

bool contain_conf(const PseudoConfiguration& target, VertexId center,
                  const std::vector<ExtendedConfiguration>& k) {
    return contain_conf_witness(target, center, k).has_value();
}

std::vector<PseudoConfiguration> representative_degree(const PseudoConfiguration& c,
                                                       VertexId center) {
    std::vector<std::vector<int32_t>> degrees(c.z.vertex_count);
    for (VertexId v = 0; v < c.z.vertex_count; ++v) {
        const DegreeRange r = c.range[v];
        int32_t cap = (v == center) ? kConfDegMax : 8;
        if (r.hi > cap) {
            degrees[v] = {r.hi};
        } else {
            for (int32_t d = r.lo; d <= r.hi; ++d) degrees[v].push_back(d);
        }
    }
    std::vector<std::vector<int32_t>> combos{{}};
    for (VertexId v = 0; v < c.z.vertex_count; ++v) {
        std::vector<std::vector<int32_t>> next;
        for (const auto& base : combos)
            for (int32_t d : degrees[v]) {
                auto copy = base;
                copy.push_back(d);
                next.push_back(std::move(copy));
            }
        combos = std::move(next);
    }
    std::vector<PseudoConfiguration> out;
    out.reserve(combos.size());
    for (const auto& combo : combos) {
        PseudoConfiguration t;
        t.z = c.z;
        t.range.resize(c.z.vertex_count);
        for (VertexId v = 0; v < c.z.vertex_count; ++v)
            t.range[v] = DegreeRange{combo[v], combo[v]};
        out.push_back(std::move(t));
    }
    return out;
}

bool blocked_by(const PseudoConfiguration& c, VertexId center,
                const std::vector<ExtendedConfiguration>& k) {
    if (k.empty()) return false;
    for (const PseudoConfiguration& t : representative_degree(c, center))
        if (!contain_conf(t, center, k)) return false;
    return true;
}

}  // namespace fourcolor
