#include "fourcolor/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace fourcolor {

bool verify_coloring(const EmbeddedTriangulation& g, const Coloring& c) {
    if (static_cast<int32_t>(c.color.size()) != g.n()) return false;
    for (VertexId v = 0; v < g.n(); ++v) {
        if (c.color[v] < 0 || c.color[v] > 3) return false;
        for (int32_t w : g.rot[v])
            if (c.color[w] == c.color[v]) return false;
    }
    return true;
}

Adjacency adjacency_of(const EmbeddedTriangulation& g) {
    Adjacency adj(g.n());
    for (VertexId v = 0; v < g.n(); ++v) adj[v].assign(g.rot[v].begin(), g.rot[v].end());
    return adj;
}

KempeChainIndex kempe_chains(const Adjacency& adj, const Coloring& c, int pair_id) {
    KempeChainIndex idx;
    const int32_t n = static_cast<int32_t>(adj.size());
    idx.chain.assign(n, -1);
    auto side = [&](VertexId v) { return (c.color[v] == 0 || c.color[v] == pair_id) ? 0 : 1; };
    for (VertexId v = 0; v < n; ++v) {
        if (c.color[v] < 0 || idx.chain[v] >= 0) continue;
        int32_t id = idx.count++;
        std::vector<VertexId> stack{v};
        idx.chain[v] = id;
        while (!stack.empty()) {
            VertexId u = stack.back();
            stack.pop_back();
            for (VertexId w : adj[u]) {
                if (c.color[w] < 0 || idx.chain[w] >= 0) continue;
                if (side(w) != side(u)) continue;
                idx.chain[w] = id;
                stack.push_back(w);
            }
        }
    }
    return idx;
}

void kempe_change(Coloring& c, const KempeChainIndex& idx, const std::vector<char>& swap_chain,
                  int pair_id) {
    for (size_t v = 0; v < c.color.size(); ++v) {
        if (c.color[v] < 0) continue;
        int32_t ch = idx.chain[v];
        if (ch >= 0 && swap_chain[ch]) c.color[v] ^= pair_id;
    }
}

std::vector<VertexId> chain_through(const Adjacency& adj, const Coloring& c, VertexId x, int a,
                                    int b) {
    std::vector<VertexId> out;
    if (c.color[x] != a && c.color[x] != b) return out;
    std::vector<char> seen(adj.size(), 0);
    std::vector<VertexId> stack{x};
    seen[x] = 1;
    while (!stack.empty()) {
        VertexId u = stack.back();
        stack.pop_back();
        out.push_back(u);
        for (VertexId w : adj[u]) {
            if (seen[w] || (c.color[w] != a && c.color[w] != b)) continue;
            seen[w] = 1;
            stack.push_back(w);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Context construction.

namespace {

std::unordered_map<PackedColoring, int> ring_table(const FreeCompletion& fc,
                                                   const std::string& cache_dir) {
    std::string cache_path;
    if (!cache_dir.empty()) {
        uint64_t h = trace_hash(canonical_trace(fc.z, 0));
        std::ostringstream name;
        name << std::hex << h << ".tbl";
        cache_path = cache_dir + "/" + name.str();
        std::ifstream in(cache_path);
        if (in) {
            std::unordered_map<PackedColoring, int> table;
            PackedColoring key;
            int level;
            while (in >> key >> level) table[key] = level;
            if (!table.empty()) return table;
        }
    }
    std::unordered_map<PackedColoring, int> table;
    auto res = check_d_reducibility(fc, [&](PackedColoring c, int level) { table[c] = level; });
    if (!res.d_reducible)
        throw InvalidInputError("corpus member is not D-reducible");
    if (!cache_path.empty()) {
        std::filesystem::create_directories(cache_dir);
        std::ofstream out(cache_path);
        for (auto [k, l] : table) out << k << ' ' << l << '\n';
    }
    return table;
}

}  // namespace

ColorContext make_color_context(std::vector<Configuration> corpus, RuleSet rules,
                                const std::string& cache_dir) {
    ColorContext ctx;
    ctx.rules = std::move(rules);
    for (Configuration& c : corpus) {
        if (!find_cut_pairs(c).empty())
            throw InvalidInputError("coloring corpus must be cut-vertex free: " + c.name);
        ctx.corpus.push_back(std::move(c));
    }
    for (size_t i = 0; i < ctx.corpus.size(); ++i) {
        const Configuration& c = ctx.corpus[i];
        FreeCompletion fc = free_completion(c);
        FreeCompletion mfc;
        mfc.z = mirror(fc.z);
        mfc.ring = fc.ring;
        ctx.tables.push_back(ring_table(fc, cache_dir));
        ctx.mirrored_tables.push_back(ring_table(mfc, cache_dir));
        ctx.completions.push_back(std::move(fc));
        ctx.mirrored_completions.push_back(std::move(mfc));
        auto exts = extend_from_cut_vertices(c);
        for (ExtendedConfiguration& e : exts) {
            ExtendedConfiguration mirrored;
            mirrored.conf.z = mirror(e.conf.z);
            mirrored.conf.range = e.conf.range;
            mirrored.special_dart = maximum_degree_dart(mirrored.conf);
            ctx.dbar.push_back(std::move(e));
            ctx.dbar_member.push_back(i);
            ctx.dbar_mirrored.push_back(0);
            ctx.dbar.push_back(std::move(mirrored));
            ctx.dbar_member.push_back(i);
            ctx.dbar_mirrored.push_back(1);
        }
    }
    return ctx;
}

// ---------------------------------------------------------------------------
// Balls and local obstructing cycles.

namespace {

// Degree-bounded ball: vertices reachable by paths of length <= k whose
// internal vertices (and, for the non-extended ball, endpoints) have degree
// at most 8. Returns (ball, extended ball).
std::pair<std::set<VertexId>, std::set<VertexId>> degree_bounded_ball(
    const EmbeddedTriangulation& g, VertexId v0, int k) {
    std::set<VertexId> ball, extended;
    std::map<VertexId, int> dist;
    std::queue<VertexId> q;
    dist[v0] = 0;
    q.push(v0);
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        int d = dist[v];
        bool expandable = (v == v0) || g.degree(v) <= 8;
        if (d >= k || !expandable) continue;
        for (int32_t w : g.rot[v]) {
            if (dist.count(w)) continue;
            dist[w] = d + 1;
            q.push(w);
        }
    }
    for (auto [v, d] : dist) {
        extended.insert(v);
        if (v == v0 || g.degree(v) <= 8) ball.insert(v);
    }
    return {ball, extended};
}

// In rot[c] the neighbors strictly between `after` and `before` (walking the
// cyclic order from after to before, both exclusive).
std::vector<VertexId> arc_between(const EmbeddedTriangulation& g, VertexId c, VertexId after,
                                  VertexId before) {
    const auto& r = g.rot[c];
    size_t i = std::find(r.begin(), r.end(), after) - r.begin();
    std::vector<VertexId> out;
    for (size_t s = 1; s < r.size(); ++s) {
        VertexId w = r[(i + s) % r.size()];
        if (w == before) break;
        out.push_back(w);
    }
    return out;
}

// Vertex counts strictly inside / outside a cycle (sides split by the cycle).
std::pair<int64_t, int64_t> cycle_side_counts(const EmbeddedTriangulation& g,
                                              const std::vector<VertexId>& cycle) {
    const int32_t n = g.n();
    std::vector<char> on_cycle(n, 0);
    for (VertexId v : cycle) on_cycle[v] = 1;
    // Side seed: neighbors of cycle[0] strictly between cycle[1] and
    // cycle[k-1] are on one side; the others on the other side.
    std::vector<int> side(n, -1);
    std::vector<VertexId> seeds_a =
        arc_between(g, cycle[0], cycle[1], cycle[cycle.size() - 1]);
    std::vector<VertexId> seeds_b =
        arc_between(g, cycle[0], cycle[cycle.size() - 1], cycle[1]);
    std::queue<VertexId> q;
    for (VertexId v : seeds_a)
        if (!on_cycle[v] && side[v] < 0) {
            side[v] = 0;
            q.push(v);
        }
    for (VertexId v : seeds_b)
        if (!on_cycle[v] && side[v] < 0) {
            side[v] = 1;
            q.push(v);
        }
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (int32_t w : g.rot[v]) {
            if (on_cycle[w] || side[w] >= 0) continue;
            side[w] = side[v];
            q.push(w);
        }
    }
    int64_t a = 0, b = 0;
    for (VertexId v = 0; v < n; ++v) {
        if (side[v] == 0) ++a;
        if (side[v] == 1) ++b;
    }
    return {a, b};
}

bool is_face(const EmbeddedTriangulation& g, VertexId a, VertexId b, VertexId c) {
    const auto& r = g.rot[a];
    for (size_t i = 0; i < r.size(); ++i) {
        VertexId x = r[i], y = r[(i + 1) % r.size()];
        if ((x == b && y == c) || (x == c && y == b)) return true;
    }
    return false;
}

bool chordless(const EmbeddedTriangulation& g, const std::vector<VertexId>& cycle) {
    size_t k = cycle.size();
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 2; j < k; ++j) {
            if (i == 0 && j == k - 1) continue;
            if (g.adjacent(cycle[i], cycle[j])) return false;
        }
    return true;
}

// Rotates the cycle so that public vertices (outside `ball`) come last, and
// checks the public part is at most two consecutive vertices.
std::optional<ObstructingCycle> classify_local(const std::vector<VertexId>& cycle,
                                               const std::set<VertexId>& ball) {
    size_t k = cycle.size();
    std::vector<char> pub(k, 0);
    int count = 0;
    for (size_t i = 0; i < k; ++i)
        if (!ball.count(cycle[i])) {
            pub[i] = 1;
            ++count;
        }
    if (count > 2) return std::nullopt;
    ObstructingCycle out;
    out.public_count = count;
    if (count == 0) {
        out.cycle = cycle;
        return out;
    }
    // Find a rotation with all public vertices at the tail, consecutively.
    for (size_t start = 0; start < k; ++start) {
        bool ok = true;
        for (size_t i = 0; i < k; ++i) {
            bool should_be_public = i >= k - count;
            if (pub[(start + i) % k] != should_be_public) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (size_t i = 0; i < k; ++i) out.cycle.push_back(cycle[(start + i) % k]);
            return out;
        }
    }
    return std::nullopt;  // public vertices not consecutive
}

}  // namespace

std::optional<ObstructingCycle> find_local_obstructing_cycle(const EmbeddedTriangulation& g,
                                                             VertexId v, int k) {
    auto [ball, extended] = degree_bounded_ball(g, v, k);
    std::vector<VertexId> verts(extended.begin(), extended.end());
    // Triangles: separating iff not a face.
    for (VertexId a : verts) {
        for (int32_t b : g.rot[a]) {
            if (b < a || !extended.count(b)) continue;
            for (int32_t c : g.rot[a]) {
                if (c < b || !extended.count(c) || !g.adjacent(b, c)) continue;
                std::vector<VertexId> cyc{a, static_cast<VertexId>(b), static_cast<VertexId>(c)};
                if (is_face(g, a, b, c)) continue;
                if (auto loc = classify_local(cyc, ball)) return loc;
            }
        }
    }
    // Chordless 4-cycles: a-x-b-y with a,b and x,y non-adjacent.
    for (VertexId a : verts) {
        for (int32_t x : g.rot[a]) {
            if (!extended.count(x)) continue;
            for (int32_t b : g.rot[x]) {
                if (b == a || !extended.count(b) || g.adjacent(a, b)) continue;
                for (int32_t y : g.rot[b]) {
                    if (y == x || !extended.count(y) || !g.adjacent(y, a)) continue;
                    if (g.adjacent(x, y)) continue;
                    std::vector<VertexId> cyc{a, static_cast<VertexId>(x),
                                              static_cast<VertexId>(b), static_cast<VertexId>(y)};
                    if (auto loc = classify_local(cyc, ball)) return loc;
                }
            }
        }
    }
    // Chordless 5-cycles with at least two vertices on each side.
    for (VertexId a : verts) {
        for (int32_t b : g.rot[a]) {
            if (!extended.count(b)) continue;
            for (int32_t c : g.rot[b]) {
                if (c == a || !extended.count(c)) continue;
                for (int32_t d : g.rot[c]) {
                    if (d == b || d == a || !extended.count(d)) continue;
                    for (int32_t e : g.rot[d]) {
                        if (e == c || e == b || e == a || !extended.count(e)) continue;
                        if (!g.adjacent(e, a)) continue;
                        std::vector<VertexId> cyc{a, static_cast<VertexId>(b),
                                                  static_cast<VertexId>(c),
                                                  static_cast<VertexId>(d),
                                                  static_cast<VertexId>(e)};
                        if (!chordless(g, cyc)) continue;
                        auto [inside, outside] = cycle_side_counts(g, cyc);
                        if (inside < 2 || outside < 2) continue;
                        if (auto loc = classify_local(cyc, ball)) return loc;
                    }
                }
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Instance discovery.

namespace {

DartId dart_between(const PseudoTriangulation& z, VertexId tail, VertexId head) {
    for (DartId e = 0; e < z.dart_count(); ++e)
        if (z.head[e] == head && z.tail(e) == tail) return e;
    return kNil;
}

// For a contained extension image, extend the homomorphism over the whole
// completion to recover the ring embedding. Returns the completion vertex
// map, or nothing if the image is degenerate (self-touching ring, repeats).
std::optional<std::vector<VertexId>> completion_map(const EmbeddedTriangulation& g,
                                                    const PseudoConfiguration& g_conf,
                                                    const ColorContext& ctx, size_t dbar_index,
                                                    const Homomorphism& ext_phi) {
    size_t member = ctx.dbar_member[dbar_index];
    const ExtendedConfiguration& ext = ctx.dbar[dbar_index];
    const FreeCompletion& fc = ctx.dbar_mirrored[dbar_index]
                                   ? ctx.mirrored_completions[member]
                                   : ctx.completions[member];
    const Configuration& conf = ctx.corpus[member];
    const int32_t ring = conf.ring_size;
    // Anchor: the special dart's endpoints in extension ids map to completion
    // ids by the ring-first shift.
    DartId f = ext.special_dart;
    if (f == kNil) return std::nullopt;
    VertexId x = ext.conf.z.tail(f), y = ext.conf.z.head[f];
    DartId completion_dart = dart_between(fc.z, x + ring, y + ring);
    if (completion_dart == kNil) return std::nullopt;
    PseudoConfiguration loose;
    loose.z = fc.z;
    loose.range.assign(fc.z.vertex_count, DegreeRange{1, kInfiniteDegree});
    auto phi = homomorphism(loose, completion_dart, g_conf, ext_phi.dart_map[f],
                            RangePredicate::kIntersect);
    if (!phi) return std::nullopt;
    std::vector<VertexId> cmap = phi->vertex_map;
    std::set<VertexId> distinct(cmap.begin(), cmap.end());
    if (distinct.size() != cmap.size()) return std::nullopt;
    (void)g;
    return cmap;
}

// Scans for one embedded corpus member anchored inside `allowed` (or
// anywhere when empty), honoring the center constraint.
std::optional<ReducibleInstance> scan_instance(const EmbeddedTriangulation& g,
                                               const PseudoConfiguration& g_conf,
                                               const ColorContext& ctx, VertexId center,
                                               const std::set<VertexId>& allowed) {
    for (size_t m = 0; m < ctx.dbar.size(); ++m) {
        const ExtendedConfiguration& ext = ctx.dbar[m];
        if (ext.special_dart == kNil) continue;
        DartId f = ext.special_dart;
        int32_t dy = ext.conf.range[ext.conf.z.head[f]].lo;
        int32_t dx = ext.conf.range[ext.conf.z.tail(f)].lo;
        for (DartId e = 0; e < g_conf.z.dart_count(); ++e) {
            VertexId hy = g_conf.z.head[e], hx = g_conf.z.tail(e);
            if (!allowed.empty() && (!allowed.count(hy) || !allowed.count(hx))) continue;
            if (g.degree(hy) != dy || g.degree(hx) != dx) continue;
            if (dy > 8 && hy != center) continue;
            auto phi = homomorphism(ext.conf, f, g_conf, e, RangePredicate::kInclude);
            if (!phi) continue;
            auto cmap = completion_map(g, g_conf, ctx, m, *phi);
            if (!cmap) continue;
            ReducibleInstance inst;
            inst.member = ctx.dbar_member[m];
            inst.mirrored = ctx.dbar_mirrored[m];
            inst.cmap = std::move(*cmap);
            inst.ring_size = ctx.corpus[inst.member].ring_size;
            return inst;
        }
    }
    return std::nullopt;
}

std::optional<size_t> corpus_single_vertex_member(const ColorContext& ctx, int32_t degree) {
    for (size_t i = 0; i < ctx.corpus.size(); ++i)
        if (ctx.corpus[i].config_order() == 1 && ctx.corpus[i].delta[0] == degree) return i;
    return std::nullopt;
}

ReducibleInstance single_vertex_instance(const EmbeddedTriangulation& g, const ColorContext& ctx,
                                         size_t member, VertexId v) {
    ReducibleInstance inst;
    inst.member = member;
    inst.mirrored = false;
    inst.ring_size = ctx.corpus[member].ring_size;
    inst.cmap.assign(g.rot[v].begin(), g.rot[v].end());
    inst.cmap.push_back(v);
    return inst;
}

bool instances_touch(const EmbeddedTriangulation& g, const std::vector<char>& blocked,
                     const ReducibleInstance& inst) {
    for (VertexId v : inst.interior()) {
        if (blocked[v]) return true;
    }
    (void)g;
    return false;
}

void block_instance(const EmbeddedTriangulation& g, std::vector<char>& blocked,
                    const ReducibleInstance& inst) {
    for (VertexId v : inst.interior()) {
        blocked[v] = 1;
        for (int32_t w : g.rot[v]) blocked[w] = 1;
    }
}

}  // namespace

ReductionSets find_reduction_sets(const EmbeddedTriangulation& g, const ColorContext& ctx) {
    ReductionSets out;
    const int32_t n = g.n();
    std::vector<char> blocked(n, 0);

    // Vertices of degree 3 or 4 are corpus members on their own.
    for (VertexId v = 0; v < n; ++v) {
        int d = g.degree(v);
        if (d != 3 && d != 4) continue;
        auto member = corpus_single_vertex_member(ctx, d);
        if (!member || blocked[v]) continue;
        ReducibleInstance inst = single_vertex_instance(g, ctx, *member, v);
        if (instances_touch(g, blocked, inst)) continue;
        block_instance(g, blocked, inst);
        out.reducibles.push_back(std::move(inst));
    }
    if (!out.reducibles.empty()) return out;

    PseudoConfiguration g_conf = to_pseudo_configuration(g);
    ChargeLedger led = charge_ledger(g, ctx.rules);

    auto try_center = [&](VertexId v, int k) {
        if (auto cycle = find_local_obstructing_cycle(g, v, k)) {
            out.obstructions.push_back(std::move(*cycle));
            return;
        }
        auto [ball, extended] = degree_bounded_ball(g, v, k);
        if (auto inst = scan_instance(g, g_conf, ctx, v, ball)) {
            if (!instances_touch(g, blocked, *inst)) {
                block_instance(g, blocked, *inst);
                out.reducibles.push_back(std::move(*inst));
            }
        }
    };

    // Positively charged or zero-charge high-degree centers.
    std::vector<char> used(n, 0);
    for (VertexId v = 0; v < n; ++v) {
        bool in_u = led.final_charge[v] > 0 || (led.final_charge[v] == 0 && g.degree(v) >= 9);
        if (!in_u || used[v]) continue;
        auto [b5, e5] = degree_bounded_ball(g, v, 5);
        for (VertexId w : e5) used[w] = 1;
        try_center(v, 2);
    }

    // Deep flat vertices: distance more than 12 from any bad vertex.
    std::vector<int> dist_bad(n, -1);
    std::queue<VertexId> q;
    for (VertexId v = 0; v < n; ++v)
        if (g.degree(v) > 8 || led.final_charge[v] != 0) {
            dist_bad[v] = 0;
            q.push(v);
        }
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (int32_t w : g.rot[v])
            if (dist_bad[w] < 0) {
                dist_bad[w] = dist_bad[v] + 1;
                q.push(w);
            }
    }
    std::vector<char> wused(n, 0);
    for (VertexId v = 0; v < n; ++v) {
        if (wused[v]) continue;
        if (dist_bad[v] >= 0 && dist_bad[v] <= 12) continue;
        auto [b25, e25] = degree_bounded_ball(g, v, 25);
        for (VertexId w : e25) wused[w] = 1;
        try_center(v, 12);
    }
    // Correctness gate on the emitted cycles: private parts vertex-disjoint
    // and edge-separated; violators dropped greedily.
    std::vector<ObstructingCycle> kept;
    std::vector<char> private_blocked(n, 0);
    for (ObstructingCycle& oc : out.obstructions) {
        bool clash = false;
        size_t private_count = oc.cycle.size() - oc.public_count;
        for (size_t i = 0; i < private_count && !clash; ++i)
            if (private_blocked[oc.cycle[i]]) clash = true;
        if (clash) continue;
        for (size_t i = 0; i < private_count; ++i) {
            private_blocked[oc.cycle[i]] = 1;
            for (int32_t w : g.rot[oc.cycle[i]]) private_blocked[w] = 1;
        }
        kept.push_back(std::move(oc));
    }
    out.obstructions = std::move(kept);
    return out;
}

// ---------------------------------------------------------------------------
// Batch reduction.

namespace {

// Walks the boundary cycle of one hole, starting from a boundary vertex.
// `mine` marks the vertices deleted for this hole only; a boundary vertex
// may also border other holes, whose arcs are skipped.
template <typename Pred>
std::vector<VertexId> hole_walk(const EmbeddedTriangulation& g, Pred mine, VertexId start) {
    std::vector<VertexId> walk;
    VertexId cur = start;
    do {
        walk.push_back(cur);
        const auto& r = g.rot[cur];
        size_t sz = r.size();
        VertexId next = -1;
        for (size_t i = 0; i < sz; ++i) {
            if (mine(r[i]) && !mine(r[(i + 1) % sz])) {
                next = r[(i + 1) % sz];
                break;
            }
        }
        if (next < 0) throw InvalidInputError("broken hole boundary");
        cur = next;
        if (walk.size() > g.rot.size()) throw InvalidInputError("hole walk does not close");
    } while (cur != start);
    return walk;
}

struct Rebuilt {
    EmbeddedTriangulation g;
    std::vector<VertexId> old2new;  // -1 for removed
};

Rebuilt compact(const Rotations& rot, const std::vector<char>& alive) {
    Rebuilt out;
    out.old2new.assign(rot.size(), -1);
    int32_t next = 0;
    for (size_t v = 0; v < rot.size(); ++v)
        if (alive[v]) out.old2new[v] = next++;
    out.g.rot.resize(next);
    for (size_t v = 0; v < rot.size(); ++v) {
        if (!alive[v]) continue;
        for (int32_t w : rot[v]) out.g.rot[out.old2new[v]].push_back(out.old2new[w]);
    }
    return out;
}

struct BatchPlan {
    Rebuilt reduced;
    std::vector<std::vector<VertexId>> holes;  // hole walk per instance (old ids)
    std::vector<size_t> kept;                  // surviving instance indices
};

// Serpentine triangulation of a hole: chords only between ring vertices, so
// the re-triangulated graph keeps low degrees. Returns the per-vertex gap
// insertion lists (fan order from the walk predecessor to the successor), or
// nothing if every strip phase conflicts with existing or added edges.
std::optional<std::map<VertexId, std::vector<VertexId>>> plan_hole_fill(
    const std::vector<VertexId>& walk,
    const std::function<bool(VertexId, VertexId)>& blocked) {
    const int r = static_cast<int>(walk.size());
    if (r == 3) {
        std::map<VertexId, std::vector<VertexId>> empty;
        for (VertexId w : walk) empty[w] = {};
        return empty;
    }
    for (int variant = 0; variant < 2 * r; ++variant) {
        int offset = variant / 2;
        bool flip = variant % 2;
        auto at = [&](int i) {
            int idx = (offset + (flip ? r - (i % r) : i)) % r;
            return walk[((idx % r) + r) % r];
        };
        // Strip triangles over positions 0..r-1 of the rotated view.
        std::vector<std::array<int, 3>> tris;
        int lo = 1, hi = r - 1;
        tris.push_back({0, 1, r - 1});
        bool take_low = true;
        while (hi - lo >= 2) {
            if (take_low) {
                tris.push_back({lo, lo + 1, hi});
                ++lo;
            } else {
                tris.push_back({hi, lo, hi - 1});
                --hi;
            }
            take_low = !take_low;
        }
        // Chords: triangle sides that are not ring edges.
        bool ok = true;
        std::set<std::pair<int, int>> chords;
        for (const auto& tri : tris) {
            for (int s = 0; s < 3 && ok; ++s) {
                int a = tri[s], b = tri[(s + 1) % 3];
                if ((a + 1) % r == b || (b + 1) % r == a) continue;  // ring edge
                chords.insert(std::minmax(a, b));
            }
        }
        for (auto [a, b] : chords)
            if (blocked(at(a), at(b))) ok = false;
        if (!ok) continue;
        // Fan order per vertex: walk the triangles from the predecessor edge.
        std::map<VertexId, std::vector<VertexId>> fill;
        for (int j = 0; j < r && ok; ++j) {
            VertexId vj = walk[j];
            VertexId prev = walk[(j + r - 1) % r];
            VertexId next = walk[(j + 1) % r];
            // Positions are in the rotated view; translate j to it.
            std::vector<std::array<VertexId, 3>> mine;
            for (const auto& tri : tris) {
                std::array<VertexId, 3> m{at(tri[0]), at(tri[1]), at(tri[2])};
                if (m[0] == vj || m[1] == vj || m[2] == vj) mine.push_back(m);
            }
            std::vector<char> used(mine.size(), 0);
            std::vector<VertexId> items;
            VertexId cur = prev;
            for (size_t step = 0; step < mine.size(); ++step) {
                bool advanced = false;
                for (size_t k = 0; k < mine.size(); ++k) {
                    if (used[k]) continue;
                    const auto& m = mine[k];
                    if (m[0] != cur && m[1] != cur && m[2] != cur) continue;
                    VertexId third = -1;
                    for (VertexId x : m)
                        if (x != vj && x != cur) third = x;
                    if (third < 0) continue;
                    used[k] = 1;
                    cur = third;
                    if (cur != next) items.push_back(cur);
                    advanced = true;
                    break;
                }
                if (!advanced) break;
            }
            if (cur != next) {
                ok = false;
                break;
            }
            fill[vj] = std::move(items);
        }
        if (ok) return fill;
    }
    return std::nullopt;
}

BatchPlan reduce_graph(const EmbeddedTriangulation& g,
                       const std::vector<ReducibleInstance>& instances) {
    const int32_t n = g.n();
    std::vector<int32_t> removed_by(n, -1);
    for (size_t i = 0; i < instances.size(); ++i)
        for (VertexId v : instances[i].interior()) removed_by[v] = static_cast<int32_t>(i);
    std::vector<char> removed(n, 0);
    for (VertexId v = 0; v < n; ++v) removed[v] = removed_by[v] >= 0;

    BatchPlan plan;
    plan.holes.resize(instances.size());
    // Per (ring vertex, instance): what fills that instance's gap at the vertex.
    std::vector<std::map<int32_t, std::vector<VertexId>>> insertion(n);
    Rotations rot(n);
    int32_t hub_base = n;
    std::vector<std::vector<VertexId>> hub_rot;

    // Chords must stay distinct from existing edges and across the whole
    // batch; conflicting 4-ring instances are dropped, longer rings fall
    // back to a hub vertex.
    std::set<std::pair<VertexId, VertexId>> added;
    std::function<bool(VertexId, VertexId)> blocked_chord = [&](VertexId a, VertexId b) {
        return g.adjacent(a, b) || added.count({std::min(a, b), std::max(a, b)}) > 0;
    };
    for (size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        int32_t ii = static_cast<int32_t>(i);
        std::vector<VertexId> walk = hole_walk(
            g, [&](VertexId w) { return removed_by[w] == ii; }, inst.ring_vertex(0));
        if (static_cast<int32_t>(walk.size()) != inst.ring_size)
            throw InvalidInputError("hole boundary length mismatch");
        plan.holes[i] = walk;
        int32_t r = inst.ring_size;
        auto fill = plan_hole_fill(walk, blocked_chord);
        if (fill) {
            for (auto& [v, items] : *fill) {
                insertion[v][ii] = items;
                for (VertexId x : items) added.insert(std::minmax(v, x));
            }
        } else if (r == 4) {
            // Both diagonals taken: drop this instance from the batch.
            for (VertexId v : inst.interior()) {
                removed_by[v] = -1;
                removed[v] = 0;
            }
            continue;
        } else {
            // Every strip phase conflicted: fall back to a hub vertex.
            int32_t hub = hub_base + static_cast<int32_t>(hub_rot.size());
            std::vector<VertexId> hrot(walk.rbegin(), walk.rend());
            hub_rot.push_back(hrot);
            for (VertexId w : walk) insertion[w][ii] = {hub};
        }
        plan.kept.push_back(i);
    }
    if (plan.kept.empty()) throw InvalidInputError("all batch instances conflicted");

    for (VertexId v = 0; v < n; ++v) {
        if (removed[v]) continue;
        const auto& r = g.rot[v];
        size_t sz = r.size();
        // Start at a surviving neighbor so removed arcs never wrap.
        size_t start = 0;
        while (start < sz && removed[r[start]]) ++start;
        if (start == sz) throw InvalidInputError("ring vertex fully buried");
        for (size_t s = 0; s < sz; ++s) {
            VertexId w = r[(start + s) % sz];
            if (!removed[w]) {
                rot[v].push_back(w);
                continue;
            }
            // First entry of a removed arc (per owner): emit its insertion.
            size_t prev = (start + s + sz - 1) % sz;
            int32_t owner = removed_by[w];
            if (removed[r[prev]] && removed_by[r[prev]] == owner) continue;
            auto it = insertion[v].find(owner);
            if (it == insertion[v].end())
                throw InvalidInputError("removed arc without a registered hole");
            for (VertexId x : it->second) rot[v].push_back(x);
        }
    }

    Rotations all = rot;
    for (auto& hr : hub_rot) all.push_back(hr);
    std::vector<char> alive(all.size(), 1);
    for (VertexId v = 0; v < n; ++v) alive[v] = !removed[v];
    plan.reduced = compact(all, alive);
    return plan;
}

}  // namespace

Coloring batch_reduce_and_color(const EmbeddedTriangulation& g,
                                const std::vector<ReducibleInstance>& all_instances,
                                const ColorContext& ctx, int depth) {
    // Non-touching verification: interiors pairwise disjoint and non-adjacent.
    {
        std::vector<char> blocked(g.n(), 0);
        for (const auto& inst : all_instances) {
            for (VertexId v : inst.interior())
                if (blocked[v]) throw InvalidInputError("instances touch");
            for (VertexId v : inst.interior()) {
                blocked[v] = 1;
                for (int32_t w : g.rot[v]) blocked[w] = 1;
            }
        }
    }
    BatchPlan plan = reduce_graph(g, all_instances);
    std::vector<ReducibleInstance> instances;
    std::vector<std::vector<VertexId>> holes;
    for (size_t i : plan.kept) {
        instances.push_back(all_instances[i]);
        holes.push_back(plan.holes[i]);
    }
    Coloring reduced = four_color(plan.reduced.g, ctx, depth + 1);

    Coloring c;
    c.color.assign(g.n(), -1);
    for (VertexId v = 0; v < g.n(); ++v)
        if (plan.reduced.old2new[v] >= 0) c.color[v] = reduced.color[plan.reduced.old2new[v]];

    Adjacency adj = adjacency_of(g);
    std::vector<char> active(instances.size(), 1);
    auto ring_coloring = [&](size_t i) {
        PackedColoring pc = 0;
        for (int p = 0; p < instances[i].ring_size; ++p)
            pc |= PackedColoring(c.color[instances[i].ring_vertex(p)]) << (2 * p);
        return pc;
    };
    auto table_of = [&](size_t i) -> const std::unordered_map<PackedColoring, int>& {
        return instances[i].mirrored ? ctx.mirrored_tables[instances[i].member]
                                     : ctx.tables[instances[i].member];
    };
    auto completion_of = [&](size_t i) -> const FreeCompletion& {
        return instances[i].mirrored ? ctx.mirrored_completions[instances[i].member]
                                     : ctx.completions[instances[i].member];
    };
    auto level_of = [&](size_t i) {
        auto& table = table_of(i);
        auto it = table.find(ring_coloring(i));
        if (it == table.end())
            throw StuckRingError("ring coloring missing from the extendibility table");
        return it->second;
    };
    auto try_extend = [&](size_t i) {
        if (level_of(i) != 0) return false;
        const FreeCompletion& fc = completion_of(i);
        std::vector<int> full = extend_ring_coloring(fc, ring_coloring(i));
        if (full.empty()) throw StuckRingError("level-0 ring coloring failed to extend");
        for (int32_t q = instances[i].ring_size; q < fc.z.vertex_count; ++q)
            c.color[instances[i].cmap[q]] = full[q];
        active[i] = 0;
        return true;
    };

    for (size_t i = 0; i < instances.size(); ++i) try_extend(i);

    // Epochs of improving rounds. A ring stays in the epoch only while every
    // executed change improved it; rings knocked sideways rejoin when the
    // epoch restarts. Within an epoch the conditional-expectation choice
    // keeps at least one ring improving, so each epoch extends some ring.
    int epoch_guard = 0;
    while (std::count(active.begin(), active.end(), 1) > 0) {
        if (++epoch_guard > 4 * static_cast<int>(instances.size()) + 64)
            throw StuckRingError("improvement epochs did not terminate");
        std::vector<char> in_epoch = active;
        int round_guard = 0;
        while (std::count(in_epoch.begin(), in_epoch.end(), 1) > 0) {
            if (++round_guard > 100000)
                throw StuckRingError("improvement rounds did not terminate");
            struct Desire {
                size_t instance;
                std::map<int32_t, char> swap_of;  // chain id -> desired swap
            };
            std::array<std::vector<Desire>, 4> desires_by_pair;
            std::array<KempeChainIndex, 4> chains;
            for (int pair_id = 1; pair_id <= 3; ++pair_id)
                chains[pair_id] = kempe_chains(adj, c, pair_id);
            for (size_t i = 0; i < instances.size(); ++i) {
                if (!in_epoch[i]) continue;
                int cur = level_of(i);
                bool found = false;
                for (int pair_id = 1; pair_id <= 3 && !found; ++pair_id) {
                    const KempeChainIndex& idx = chains[pair_id];
                    std::vector<int32_t> ring_chain_ids;
                    for (int p = 0; p < instances[i].ring_size; ++p) {
                        int32_t ch = idx.chain[instances[i].ring_vertex(p)];
                        if (std::find(ring_chain_ids.begin(), ring_chain_ids.end(), ch) ==
                            ring_chain_ids.end())
                            ring_chain_ids.push_back(ch);
                    }
                    PackedColoring base = ring_coloring(i);
                    size_t m = ring_chain_ids.size();
                    for (uint32_t mask = 1; mask < (uint32_t{1} << m) && !found; ++mask) {
                        PackedColoring psi = base;
                        for (size_t b = 0; b < m; ++b) {
                            if (!(mask & (uint32_t{1} << b))) continue;
                            for (int p = 0; p < instances[i].ring_size; ++p)
                                if (idx.chain[instances[i].ring_vertex(p)] == ring_chain_ids[b])
                                    psi ^= PackedColoring(pair_id) << (2 * p);
                        }
                        auto it = table_of(i).find(psi);
                        if (it != table_of(i).end() && it->second < cur) {
                            Desire d;
                            d.instance = i;
                            for (size_t b = 0; b < m; ++b)
                                d.swap_of[ring_chain_ids[b]] = (mask >> b) & 1;
                            desires_by_pair[pair_id].push_back(std::move(d));
                            found = true;
                        }
                    }
                }
                if (!found) {
                    std::ostringstream os;
                    os << "no improving Kempe change for an active ring: member "
                       << ctx.corpus[instances[i].member].name
                       << (instances[i].mirrored ? " (mirrored)" : "") << ", ring size "
                       << instances[i].ring_size << ", level " << cur;
                    throw StuckRingError(os.str());
                }
            }
            int best_pair = 1;
            for (int pair_id = 2; pair_id <= 3; ++pair_id)
                if (desires_by_pair[pair_id].size() > desires_by_pair[best_pair].size())
                    best_pair = pair_id;
            auto& live = desires_by_pair[best_pair];
            const KempeChainIndex& idx = chains[best_pair];

            // Conditional expectations over swap decisions.
            std::vector<char> swap_chain(idx.count, 0);
            std::vector<char> alive_ring(live.size(), 1);
            std::vector<int> undecided(live.size(), 0);
            double expectation = 0;
            for (size_t d = 0; d < live.size(); ++d) {
                undecided[d] = static_cast<int>(live[d].swap_of.size());
                expectation += std::ldexp(1.0, -undecided[d]);
            }
            const double initial_expectation = expectation;
            for (int32_t ch = 0; ch < idx.count; ++ch) {
                double gain_swap = 0, gain_keep = 0;
                for (size_t d = 0; d < live.size(); ++d) {
                    if (!alive_ring[d]) continue;
                    auto it = live[d].swap_of.find(ch);
                    if (it == live[d].swap_of.end()) continue;
                    double w = std::ldexp(1.0, -undecided[d]);
                    if (it->second)
                        gain_swap += w;
                    else
                        gain_keep += w;
                }
                bool do_swap = gain_swap > gain_keep;  // exact ties keep colors
                swap_chain[ch] = do_swap;
                for (size_t d = 0; d < live.size(); ++d) {
                    if (!alive_ring[d]) continue;
                    auto it = live[d].swap_of.find(ch);
                    if (it == live[d].swap_of.end()) continue;
                    if (it->second != do_swap)
                        alive_ring[d] = 0;
                    else
                        --undecided[d];
                }
            }
            std::vector<int> before_level(instances.size(), -1);
            for (size_t i = 0; i < instances.size(); ++i)
                if (in_epoch[i]) before_level[i] = level_of(i);
            kempe_change(c, idx, swap_chain, best_pair);

            int improved = 0;
            std::vector<char> survived(instances.size(), 0);
            for (size_t d = 0; d < live.size(); ++d) {
                if (!alive_ring[d]) continue;
                size_t i = live[d].instance;
                int now = level_of(i);
                if (now >= before_level[i])
                    throw StuckRingError("marked-improved ring did not improve");
                survived[i] = 1;
                ++improved;
            }
            if (improved + 1e-9 < initial_expectation)
                throw StuckRingError("conditional expectation guarantee violated");
            for (size_t i = 0; i < instances.size(); ++i)
                if (in_epoch[i] && !survived[i]) in_epoch[i] = 0;
            for (size_t i = 0; i < instances.size(); ++i)
                if (active[i] && try_extend(i)) in_epoch[i] = 0;
        }
    }
    if (!verify_coloring(g, c)) throw StuckRingError("batch reduction produced a bad coloring");
    return c;
}

// ---------------------------------------------------------------------------
// The 4-ring and 5-ring boundary procedures.

namespace {

// Ring partition signature: smallest-position representative per class.
std::vector<int> ring_partition(const std::vector<VertexId>& ring, const Coloring& c) {
    std::vector<int> sig(ring.size());
    std::map<int, int> first;
    for (size_t i = 0; i < ring.size(); ++i) {
        int col = c.color[ring[i]];
        if (!first.count(col)) first[col] = static_cast<int>(i);
        sig[i] = first[col];
    }
    return sig;
}

Coloring swapped(const Adjacency& adj, const Coloring& c, VertexId x, int a, int b) {
    Coloring out = c;
    for (VertexId v : chain_through(adj, c, x, a, b)) out.color[v] = out.color[v] == a ? b : a;
    return out;
}

bool proper_on(const Adjacency& adj, const Coloring& c) {
    for (size_t v = 0; v < adj.size(); ++v) {
        if (c.color[v] < 0) continue;
        for (VertexId w : adj[v])
            if (c.color[w] == c.color[v]) return false;
    }
    return true;
}

}  // namespace

RingSurgery x4_reduce(const Adjacency& adj, const std::vector<VertexId>& ring, const Coloring& c) {
    // Reachable colorings by zero or one single Kempe change.
    std::vector<Coloring> pool{c};
    for (VertexId x : ring) {
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                if (c.color[x] != a && c.color[x] != b) continue;
                Coloring s = swapped(adj, c, x, a, b);
                pool.push_back(std::move(s));
            }
    }
    std::map<std::vector<int>, size_t> by_partition;
    for (size_t i = 0; i < pool.size(); ++i) by_partition.emplace(ring_partition(ring, pool[i]), i);

    auto family = [&](RingSurgery::Kind kind, int j) -> std::optional<RingSurgery> {
        // Required partitions for each case.
        std::vector<std::vector<int>> want;
        if (kind == RingSurgery::kAddEdges) {
            // Both colorings where ring[j] and ring[j+2] differ.
            want = {{0, 1, 2, 3}, j == 0 ? std::vector<int>{0, 1, 2, 1}
                                         : std::vector<int>{0, 1, 0, 3}};
        } else {
            // Both colorings where ring[j] and ring[j+2] agree.
            want = {{0, 1, 0, 1}, j == 0 ? std::vector<int>{0, 1, 0, 3}
                                         : std::vector<int>{0, 1, 2, 1}};
        }
        RingSurgery out;
        out.kind = kind;
        out.j = j;
        for (const auto& sig : want) {
            auto it = by_partition.find(sig);
            if (it == by_partition.end()) return std::nullopt;
            out.family.push_back(pool[it->second]);
        }
        return out;
    };
    for (int j = 0; j < 2; ++j)
        if (auto f = family(RingSurgery::kAddEdges, j)) return *f;
    for (int j = 0; j < 2; ++j)
        if (auto f = family(RingSurgery::kIdentify, j)) return *f;
    throw StuckRingError("no 4-ring case family reachable with one Kempe change");
}

RingSurgery x5_reduce(const Adjacency& adj, const std::vector<VertexId>& ring, const Coloring& c0) {
    // Precisely three colors appear on the ring. Work with a rotated view so
    // the single vertex of its color sits first.
    auto unique_pos = [&](const Coloring& c) {
        std::map<int, int> count;
        for (VertexId v : ring) ++count[c.color[v]];
        for (size_t i = 0; i < 5; ++i)
            if (count[c.color[ring[i]]] == 1) return static_cast<int>(i);
        return -1;
    };
    std::vector<Coloring> collected{c0};
    Coloring cur = c0;
    for (int step = 0; step < 4; ++step) {
        int u = unique_pos(cur);
        if (u < 0) throw StuckRingError("5-ring coloring does not use exactly three colors");
        VertexId q0 = ring[u];
        VertexId q3 = ring[(u + 3) % 5];
        int a = cur.color[q0], b = cur.color[q3];
        auto chain = chain_through(adj, cur, q3, a, b);
        if (std::find(chain.begin(), chain.end(), q0) != chain.end()) break;  // rotation fails
        cur = swapped(adj, cur, q3, a, b);
        collected.push_back(cur);
    }
    if (collected.size() == 5) {
        RingSurgery out;
        out.kind = RingSurgery::kStar;
        out.j = 0;
        out.family = collected;
        return out;
    }

    // Failure analysis at the current coloring: relabel positions v1..v5 with
    // v1 the unique vertex; colors a=c(v1), b=c(v2), d=c(v3) so the pattern
    // reads a,b,d,b,d.
    int u = unique_pos(cur);
    std::array<VertexId, 6> v;  // 1-based
    for (int i = 1; i <= 5; ++i) v[i] = ring[(u + i - 1) % 5];
    int a = cur.color[v[1]], b = cur.color[v[2]], d = cur.color[v[3]];
    std::vector<Coloring> family{cur};

    // The a/b chain holds v1, v2, v4; hence no d/x-chain joins v3 and v5
    // where x is the fourth color.
    int x = 0 ^ 1 ^ 2 ^ 3 ^ a ^ b ^ d;
    {
        auto ch = chain_through(adj, cur, v[3], d, x);
        if (std::find(ch.begin(), ch.end(), v[5]) != ch.end())
            throw StuckRingError("5-ring separation claim failed");
        family.push_back(swapped(adj, cur, v[3], d, x));  // a,b,x,b,d
    }
    auto bx_chain = chain_through(adj, cur, v[2], b, x);
    bool joins_v4 = std::find(bx_chain.begin(), bx_chain.end(), v[4]) != bx_chain.end();
    RingSurgery out;
    if (joins_v4) {
        // Swap the a/d chain at v1: recolors v1 and v5, not v3.
        auto ch = chain_through(adj, cur, v[1], a, d);
        if (std::find(ch.begin(), ch.end(), v[3]) != ch.end())
            throw StuckRingError("5-ring separation claim failed");
        family.push_back(swapped(adj, cur, v[1], a, d));  // d,b,d,b,a
        out.kind = RingSurgery::kIdentify;
        out.j = (u + 1) % 5;  // v2 and v4 share a color throughout
    } else {
        Coloring c2 = swapped(adj, cur, v[2], b, x);  // a,x,d,b,d
        family.push_back(c2);
        auto ch5 = chain_through(adj, c2, v[5], d, x);
        bool hits = std::find(ch5.begin(), ch5.end(), v[2]) != ch5.end() ||
                    std::find(ch5.begin(), ch5.end(), v[3]) != ch5.end();
        if (!hits) {
            family.push_back(swapped(adj, c2, v[5], d, x));  // a,x,d,b,x
            out.kind = RingSurgery::kAddEdges;
            out.j = u;  // v1 keeps its color alone in all four
        } else {
            auto ch4 = chain_through(adj, c2, v[4], a, b);
            if (std::find(ch4.begin(), ch4.end(), v[1]) != ch4.end())
                throw StuckRingError("5-ring separation claim failed");
            family.push_back(swapped(adj, c2, v[4], a, b));  // a,x,d,a,d
            out.kind = RingSurgery::kIdentify;
            out.j = (u + 2) % 5;  // v3 and v5 share a color throughout
        }
    }
    for (const Coloring& f : family)
        if (!proper_on(adj, f)) throw StuckRingError("5-ring procedure produced a bad coloring");
    out.family = family;
    return out;
}

// ---------------------------------------------------------------------------
// Obstructing-cycle recursion.

namespace {

// Interior vertex set of a cycle: the side not containing the anchor face.
std::vector<VertexId> cycle_interior(const EmbeddedTriangulation& g,
                                     const std::vector<VertexId>& cycle) {
    auto [in_a, in_b] = cycle_side_counts(g, cycle);
    // Sides were seeded from arcs around cycle[0]; regenerate membership.
    const int32_t n = g.n();
    std::vector<char> on_cycle(n, 0);
    for (VertexId v : cycle) on_cycle[v] = 1;
    std::vector<int> side(n, -1);
    std::vector<VertexId> seeds_a = arc_between(g, cycle[0], cycle[1], cycle.back());
    std::vector<VertexId> seeds_b = arc_between(g, cycle[0], cycle.back(), cycle[1]);
    std::queue<VertexId> q;
    for (VertexId v : seeds_a)
        if (!on_cycle[v] && side[v] < 0) {
            side[v] = 0;
            q.push(v);
        }
    for (VertexId v : seeds_b)
        if (!on_cycle[v] && side[v] < 0) {
            side[v] = 1;
            q.push(v);
        }
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (int32_t w : g.rot[v])
            if (!on_cycle[w] && side[w] < 0) {
                side[w] = side[v];
                q.push(w);
            }
    }
    int pick = in_a <= in_b ? 0 : 1;  // smaller side is the interior
    std::vector<VertexId> out;
    for (VertexId v = 0; v < n; ++v)
        if (side[v] == pick) out.push_back(v);
    return out;
}

}  // namespace

Coloring recurse_obstructions(const EmbeddedTriangulation& g,
                              const std::vector<ObstructingCycle>& cycles,
                              const ColorContext& ctx, int depth) {
    if (cycles.empty()) throw InvalidInputError("no obstructing cycles to recurse on");
    // Process one innermost cycle: color its interior recursively, derive the
    // boundary case, replace the interior by the case surgery, and solve the
    // rest; then splice the interior coloring back.
    std::vector<VertexId> best_cycle;
    std::vector<VertexId> best_interior;
    for (const ObstructingCycle& oc : cycles) {
        std::vector<VertexId> interior = cycle_interior(g, oc.cycle);
        if (best_cycle.empty() || interior.size() < best_interior.size()) {
            best_cycle = oc.cycle;
            best_interior = interior;
        }
    }
    const std::vector<VertexId>& cyc = best_cycle;
    const int32_t r = static_cast<int32_t>(cyc.size());
    std::vector<char> removed(g.n(), 0);
    for (VertexId v : best_interior) removed[v] = 1;
    // Canonical hole orientation.
    std::vector<VertexId> walk =
        hole_walk(g, [&](VertexId w) { return removed[w] != 0; }, cyc[0]);
    if (static_cast<int32_t>(walk.size()) != r) throw InvalidInputError("cycle walk mismatch");

    // Build the disk H on cyc + interior, as a sphere triangulation H* with
    // an apex closing the outside when the ring is longer than 3.
    std::vector<VertexId> h_verts = best_interior;
    for (VertexId v : walk) h_verts.push_back(v);
    std::map<VertexId, int32_t> to_h;
    for (size_t i = 0; i < h_verts.size(); ++i) to_h[h_verts[i]] = static_cast<int32_t>(i);
    std::vector<char> in_h(g.n(), 0);
    for (VertexId v : h_verts) in_h[v] = 1;
    EmbeddedTriangulation hstar;
    hstar.rot.resize(h_verts.size() + (r > 3 ? 1 : 0));
    int32_t apex = r > 3 ? static_cast<int32_t>(h_verts.size()) : -1;
    std::vector<char> on_ring(g.n(), 0);
    for (VertexId v : walk) on_ring[v] = 1;
    for (VertexId v : h_verts) {
        auto& out = hstar.rot[to_h[v]];
        const auto& rv = g.rot[v];
        if (!on_ring[v]) {
            for (int32_t w : rv) out.push_back(to_h[w]);
            continue;
        }
        // Ring vertex: H-neighbors form one arc; the outside gap closes with
        // the apex (or directly for a triangle).
        size_t sz = rv.size();
        size_t start = 0;
        while (start < sz && in_h[rv[start]]) ++start;
        if (start == sz) throw InvalidInputError("ring vertex buried in the disk");
        bool emitted_apex = false;
        for (size_t s = 0; s < sz; ++s) {
            VertexId w = rv[(start + s) % sz];
            if (in_h[w]) {
                out.push_back(to_h[w]);
            } else if (apex >= 0 && !emitted_apex) {
                out.push_back(apex);
                emitted_apex = true;
            }
        }
        if (apex >= 0 && !emitted_apex) out.push_back(apex);
    }
    if (apex >= 0) {
        for (auto it = walk.rbegin(); it != walk.rend(); ++it) hstar.rot[apex].push_back(to_h[*it]);
        if (!validate_triangulation(hstar).empty()) {
            hstar.rot[apex].assign(walk.size(), 0);
            for (size_t i = 0; i < walk.size(); ++i) hstar.rot[apex][i] = to_h[walk[i]];
        }
    }
    {
        auto issues = validate_triangulation(hstar);
        if (!issues.empty()) throw InvalidInputError("disk closure failed: " + issues.front());
    }
    Coloring h_coloring = four_color(hstar, ctx, depth + 1);

    // Boundary case and surgery.
    std::vector<VertexId> h_ring(r);
    for (int i = 0; i < r; ++i) h_ring[i] = to_h[walk[i]];
    Adjacency h_adj(hstar.rot.size());
    for (size_t v = 0; v < hstar.rot.size(); ++v)
        h_adj[v].assign(hstar.rot[v].begin(), hstar.rot[v].end());
    if (apex >= 0) {
        // The disk procedures work on H without the apex.
        for (auto& nb : h_adj)
            nb.erase(std::remove(nb.begin(), nb.end(), apex), nb.end());
        h_adj[apex].clear();
        h_coloring.color[apex] = -1;
    }
    RingSurgery surgery;
    if (r == 3) {
        surgery.kind = RingSurgery::kAddEdges;  // nothing added; face closes
        surgery.j = -1;
        surgery.family = {h_coloring};
    } else if (r == 4) {
        surgery = x4_reduce(h_adj, h_ring, h_coloring);
    } else {
        surgery = x5_reduce(h_adj, h_ring, h_coloring);
    }

    // Apply the surgery to G.
    Rotations rot = g.rot;
    std::vector<char> alive(g.n(), 1);
    for (VertexId v : best_interior) alive[v] = 0;
    auto gap_insert = [&](VertexId v, const std::vector<VertexId>& items) {
        auto& rv = rot[v];
        std::vector<VertexId> next;
        size_t sz = rv.size();
        size_t start = 0;
        while (start < sz && removed[rv[start]]) ++start;
        bool emitted = false;
        for (size_t s = 0; s < sz; ++s) {
            VertexId w = rv[(start + s) % sz];
            if (!removed[w]) {
                next.push_back(w);
            } else if (!emitted) {
                for (VertexId x : items) next.push_back(x);
                emitted = true;
            }
        }
        if (!emitted)
            for (VertexId x : items) next.push_back(x);
        rv = next;
    };
    VertexId identified_from = -1, identified_into = -1;
    if (r == 3) {
        for (VertexId v : walk) gap_insert(v, {});
    } else if (surgery.kind == RingSurgery::kAddEdges) {
        int j = surgery.j;
        auto at = [&](int i) { return walk[((i % r) + r) % r]; };
        if (r == 4) {
            for (int i = 0; i < r; ++i) {
                if (i == j)
                    gap_insert(at(i), {at(j + 2)});
                else if (i == (j + 2) % r)
                    gap_insert(at(i), {at(j)});
                else
                    gap_insert(at(i), {});
            }
        } else {
            for (int i = 0; i < r; ++i) {
                if (i == j)
                    gap_insert(at(i), {at(j + 3), at(j + 2)});
                else if (i == (j + 2) % r || i == (j + 3) % r)
                    gap_insert(at(i), {at(j)});
                else
                    gap_insert(at(i), {});
            }
        }
    } else if (surgery.kind == RingSurgery::kIdentify) {
        int j = surgery.j;
        auto at = [&](int i) { return walk[((i % r) + r) % r]; };
        VertexId keep = at(j), drop = at(j + 2);
        identified_from = drop;
        identified_into = keep;
        // Merge drop's rotation arc into keep's gap.
        std::vector<VertexId> arc;
        {
            const auto& rv = rot[drop];
            size_t sz = rv.size();
            size_t start = 0;
            while (start < sz && removed[rv[start]]) ++start;
            for (size_t s = 0; s < sz; ++s) {
                VertexId w = rv[(start + s) % sz];
                if (!removed[w]) arc.push_back(w);
            }
        }
        gap_insert(keep, arc);
        for (int i = 0; i < r; ++i)
            if (i != j && i != (j + 2) % r) gap_insert(at(i), {});
        alive[drop] = 0;
        for (auto& rv : rot) {
            for (auto& w : rv)
                if (w == drop) w = keep;
        }
        // Collapse duplicate consecutive entries created by the merge.
        for (size_t v = 0; v < rot.size(); ++v) {
            if (!alive[v]) continue;
            auto& rv = rot[v];
            std::vector<VertexId> next;
            for (size_t i = 0; i < rv.size(); ++i) {
                if (!next.empty() && next.back() == rv[i]) continue;
                next.push_back(rv[i]);
            }
            while (next.size() > 1 && next.front() == next.back()) next.pop_back();
            rv = next;
        }
    } else {  // star
        int32_t hub = static_cast<int32_t>(rot.size());
        rot.push_back({});
        alive.push_back(1);
        for (auto it = walk.rbegin(); it != walk.rend(); ++it) rot[hub].push_back(*it);
        for (VertexId v : walk) gap_insert(v, {hub});
    }
    // Identification can leave parallel edges when the merged pair had common
    // neighbors beyond the ring. Each parallel pair bounds a closed curve;
    // split the sphere along it, color both halves, and merge the halves
    // under the color permutation fixing the two shared vertices.
    std::function<std::vector<int>(const Rotations&, const std::vector<char>&)> color_multi =
        [&](const Rotations& mrot, const std::vector<char>& malive) -> std::vector<int> {
        VertexId dup_v = -1;
        int32_t dup_w = -1;
        for (size_t v = 0; v < mrot.size() && dup_v < 0; ++v) {
            if (!malive[v]) continue;
            std::map<int32_t, int> cnt;
            for (int32_t w : mrot[v])
                if (++cnt[w] > 1) {
                    dup_v = static_cast<VertexId>(v);
                    dup_w = w;
                    break;
                }
        }
        if (dup_v < 0) {
            Rebuilt rest = compact(mrot, malive);
            auto issues = validate_triangulation(rest.g);
            if (!issues.empty())
                throw InvalidInputError("surgery produced a bad triangulation: " + issues.front());
            Coloring sub = four_color(rest.g, ctx, depth + 1);
            std::vector<int> out(mrot.size(), -1);
            for (size_t v = 0; v < mrot.size(); ++v)
                if (rest.old2new[v] >= 0) out[v] = sub.color[rest.old2new[v]];
            return out;
        }
        // Slice the rotations of dup_v and dup_w at the two parallel edges.
        const auto& rv = mrot[dup_v];
        size_t p1 = std::find(rv.begin(), rv.end(), dup_w) - rv.begin();
        size_t p2 = p1 + 1;
        while (rv[p2 % rv.size()] != dup_w) ++p2;
        p2 %= rv.size();
        std::vector<int32_t> arc_x, arc_y;
        for (size_t s = (p1 + 1) % rv.size(); s != p2; s = (s + 1) % rv.size())
            arc_x.push_back(rv[s]);
        for (size_t s = (p2 + 1) % rv.size(); s != p1; s = (s + 1) % rv.size())
            arc_y.push_back(rv[s]);
        // Flood the two sides, avoiding the shared vertices.
        std::vector<int> side(mrot.size(), -1);
        side[dup_v] = side[dup_w] = 2;
        std::queue<VertexId> q;
        for (int32_t s : arc_x)
            if (side[s] < 0) {
                side[s] = 0;
                q.push(s);
            }
        for (int32_t s : arc_y)
            if (side[s] < 0) {
                side[s] = 1;
                q.push(s);
            }
        while (!q.empty()) {
            VertexId u = q.front();
            q.pop();
            for (int32_t w2 : mrot[u])
                if (side[w2] < 0) {
                    side[w2] = side[u];
                    q.push(w2);
                }
        }
        auto build_half = [&](int keep_side, const std::vector<int32_t>& v_arc) {
            Rotations half(mrot.size());
            std::vector<char> halive(mrot.size(), 0);
            for (size_t u = 0; u < mrot.size(); ++u)
                if (malive[u] && side[u] == keep_side) {
                    halive[u] = 1;
                    half[u] = mrot[u];
                }
            halive[dup_v] = halive[dup_w] = 1;
            half[dup_v].assign(1, dup_w);
            half[dup_v].insert(half[dup_v].end(), v_arc.begin(), v_arc.end());
            // dup_w's slice on this side: entries between its two dup_v
            // occurrences lying on keep_side.
            const auto& rw = mrot[dup_w];
            size_t w1 = std::find(rw.begin(), rw.end(), dup_v) - rw.begin();
            size_t w2 = w1 + 1;
            while (rw[w2 % rw.size()] != dup_v) ++w2;
            w2 %= rw.size();
            std::vector<int32_t> a, b;
            for (size_t s = (w1 + 1) % rw.size(); s != w2; s = (s + 1) % rw.size())
                a.push_back(rw[s]);
            for (size_t s = (w2 + 1) % rw.size(); s != w1; s = (s + 1) % rw.size())
                b.push_back(rw[s]);
            const std::vector<int32_t>& mine =
                (!a.empty() && side[a.front()] == keep_side) ? a : b;
            half[dup_w].assign(1, dup_v);
            half[dup_w].insert(half[dup_w].end(), mine.begin(), mine.end());
            return std::make_pair(half, halive);
        };
        auto [h1, a1] = build_half(0, arc_x);
        auto [h2, a2] = build_half(1, arc_y);
        std::vector<int> c1 = color_multi(h1, a1);
        std::vector<int> c2 = color_multi(h2, a2);
        // Permute the second half so the shared vertices agree.
        std::array<int, 4> perm{-1, -1, -1, -1};
        perm[c2[dup_v]] = c1[dup_v];
        perm[c2[dup_w]] = c1[dup_w];
        std::vector<int> free_from, free_to;
        for (int i = 0; i < 4; ++i) {
            if (perm[i] < 0) free_from.push_back(i);
            bool taken = false;
            for (int j = 0; j < 4; ++j)
                if (perm[j] == i) taken = true;
            if (!taken) free_to.push_back(i);
        }
        for (size_t i = 0; i < free_from.size(); ++i) perm[free_from[i]] = free_to[i];
        std::vector<int> out = c1;
        for (size_t v = 0; v < mrot.size(); ++v)
            if (a2[v] && c2[v] >= 0 && !(v == static_cast<size_t>(dup_v)) &&
                !(v == static_cast<size_t>(dup_w)))
                out[v] = perm[c2[v]];
        return out;
    };

    std::vector<int> rest_colors = color_multi(rot, alive);

    // Assemble: colors for surviving vertices, identified vertex inherits.
    Coloring c;
    c.color.assign(g.n(), -1);
    for (VertexId v = 0; v < g.n(); ++v)
        if (v < static_cast<VertexId>(rest_colors.size())) c.color[v] = rest_colors[v];
    if (identified_from >= 0) c.color[identified_from] = c.color[identified_into];

    // Pick the family coloring matching the ring under a color permutation.
    std::array<int, 4> perm;
    const Coloring* chosen = nullptr;
    std::array<int, 4> p{0, 1, 2, 3};
    std::sort(p.begin(), p.end());
    for (const Coloring& fam : surgery.family) {
        std::array<int, 4> q{0, 1, 2, 3};
        do {
            bool ok = true;
            for (int i = 0; i < r && ok; ++i)
                if (q[fam.color[h_ring[i]]] != c.color[walk[i]]) ok = false;
            if (ok) {
                chosen = &fam;
                perm = q;
                break;
            }
        } while (std::next_permutation(q.begin(), q.end()));
        if (chosen) break;
    }
    if (!chosen) throw StuckRingError("ring coloring outside the produced family");
    for (VertexId v : best_interior) c.color[v] = perm[chosen->color[to_h[v]]];
    if (!verify_coloring(g, c))
        throw StuckRingError("obstructing-cycle assembly produced a bad coloring");
    return c;
}

// ---------------------------------------------------------------------------
// Top-level.

namespace {

std::optional<ObstructingCycle> global_obstruction(const EmbeddedTriangulation& g) {
    const int32_t n = g.n();
    // Separating triangles.
    for (VertexId a = 0; a < n; ++a)
        for (int32_t b : g.rot[a]) {
            if (b < a) continue;
            for (int32_t c : g.rot[a]) {
                if (c < b || !g.adjacent(b, c)) continue;
                if (is_face(g, a, b, c)) continue;
                return ObstructingCycle{{a, b, c}, 0};
            }
        }
    // Chordless 4-cycles.
    for (VertexId a = 0; a < n; ++a)
        for (int32_t x : g.rot[a])
            for (int32_t b : g.rot[x]) {
                if (b == a || g.adjacent(a, b)) continue;
                for (int32_t y : g.rot[b]) {
                    if (y == x || g.adjacent(x, y) || !g.adjacent(y, a)) continue;
                    return ObstructingCycle{
                        {a, static_cast<VertexId>(x), static_cast<VertexId>(b),
                         static_cast<VertexId>(y)},
                        0};
                }
            }
    // Chordless 5-cycles with two vertices on each side.
    for (VertexId a = 0; a < n; ++a)
        for (int32_t b : g.rot[a])
            for (int32_t c : g.rot[b]) {
                if (c == a) continue;
                for (int32_t d : g.rot[c]) {
                    if (d == b || d == a) continue;
                    for (int32_t e : g.rot[d]) {
                        if (e == c || e == b || e == a || !g.adjacent(e, a)) continue;
                        std::vector<VertexId> cyc{a, static_cast<VertexId>(b),
                                                  static_cast<VertexId>(c),
                                                  static_cast<VertexId>(d),
                                                  static_cast<VertexId>(e)};
                        if (!chordless(g, cyc)) continue;
                        auto [in_a, in_b] = cycle_side_counts(g, cyc);
                        if (in_a >= 2 && in_b >= 2) return ObstructingCycle{cyc, 0};
                    }
                }
            }
    return std::nullopt;
}

}  // namespace

Coloring four_color(const EmbeddedTriangulation& g, const ColorContext& ctx, int depth) {
    if (depth > 300) throw InvalidInputError("recursion depth limit reached");
    Coloring c;
    c.color.assign(g.n(), -1);
    if (g.n() <= 4) {
        for (VertexId v = 0; v < g.n(); ++v) c.color[v] = v;
        return c;
    }
    ReductionSets sets = find_reduction_sets(g, ctx);
    if (!sets.reducibles.empty())
        return batch_reduce_and_color(g, sets.reducibles, ctx, depth);
    if (!sets.obstructions.empty()) return recurse_obstructions(g, sets.obstructions, ctx, depth);

    // Single-site quadratic fallback.
    if (auto cycle = global_obstruction(g)) return recurse_obstructions(g, {*cycle}, ctx, depth);
    PseudoConfiguration g_conf = to_pseudo_configuration(g);
    if (auto inst = scan_instance(g, g_conf, ctx, 0, {}))
        return batch_reduce_and_color(g, {*inst}, ctx, depth);
    if (std::getenv("FOURCOLOR_DUMP_STUCK")) {
        std::ofstream dump("stuck_graph.rot");
        dump << write_triangulation(g);
    }
    throw InvalidInputError(
        "no reducible configuration or obstructing cycle found (order " +
        std::to_string(g.n()) +
        "); the configuration corpus in use does not cover this instance - a larger corpus "
        "directory can be passed to extend coverage");
}

}  // namespace fourcolor
