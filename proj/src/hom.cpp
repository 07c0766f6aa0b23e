#include "fourcolor/hom.hpp"

#include <deque>
#include <numeric>
#include <queue>
#include <sstream>

namespace fourcolor {

namespace {

// Forest of rooted trees. unite() makes root(x) a child of root(y), so
// root(y) stays the representative; the pointer inheritance below depends
// on that direction.
class UnionFind {
  public:
    explicit UnionFind(int32_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int32_t root(int32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool same(int32_t x, int32_t y) { return root(x) == root(y); }
    void unite(int32_t x, int32_t y) { parent_[root(x)] = root(y); }

  private:
    std::vector<int32_t> parent_;
};

}  // namespace

std::vector<std::string> validate_ranges(const PseudoConfiguration& c) {
    std::vector<std::string> out;
    if (static_cast<int32_t>(c.range.size()) != c.z.vertex_count) {
        out.push_back("range table size mismatch");
        return out;
    }
    for (DartId e = 0; e < c.z.dart_count(); ++e)
        if (c.z.head[e] == c.z.tail(e)) out.push_back("loop at dart " + std::to_string(e));
    for (VertexId v = 0; v < c.z.vertex_count; ++v) {
        const DegreeRange r = c.range[v];
        if (r.lo > r.hi || r.lo < 1) {
            out.push_back("bad range at vertex " + std::to_string(v));
            continue;
        }
        int d = degree(c.z, v);
        if (is_boundary_vertex(c.z, v)) {
            if (r.lo <= d)
                out.push_back("boundary vertex " + std::to_string(v) + " has lo <= degree");
        } else {
            if (!r.single() || r.lo != d)
                out.push_back("inner vertex " + std::to_string(v) + " not fixed at its degree");
        }
    }
    return out;
}

Homomorphism identity_homomorphism(int32_t vertices, int32_t darts) {
    Homomorphism phi;
    phi.vertex_map.resize(vertices);
    phi.dart_map.resize(darts);
    std::iota(phi.vertex_map.begin(), phi.vertex_map.end(), 0);
    std::iota(phi.dart_map.begin(), phi.dart_map.end(), 0);
    return phi;
}

Homomorphism compose(const Homomorphism& second, const Homomorphism& first) {
    Homomorphism out;
    out.vertex_map.reserve(first.vertex_map.size());
    out.dart_map.reserve(first.dart_map.size());
    for (VertexId v : first.vertex_map) {
        if (v < 0 || v >= static_cast<int32_t>(second.vertex_map.size()))
            throw DomainMismatchError("vertex map domain mismatch");
        out.vertex_map.push_back(second.vertex_map[v]);
    }
    for (DartId d : first.dart_map) {
        if (d < 0 || d >= static_cast<int32_t>(second.dart_map.size()))
            throw DomainMismatchError("dart map domain mismatch");
        out.dart_map.push_back(second.dart_map[d]);
    }
    return out;
}

bool check_homomorphism(const PseudoTriangulation& src, const PseudoTriangulation& dst,
                        const Homomorphism& phi) {
    if (static_cast<int32_t>(phi.vertex_map.size()) != src.vertex_count ||
        static_cast<int32_t>(phi.dart_map.size()) != src.dart_count())
        return false;
    for (DartId e = 0; e < src.dart_count(); ++e) {
        DartId fe = phi.dart_map[e];
        if (fe < 0 || fe >= dst.dart_count()) return false;
        if (dst.head[fe] != phi.vertex_map[src.head[e]]) return false;
        if (dst.rev[fe] != phi.dart_map[src.rev[e]]) return false;
        if (src.succ[e] != kNil && dst.succ[fe] != phi.dart_map[src.succ[e]]) return false;
        if (src.pred[e] != kNil && dst.pred[fe] != phi.dart_map[src.pred[e]]) return false;
    }
    return true;
}

bool range_predicate(RangePredicate g, DegreeRange src, DegreeRange dst) {
    switch (g) {
        case RangePredicate::kInclude:
            return src.lo <= dst.lo && dst.hi <= src.hi;
        case RangePredicate::kIntersect:
            return intersect(src, dst).has_value();
        case RangePredicate::kDominant:
            return intersect(src, dst).has_value() &&
                   (src.hi == kInfiniteDegree || dst.hi < 9);
    }
    return false;
}

std::optional<Homomorphism> homomorphism(const PseudoConfiguration& src, DartId e,
                                         const PseudoConfiguration& dst, DartId e_star,
                                         RangePredicate g) {
    const PseudoTriangulation& zs = src.z;
    const PseudoTriangulation& zd = dst.z;
    std::vector<DartId> phi_d(zs.dart_count(), kNil);
    std::vector<VertexId> phi_v(zs.vertex_count, kNil);
    std::queue<std::pair<DartId, DartId>> q;
    q.push({e, e_star});
    while (!q.empty()) {
        auto [f, fs] = q.front();
        q.pop();
        if (phi_d[f] != kNil) {
            if (phi_d[f] != fs) return std::nullopt;
            continue;
        }
        phi_d[f] = fs;
        VertexId h = zs.head[f];
        VertexId hs = zd.head[fs];
        if (phi_v[h] != kNil && phi_v[h] != hs) return std::nullopt;
        phi_v[h] = hs;
        if (!range_predicate(g, src.range[h], dst.range[hs])) return std::nullopt;
        q.push({zs.rev[f], zd.rev[fs]});
        if (zs.succ[f] != kNil) {
            if (zd.succ[fs] == kNil) return std::nullopt;
            q.push({zs.succ[f], zd.succ[fs]});
        }
        if (zs.pred[f] != kNil) {
            if (zd.pred[fs] == kNil) return std::nullopt;
            q.push({zs.pred[f], zd.pred[fs]});
        }
    }
    return Homomorphism{std::move(phi_v), std::move(phi_d)};
}

TriangulationImage free_homomorphism_triangulation(const PseudoTriangulation& z,
                                                   const IdentificationRequest& requests) {
    const int32_t nd = z.dart_count();
    UnionFind uf_v(z.vertex_count);
    UnionFind uf_d(nd);
    std::vector<DartId> succ = z.succ;
    std::vector<DartId> pred = z.pred;
    std::queue<std::pair<DartId, DartId>> q;
    for (const auto& r : requests) q.push(r);
    while (!q.empty()) {
        auto [e, f] = q.front();
        q.pop();
        if (uf_d.same(e, f)) continue;
        if (!uf_v.same(z.head[e], z.head[f])) uf_v.unite(z.head[e], z.head[f]);
        DartId es = uf_d.root(e);
        DartId fs = uf_d.root(f);
        uf_d.unite(es, fs);  // fs stays the root representative
        q.push({z.rev[es], z.rev[fs]});
        DartId se = succ[es], sf = succ[fs];
        if (se != kNil && sf != kNil) q.push({se, sf});
        DartId pe = pred[es], pf = pred[fs];
        if (pe != kNil && pf != kNil) q.push({pe, pf});
        if (se != kNil && sf == kNil) succ[fs] = se;
        if (pe != kNil && pf == kNil) pred[fs] = pe;
    }
    // Compact roots into a fresh arena.
    std::vector<VertexId> vmap(z.vertex_count, kNil);
    std::vector<DartId> dmap(nd, kNil);
    TriangulationImage out;
    int32_t nv = 0;
    for (VertexId v = 0; v < z.vertex_count; ++v)
        if (uf_v.root(v) == v) vmap[v] = nv++;
    out.z.vertex_count = nv;
    for (DartId d = 0; d < nd; ++d)
        if (uf_d.root(d) == d) dmap[d] = out.z.add_dart(kNil, kNil, kNil, kNil);
    for (DartId d = 0; d < nd; ++d) {
        if (uf_d.root(d) != d) continue;
        DartId nd_id = dmap[d];
        out.z.head[nd_id] = vmap[uf_v.root(z.head[d])];
        out.z.rev[nd_id] = dmap[uf_d.root(z.rev[d])];
        out.z.succ[nd_id] = succ[d] == kNil ? kNil : dmap[uf_d.root(succ[d])];
        out.z.pred[nd_id] = pred[d] == kNil ? kNil : dmap[uf_d.root(pred[d])];
    }
    out.phi.vertex_map.resize(z.vertex_count);
    out.phi.dart_map.resize(nd);
    for (VertexId v = 0; v < z.vertex_count; ++v)
        out.phi.vertex_map[v] = vmap[uf_v.root(v)];
    for (DartId d = 0; d < nd; ++d) out.phi.dart_map[d] = dmap[uf_d.root(d)];
    return out;
}

std::optional<ConfigurationImage> dart_identification(const PseudoConfiguration& c,
                                                      const IdentificationRequest& requests,
                                                      IdentificationError* error) {
    TriangulationImage img = free_homomorphism_triangulation(c.z, requests);
    for (DartId d = 0; d < img.z.dart_count(); ++d) {
        if (img.z.head[d] == img.z.tail(d)) {
            if (error) *error = IdentificationError::kLoop;
            return std::nullopt;
        }
    }
    std::vector<DegreeRange> ranges(img.z.vertex_count, DegreeRange{1, kInfiniteDegree});
    for (VertexId v = 0; v < c.z.vertex_count; ++v) {
        VertexId vs = img.phi.vertex_map[v];
        auto r = intersect(ranges[vs], c.range[v]);
        if (!r) {
            if (error) *error = IdentificationError::kDegreeMismatch;
            return std::nullopt;
        }
        ranges[vs] = *r;
    }
    return ConfigurationImage{PseudoConfiguration{std::move(img.z), std::move(ranges)},
                              std::move(img.phi)};
}

namespace {

bool inner_subdegree_error(const PseudoConfiguration& c) {
    for (VertexId v = 0; v < c.z.vertex_count; ++v)
        if (!is_boundary_vertex(c.z, v) && degree(c.z, v) < c.range[v].lo) return true;
    return false;
}

VertexId vertex_single_degree_issue(const PseudoConfiguration& c) {
    for (VertexId v = 0; v < c.z.vertex_count; ++v) {
        if (!c.range[v].single()) continue;
        int d = degree(c.z, v);
        if (c.range[v].lo < d) return v;
        if (is_boundary_vertex(c.z, v) && d == c.range[v].lo) return v;
    }
    return kNil;
}

// Makes v an inner vertex by adding the closing edge uw, or fails when the
// first and last neighbors coincide (a boundary error).
std::optional<PseudoConfiguration> add_boundary_darts(const PseudoConfiguration& c, VertexId v) {
    DartId e_first = kNil, e_last = kNil;
    for (DartId e = 0; e < c.z.dart_count(); ++e) {
        if (c.z.head[e] != v) continue;
        if (c.z.pred[e] == kNil) e_first = e;
        if (c.z.succ[e] == kNil) e_last = e;
    }
    if (e_first == kNil || e_last == kNil) return std::nullopt;
    VertexId u = c.z.head[c.z.rev[e_first]];
    VertexId w = c.z.head[c.z.rev[e_last]];
    if (u == w) return std::nullopt;
    PseudoConfiguration out = c;
    DartId rf = out.z.rev[e_first];
    DartId rl = out.z.rev[e_last];
    DartId d_uw = out.z.add_dart(u, kNil, kNil, rf);
    DartId d_wu = out.z.add_dart(w, d_uw, rl, kNil);
    out.z.rev[d_uw] = d_wu;
    out.z.pred[e_first] = e_last;
    out.z.succ[e_last] = e_first;
    out.z.succ[rf] = d_uw;
    out.z.pred[rl] = d_wu;
    return out;
}

std::optional<ConfigurationImage> fix_single_degree_issue(const PseudoConfiguration& c,
                                                          VertexId v, ResolveStats* stats) {
    int d = degree(c.z, v);
    if (c.range[v].lo < d) {
        DartId e = first_dart(c.z, v);
        DartId f = e;
        for (int i = 0; i < c.range[v].lo; ++i) f = c.z.succ[f];
        auto fixed = dart_identification(c, {{e, f}});
        if (!fixed && stats) ++stats->identification;
        return fixed;
    }
    if (is_boundary_vertex(c.z, v) && c.range[v].lo == d) {
        auto fixed = add_boundary_darts(c, v);
        if (!fixed) {
            if (stats) ++stats->boundary;
            return std::nullopt;
        }
        Homomorphism id = identity_homomorphism(c.z.vertex_count, c.z.dart_count());
        return ConfigurationImage{std::move(*fixed), std::move(id)};
    }
    return std::nullopt;
}

std::optional<std::pair<PseudoConfiguration, PseudoConfiguration>> single_out_lower_degree(
    const PseudoConfiguration& c) {
    for (VertexId v = 0; v < c.z.vertex_count; ++v) {
        if (c.range[v].lo < c.range[v].hi && c.range[v].lo <= degree(c.z, v)) {
            PseudoConfiguration low = c;
            low.range[v].hi = low.range[v].lo;
            PseudoConfiguration high = c;
            high.range[v].lo += 1;
            return std::make_pair(std::move(low), std::move(high));
        }
    }
    return std::nullopt;
}

}  // namespace

std::vector<ConfigurationImage> resolve_degree_issues(const PseudoConfiguration& c,
                                                      ResolveStats* stats) {
    std::vector<ConfigurationImage> out;
    std::deque<ConfigurationImage> q;
    q.push_back({c, identity_homomorphism(c.z.vertex_count, c.z.dart_count())});
    while (!q.empty()) {
        ConfigurationImage cur = std::move(q.front());
        q.pop_front();
        if (inner_subdegree_error(cur.conf)) {
            if (stats) ++stats->inner_subdegree;
            continue;
        }
        VertexId v = vertex_single_degree_issue(cur.conf);
        if (v != kNil) {
            auto fixed = fix_single_degree_issue(cur.conf, v, stats);
            if (fixed) {
                // The step homomorphism may lack entries for darts added by
                // boundary fixes of later steps; sizes always line up because
                // each step's domain is the current configuration.
                Homomorphism composed = compose(fixed->phi, cur.phi);
                q.push_back({std::move(fixed->conf), std::move(composed)});
            }
            continue;
        }
        auto split = single_out_lower_degree(cur.conf);
        if (split) {
            q.push_back({std::move(split->first), cur.phi});
            q.push_back({std::move(split->second), std::move(cur.phi)});
            continue;
        }
        out.push_back(std::move(cur));
    }
    return out;
}

std::vector<ConfigurationImage> free_homomorphism_configuration(
    const PseudoConfiguration& c, const IdentificationRequest& requests) {
    auto ident = dart_identification(c, requests);
    if (!ident) return {};
    std::vector<ConfigurationImage> out;
    for (auto& resolved : resolve_degree_issues(ident->conf)) {
        Homomorphism composed = compose(resolved.phi, ident->phi);
        out.push_back({std::move(resolved.conf), std::move(composed)});
    }
    return out;
}

PseudoConfiguration disjoint_union(const PseudoConfiguration& a, const PseudoConfiguration& b) {
    PseudoConfiguration out = a;
    const int32_t voff = a.z.vertex_count;
    const int32_t doff = a.z.dart_count();
    out.z.vertex_count += b.z.vertex_count;
    auto shift_dart = [&](DartId d) { return d == kNil ? kNil : d + doff; };
    for (DartId d = 0; d < b.z.dart_count(); ++d)
        out.z.add_dart(b.z.head[d] + voff, shift_dart(b.z.rev[d]), shift_dart(b.z.succ[d]),
                       shift_dart(b.z.pred[d]));
    out.range.insert(out.range.end(), b.range.begin(), b.range.end());
    return out;
}

std::string canonical_trace(const PseudoConfiguration& c, DartId root) {
    // Reproduce the dart trace, then append ranges by vertex first-visit order.
    const PseudoTriangulation& z = c.z;
    const int32_t nd = z.dart_count();
    if (root < 0 || root >= nd) throw DisconnectedFromRootError("root dart out of range");
    std::vector<int32_t> dnum(nd, kNil), vnum(z.vertex_count, kNil);
    std::vector<DartId> order;
    std::vector<VertexId> vorder;
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
        if (vnum[h] == kNil) {
            vnum[h] = next_v++;
            vorder.push_back(h);
        }
        os << vnum[h] << ' ' << visit(z.rev[d]) << ' ';
        os << (z.succ[d] == kNil ? kNil : visit(z.succ[d])) << ' ';
        os << (z.pred[d] == kNil ? kNil : visit(z.pred[d])) << ';';
    }
    if (static_cast<int32_t>(order.size()) != nd)
        throw DisconnectedFromRootError("pseudo-configuration not connected from root dart");
    os << '|';
    for (VertexId v : vorder) {
        os << c.range[v].lo << ',';
        if (c.range[v].hi == kInfiniteDegree)
            os << "inf;";
        else
            os << c.range[v].hi << ';';
    }
    return os.str();
}

bool isomorphic(const PseudoConfiguration& a, const PseudoConfiguration& b) {
    if (a.z.dart_count() != b.z.dart_count() || a.z.vertex_count != b.z.vertex_count)
        return false;
    if (a.z.dart_count() == 0) return true;
    std::string t = canonical_trace(a, 0);
    for (DartId r = 0; r < b.z.dart_count(); ++r)
        if (canonical_trace(b, r) == t) return true;
    return false;
}

}  // namespace fourcolor
