#include "fourcolor/combine.hpp"

#include <algorithm>
#include <limits>

#ifdef FOURCOLOR_OPENMP
#include <omp.h>
#endif

namespace fourcolor {

std::vector<PseudoConfiguration> delete_degree_from_k_to_9(
    const std::vector<PseudoConfiguration>& set, int32_t k) {
    std::vector<PseudoConfiguration> out;
    for (const PseudoConfiguration& c : set) {
        bool remove = false;
        PseudoConfiguration copy = c;
        for (VertexId v = 0; v < c.z.vertex_count; ++v) {
            if (c.range[v] == DegreeRange{k, k}) {
                remove = true;
                break;
            }
            if (c.range[v].lo == k - 1 && c.range[v].hi == 9) copy.range[v].hi = k - 1;
        }
        if (!remove) out.push_back(std::move(copy));
    }
    return out;
}

std::vector<CombinedImage> combine_each_cartwheel(
    const PseudoConfiguration& conf, DartId e, const std::vector<PseudoConfiguration>& wheels,
    const std::vector<ExtendedConfiguration>& blockers, bool strict_center) {
    std::vector<CombinedImage> out;
    const int32_t nv = conf.z.vertex_count;
    const int32_t nd = conf.z.dart_count();
    for (const PseudoConfiguration& wheel : wheels) {
        for (DartId center_dart : incidence_list(wheel.z, 0)) {
            PseudoConfiguration u = disjoint_union(conf, wheel);
            DartId wheel_dart = center_dart + nd;
            for (ConfigurationImage& img :
                 free_homomorphism_configuration(u, {{e, wheel_dart}})) {
                VertexId anchor = strict_center ? img.phi.vertex_map[0]
                                                : img.conf.z.head[img.phi.dart_map[e]];
                if (blocked_by(img.conf, anchor, blockers)) continue;
                CombinedImage ci;
                ci.conf = std::move(img.conf);
                ci.phi.vertex_map.assign(img.phi.vertex_map.begin(),
                                         img.phi.vertex_map.begin() + nv);
                ci.phi.dart_map.assign(img.phi.dart_map.begin(), img.phi.dart_map.begin() + nd);
                out.push_back(std::move(ci));
            }
        }
    }
    return out;
}

std::vector<CombinedImage> combine_each_cartwheel_twice(
    const PseudoConfiguration& conf, DartId e1, DartId e2,
    const std::vector<PseudoConfiguration>& wheels,
    const std::vector<ExtendedConfiguration>& dbar,
    const std::vector<ExtendedConfiguration>& blockers) {
    std::vector<CombinedImage> out;
    for (CombinedImage& first : combine_each_cartwheel(conf, e1, wheels, dbar)) {
        DartId mapped = first.phi.dart_map[e2];
        for (CombinedImage& second :
             combine_each_cartwheel(first.conf, mapped, wheels, blockers)) {
            CombinedImage ci;
            ci.conf = std::move(second.conf);
            ci.phi = compose(second.phi, first.phi);
            out.push_back(std::move(ci));
        }
    }
    return out;
}

bool contain_x(const PseudoConfiguration& conf, VertexId v, const Configuration& x) {
    auto exts = extend_from_cut_vertices(x);
    if (exts.empty()) return false;
    const PseudoConfiguration& xc = exts[0].conf;
    VertexId x_center = kNil;
    for (VertexId u = 0; u < xc.z.vertex_count; ++u)
        if (xc.range[u] == DegreeRange{8, 8}) {
            x_center = u;
            break;
        }
    if (x_center == kNil) return false;
    DartId e_z = first_dart(conf.z, v);
    DartId e_x = first_dart(xc.z, x_center);
    if (e_z == kNil || e_x == kNil) return false;
    for (int i = 0; i < 8; ++i) {
        if (homomorphism(xc, e_x, conf, e_z, RangePredicate::kInclude)) return true;
        e_x = xc.z.succ[e_x];
        if (e_x == kNil) break;
    }
    return false;
}

namespace {

template <typename Fn>
CombineReport parallel_over(const std::vector<PseudoConfiguration>& set, Fn&& body) {
    std::vector<CombineReport> partial(set.size());
#ifdef FOURCOLOR_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (size_t i = 0; i < set.size(); ++i) body(set[i], partial[i]);
    CombineReport merged;
    for (const CombineReport& p : partial) {
        merged.combinations_checked += p.combinations_checked;
        for (const auto& f : p.failures) merged.failures.push_back(f);
    }
    return merged;
}

}  // namespace

CombineReport check_deg8(const std::vector<PseudoConfiguration>& all,
                         const std::vector<ExtendedConfiguration>& dbar, const Configuration& x) {
    std::vector<PseudoConfiguration> set = delete_degree_from_k_to_9(all, 9);
    return parallel_over(set, [&](const PseudoConfiguration& c, CombineReport& report) {
        if (c.range[0].lo != 8) return;
        auto darts = center_darts_by_degree(c);
        if (!darts[8].empty()) {
            for (DartId e : darts[8]) {
                auto images = combine_each_cartwheel(c, c.z.rev[e], set, dbar);
                ++report.combinations_checked;
                if (!images.empty())
                    report.failures.push_back(
                        {"8-8 combination not blocked", write_cartwheel(images[0].conf)});
            }
        } else if (darts[7].size() == 1) {
            DartId e = darts[7][0];
            auto images = combine_each_cartwheel(c, c.z.rev[e], set, dbar);
            ++report.combinations_checked;
            if (!images.empty())
                report.failures.push_back(
                    {"8-7 combination not blocked", write_cartwheel(images[0].conf)});
        } else if (darts[7].size() > 1) {
            // Successor distances between cyclically consecutive degree-7
            // spokes; only minimal-distance pairs are checked.
            size_t m = darts[7].size();
            std::vector<int> dist(m, 0);
            int min_dist = std::numeric_limits<int>::max();
            for (size_t i = 0; i < m; ++i) {
                DartId e1 = darts[7][i];
                DartId e2 = darts[7][(i + 1) % m];
                while (e1 != e2) {
                    e1 = c.z.succ[e1];
                    ++dist[i];
                }
                min_dist = std::min(min_dist, dist[i]);
            }
            for (size_t i = 0; i < m; ++i) {
                if (dist[i] > min_dist) continue;
                DartId e1 = darts[7][i];
                DartId e2 = darts[7][(i + 1) % m];
                auto images =
                    combine_each_cartwheel_twice(c, c.z.rev[e1], c.z.rev[e2], set, dbar, dbar);
                ++report.combinations_checked;
                for (CombinedImage& img : images) {
                    VertexId center_image = img.phi.vertex_map[0];
                    if (!contain_x(img.conf, center_image, x))
                        report.failures.push_back({"7-8-7 survivor without the exceptional "
                                                   "configuration at the center",
                                                   write_cartwheel(img.conf)});
                }
            }
        }
    });
}

CombineReport check_7triangle(const std::vector<PseudoConfiguration>& all,
                              const std::vector<ExtendedConfiguration>& dbar) {
    std::vector<PseudoConfiguration> set = delete_degree_from_k_to_9(all, 9);
    set = delete_degree_from_k_to_9(set, 8);
    return parallel_over(set, [&](const PseudoConfiguration& c, CombineReport& report) {
        for (DartId e : incidence_list(c.z, 0)) {
            DartId f = c.z.succ[e];
            if (f == kNil) continue;
            VertexId ve = c.z.tail(e);
            VertexId vf = c.z.tail(f);
            if (c.range[ve].lo != 7 || c.range[vf].lo != 7) continue;
            auto images = combine_each_cartwheel_twice(c, c.z.rev[e], c.z.rev[f], set, dbar, dbar);
            ++report.combinations_checked;
            if (!images.empty())
                report.failures.push_back(
                    {"adjacent 7-7 double combination not blocked",
                     write_cartwheel(images[0].conf)});
        }
    });
}

ExtendedConfiguration t73_member() {
    auto exts = extend_from_cut_vertices(t73_configuration());
    return exts.at(0);
}

Configuration t73_configuration() {
    std::string text =
        "3 0\n7\n7\n7\n"
        "0: 1 2 -1\n"
        "1: 2 0 -1\n"
        "2: 0 1 -1\n";
    return parse_config_text(text, "t73");
}

CombineReport check_deg7(const std::vector<PseudoConfiguration>& all,
                         const std::vector<ExtendedConfiguration>& dbar) {
    std::vector<PseudoConfiguration> set = delete_degree_from_k_to_9(all, 9);
    set = delete_degree_from_k_to_9(set, 8);
    ExtendedConfiguration triangle = t73_member();
    std::vector<ExtendedConfiguration> with_triangle = dbar;
    with_triangle.push_back(triangle);
    std::vector<ExtendedConfiguration> triangle_only{triangle};
    std::vector<PseudoConfiguration> kept;
    for (const PseudoConfiguration& c : set)
        if (!blocked_by(c, 0, triangle_only)) kept.push_back(c);
    return parallel_over(kept, [&](const PseudoConfiguration& c, CombineReport& report) {
        auto darts = center_darts_by_degree(c);
        if (darts[7].size() == 1) {
            DartId e = darts[7][0];
            auto images = combine_each_cartwheel(c, c.z.rev[e], kept, with_triangle);
            ++report.combinations_checked;
            if (!images.empty())
                report.failures.push_back(
                    {"7-7 combination not blocked", write_cartwheel(images[0].conf)});
        } else if (darts[7].size() > 1) {
            for (size_t i = 0; i < darts[7].size(); ++i) {
                for (size_t j = 0; j < i; ++j) {
                    auto images = combine_each_cartwheel_twice(
                        c, c.z.rev[darts[7][i]], c.z.rev[darts[7][j]], kept, dbar, with_triangle);
                    ++report.combinations_checked;
                    if (!images.empty())
                        report.failures.push_back(
                            {"7-7-7 double combination not blocked",
                             write_cartwheel(images[0].conf)});
                }
            }
        }
    });
}

}  // namespace fourcolor
