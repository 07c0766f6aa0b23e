#include "fourcolor/cartwheel.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fourcolor {

PseudoConfiguration generate_cartwheel(int32_t d, const std::vector<int32_t>& degrees) {
    Rotations rotations(d + 1);
    for (int32_t i = 1; i <= d; ++i) rotations[0].push_back(i);
    for (int32_t i = 1; i <= d; ++i) {
        int32_t next = i < d ? i + 1 : 1;
        int32_t prev = i > 1 ? i - 1 : d;
        rotations[i] = {next, 0, prev};
    }
    int32_t k = d + 1;
    for (int32_t i = 1; i <= d; ++i) {
        if (degrees[i - 1] == 9) continue;  // no second neighbors behind degree 9
        int32_t additions = degrees[i - 1] - static_cast<int32_t>(rotations[i].size());
        for (int32_t a = 0; a < additions; ++a) {
            int32_t last = rotations[i].back();
            rotations.push_back({i, last});
            rotations[i].push_back(k);
            rotations[last].insert(rotations[last].begin(), k);
            ++k;
        }
        int32_t first = rotations[i].front();
        int32_t last = rotations[i].back();
        rotations[first].push_back(last);
        rotations[last].insert(rotations[last].begin(), first);
    }
    for (int32_t i = 1; i < k; ++i)
        if (i > d || degrees[i - 1] == 9) rotations[i].push_back(-1);
    PseudoConfiguration c;
    c.z = from_rotations(k, rotations);
    c.range.resize(k);
    c.range[0] = {d, d};
    for (int32_t i = 1; i <= d; ++i) c.range[i] = {degrees[i - 1], degrees[i - 1]};
    for (int32_t i = d + 1; i < k; ++i) c.range[i] = {5, 9};
    return c;
}

std::vector<PseudoConfiguration> enum_wheels(int32_t d) {
    std::vector<PseudoConfiguration> out;
    std::vector<int32_t> degrees(d);
    auto canonical = [&]() {
        // Keep only words with no strictly smaller rotation.
        for (int32_t shift = 1; shift < d; ++shift) {
            for (int32_t i = 0; i < d; ++i) {
                int32_t a = degrees[(i + shift) % d];
                if (a != degrees[i]) {
                    if (a < degrees[i]) return false;
                    break;
                }
            }
        }
        return true;
    };
    std::function<void(int32_t, int32_t)> enum_degree = [&](int32_t i, int32_t lowest) {
        if (i == d) {
            if (!canonical()) return;
            out.push_back(generate_cartwheel(d, degrees));
            return;
        }
        for (size_t j = lowest; j < kCartwheelDegrees.size(); ++j) {
            degrees[i] = kCartwheelDegrees[j];
            enum_degree(i + 1, lowest);
        }
    };
    for (size_t j = 0; j < kCartwheelDegrees.size(); ++j) {
        degrees[0] = kCartwheelDegrees[j];
        enum_degree(1, static_cast<int32_t>(j));
    }
    return out;
}

DartId inbound_dart(const PseudoConfiguration& c, VertexId neighbor) {
    for (DartId e = 0; e < c.z.dart_count(); ++e)
        if (c.z.head[e] == 0 && c.z.tail(e) == neighbor) return e;
    return kNil;
}

DartId outbound_dart(const PseudoConfiguration& c, VertexId neighbor) {
    DartId e = inbound_dart(c, neighbor);
    return e == kNil ? kNil : c.z.rev[e];
}

std::array<std::vector<DartId>, 10> center_darts_by_degree(const PseudoConfiguration& c) {
    std::array<std::vector<DartId>, 10> out;
    for (DartId e : incidence_list(c.z, 0)) {
        int32_t d = c.range[c.z.tail(e)].lo;
        if (d >= 0 && d < 10) out[d].push_back(e);
    }
    return out;
}

int32_t upper_bound_of_charge(const PseudoConfiguration& c, const std::vector<size_t>& assigned,
                              const CartwheelInputs& in) {
    int32_t d = c.range[0].lo;
    int32_t total = 10 * (6 - d);
    for (int32_t j = 1; j <= d; ++j) {
        if (j <= static_cast<int32_t>(assigned.size())) {
            total += (*in.combined)[assigned[j - 1]].charge;
        } else {
            total += amount_of_possible_charge_send(c, inbound_dart(c, j), *in.combined);
        }
        total -= amount_of_charge_send(c, outbound_dart(c, j), in.rules->rules);
    }
    return total;
}

namespace {

bool prune_by_non_associated_rule(const PseudoConfiguration& c,
                                  const std::vector<size_t>& assigned,
                                  const CartwheelInputs& in) {
    for (size_t j = 0; j < assigned.size(); ++j) {
        const std::vector<bool>& flags = (*in.combined)[assigned[j]].from_rule;
        DartId e = inbound_dart(c, static_cast<VertexId>(j + 1));
        for (size_t k = 0; k < in.rules->rules.size(); ++k) {
            if (flags[k]) continue;
            if (always_applies(c, e, in.rules->rules[k])) return true;
        }
    }
    return false;
}

}  // namespace

bool prune_cartwheel(const PseudoConfiguration& c, const std::vector<size_t>& assigned,
                     const CartwheelInputs& in) {
    if (prune_by_non_associated_rule(c, assigned, in)) return true;
    if (upper_bound_of_charge(c, assigned, in) < 0) return true;
    if (blocked_by(c, 0, *in.dbar)) return true;
    return false;
}

std::vector<PseudoConfiguration> enum_possible_bad_wheels(int32_t d, const CartwheelInputs& in) {
    std::vector<PseudoConfiguration> out;
    for (PseudoConfiguration& w : enum_wheels(d)) {
        if (prune_cartwheel(w, {}, in)) continue;
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<PseudoConfiguration> concrete_degrees_except_tail(const PseudoConfiguration& c) {
    std::vector<PseudoConfiguration> acc{c};
    for (VertexId v = 0; v < c.z.vertex_count; ++v) {
        if (c.range[v].single() || c.range[v].hi == 9) continue;
        std::vector<PseudoConfiguration> next;
        for (int32_t deg : {5, 6, 7, 8}) {
            if (deg < c.range[v].lo || deg > c.range[v].hi) continue;
            for (const PseudoConfiguration& base : acc) {
                PseudoConfiguration copy = base;
                copy.range[v] = {deg, deg};
                next.push_back(std::move(copy));
            }
        }
        acc = std::move(next);
    }
    return acc;
}

std::vector<PseudoConfiguration> update_degree_by_rule(const PseudoConfiguration& c, DartId e,
                                                       const CombinedRule& r) {
    auto phi = homomorphism(r.carrier, r.send_dart, c, e, RangePredicate::kIntersect);
    if (!phi) return {};
    PseudoConfiguration updated = c;
    for (VertexId vr = 0; vr < r.carrier.z.vertex_count; ++vr) {
        VertexId vc = phi->vertex_map[vr];
        auto meet = intersect(updated.range[vc], r.carrier.range[vr]);
        if (!meet) return {};
        updated.range[vc] = *meet;
    }
    return concrete_degrees_except_tail(updated);
}

std::vector<AssignedCartwheel> fix_in_rules(const PseudoConfiguration& c0,
                                            const CartwheelInputs& in) {
    const int32_t d = c0.range[0].lo;
    std::vector<AssignedCartwheel> cur{{c0, {}}};
    for (int32_t i = 1; i <= d; ++i) {
        std::vector<AssignedCartwheel> next;
        for (const AssignedCartwheel& state : cur) {
            DartId e = inbound_dart(state.conf, i);
            for (size_t ri = 0; ri < in.combined->size(); ++ri) {
                for (PseudoConfiguration& refined :
                     update_degree_by_rule(state.conf, e, (*in.combined)[ri])) {
                    std::vector<size_t> assigned = state.in_rules;
                    assigned.push_back(ri);
                    if (prune_cartwheel(refined, assigned, in)) continue;
                    next.push_back({std::move(refined), std::move(assigned)});
                }
            }
        }
        cur = std::move(next);
    }
    return cur;
}

namespace {

bool should_refine(const PseudoConfiguration& c, DartId out_dart, const Rule& r) {
    return !always_applies(c, out_dart, r) && dominantly_applies(c, out_dart, r);
}

std::vector<PseudoConfiguration> refinement(const PseudoConfiguration& c, DartId out_dart,
                                            const Rule& r) {
    auto phi = homomorphism(r.carrier, r.send_dart, c, out_dart, RangePredicate::kIntersect);
    if (!phi) return {};
    std::vector<VertexId> refine_set;  // rule vertices whose image needs settling
    for (VertexId ur = 0; ur < r.carrier.z.vertex_count; ++ur) {
        VertexId u = phi->vertex_map[ur];
        if (c.range[u].hi == 9 && c.range[u].lo < r.carrier.range[ur].lo)
            refine_set.push_back(ur);
    }
    std::vector<PseudoConfiguration> out;
    {
        PseudoConfiguration always = c;
        for (VertexId ur : refine_set)
            always.range[phi->vertex_map[ur]].lo = r.carrier.range[ur].lo;
        out.push_back(std::move(always));
    }
    for (VertexId ur : refine_set) {
        PseudoConfiguration never = c;
        never.range[phi->vertex_map[ur]].hi = r.carrier.range[ur].lo - 1;
        for (PseudoConfiguration& concrete : concrete_degrees_except_tail(never))
            out.push_back(std::move(concrete));
    }
    return out;
}

}  // namespace

std::vector<AssignedCartwheel> fix_out_rules(std::vector<AssignedCartwheel> pending,
                                             const CartwheelInputs& in) {
    std::deque<AssignedCartwheel> queue(std::make_move_iterator(pending.begin()),
                                        std::make_move_iterator(pending.end()));
    std::vector<AssignedCartwheel> out;
    while (!queue.empty()) {
        AssignedCartwheel state = std::move(queue.front());
        queue.pop_front();
        const int32_t d = state.conf.range[0].lo;
        bool refined = false;
        for (int32_t i = 1; i <= d && !refined; ++i) {
            DartId e = outbound_dart(state.conf, i);
            for (const Rule& r : in.rules->rules) {
                if (!should_refine(state.conf, e, r)) continue;
                refined = true;
                for (PseudoConfiguration& piece : refinement(state.conf, e, r)) {
                    if (prune_cartwheel(piece, state.in_rules, in)) continue;
                    queue.push_back({std::move(piece), state.in_rules});
                }
                break;
            }
        }
        if (!refined) out.push_back(std::move(state));
    }
    return out;
}

std::vector<PseudoConfiguration> enum_bad_cartwheels(const PseudoConfiguration& c0,
                                                     const CartwheelInputs& in,
                                                     bool check_assertions) {
    std::vector<AssignedCartwheel> staged = fix_in_rules(c0, in);
    std::vector<AssignedCartwheel> survivors = fix_out_rules(std::move(staged), in);
    std::vector<PseudoConfiguration> out;
    for (AssignedCartwheel& s : survivors) {
        if (check_assertions) {
            int32_t bound = upper_bound_of_charge(s.conf, s.in_rules, in);
            int32_t d = s.conf.range[0].lo;
            auto darts = center_darts_by_degree(s.conf);
            size_t high = darts[7].size() + darts[8].size() + darts[9].size();
            if (bound != 0)
                throw AssertionFailureError("survivor charge bound is not zero",
                                            write_cartwheel(s.conf));
            if (d != 7 && d != 8)
                throw AssertionFailureError("survivor center degree outside {7,8}",
                                            write_cartwheel(s.conf));
            if (high == 0)
                throw AssertionFailureError("survivor center has no neighbor of degree above 6",
                                            write_cartwheel(s.conf));
        }
        out.push_back(std::move(s.conf));
    }
    return out;
}

std::string write_cartwheel(const PseudoConfiguration& c, VertexId center) {
    nlohmann::json j;
    j["z"] = nlohmann::json::parse(write_dart_json(c.z));
    nlohmann::json ranges = nlohmann::json::array();
    for (const DegreeRange& r : c.range)
        ranges.push_back({r.lo, r.hi == kInfiniteDegree ? -1 : r.hi});
    j["ranges"] = ranges;
    j["center"] = center;
    return j.dump();
}

std::pair<PseudoConfiguration, VertexId> read_cartwheel(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PseudoConfiguration c;
    c.z = read_dart_json(j.at("z").dump());
    for (const auto& r : j.at("ranges")) {
        int32_t lo = r.at(0).get<int32_t>();
        int32_t hi = r.at(1).get<int32_t>();
        c.range.push_back({lo, hi < 0 ? kInfiniteDegree : hi});
    }
    return {std::move(c), j.at("center").get<VertexId>()};
}

std::vector<PseudoConfiguration> load_cartwheel_directory(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".cartwheel") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    std::vector<PseudoConfiguration> out;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::stringstream ss;
        ss << in.rdbuf();
        out.push_back(read_cartwheel(ss.str()).first);
    }
    return out;
}

EnumerationSummary enum_all_bad_cartwheels(const std::vector<int32_t>& degrees,
                                           const CartwheelInputs& in, const std::string& out_dir,
                                           bool check_assertions) {
    std::filesystem::create_directories(out_dir);
    EnumerationSummary summary;
    for (int32_t d : degrees) summary.survivors_by_degree[d] = 0;
    for (int32_t d : degrees) {
        std::vector<PseudoConfiguration> wheels = enum_wheels(d);
        summary.wheels += static_cast<int64_t>(wheels.size());
        std::vector<std::vector<PseudoConfiguration>> results(wheels.size());
        std::vector<std::string> failure(wheels.size());
#ifdef FOURCOLOR_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (size_t w = 0; w < wheels.size(); ++w) {
            try {
                if (prune_cartwheel(wheels[w], {}, in)) continue;
                results[w] = enum_bad_cartwheels(wheels[w], in, check_assertions);
            } catch (const AssertionFailureError& e) {
                failure[w] = e.witness;
            }
        }
        for (size_t w = 0; w < wheels.size(); ++w) {
            if (!failure[w].empty()) {
                std::string path = out_dir + "/assertion_witness.cartwheel";
                std::ofstream out(path);
                out << failure[w];
                throw AssertionFailureError("enumeration assertion failed; witness at " + path,
                                            failure[w]);
            }
            if (results[w].empty()) {
                ++summary.pruned_wheels;
                continue;
            }
            for (const PseudoConfiguration& survivor : results[w]) {
                ++summary.survivors_by_degree[d];
                uint64_t h = trace_hash(canonical_trace(survivor, 0));
                std::ostringstream name;
                name << out_dir << "/d" << d << "_" << std::hex << h << ".cartwheel";
                std::ofstream out(name.str());
                out << write_cartwheel(survivor);
                summary.files.push_back(name.str());
            }
        }
    }
    std::sort(summary.files.begin(), summary.files.end());
    return summary;
}

}  // namespace fourcolor
