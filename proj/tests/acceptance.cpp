// Acceptance suite: runs every gate at its stated tolerance and prints one
// pass/fail line per criterion. Gates that need the externally published
// corpora (the 8202-configuration set, the 84-rule set and its survivors)
// load them from data/published/ (or $FOURCOLOR_DATA/published/) and fail
// with an explicit reason when the corpora are not present; they are never
// silently skipped. Long sweeps additionally sit behind --full.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "fourcolor/cartwheel.hpp"
#include "fourcolor/color.hpp"
#include "fourcolor/combine.hpp"
#include "fourcolor/gen.hpp"
#include "fourcolor/testpaths.hpp"

using namespace fourcolor;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    bool skipped = false;  // optional --full gate not requested
};

Outcome skip_outcome(const std::string& why) { return {true, why, true}; }

std::string data_dir() { return test_data_dir(); }
std::string published_dir() { return data_dir() + "/published"; }

Configuration load(const std::string& name) {
    return load_config_file(data_dir() + "/configs/" + name);
}

RuleSet sample_rules() { return load_rules_file(data_dir() + "/rules/sample.rules"); }

// ---------------------------------------------------------------- criterion 1
Outcome criterion_low_degree_levels() {
    auto r3 = check_d_reducibility(load("deg3.conf"));
    auto r4 = check_d_reducibility(load("deg4.conf"));
    bool ok = r3.d_reducible && r3.max_level == 0 && r4.d_reducible && r4.max_level == 1;
    std::ostringstream os;
    os << "degree-3: level " << r3.max_level << ", degree-4: level " << r4.max_level;
    return {ok, os.str()};
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion_birkhoff_franklin() {
    auto rb = check_d_reducibility(load("birkhoff.conf"));
    auto rf = check_d_reducibility(load("franklin.conf"));
    std::ostringstream os;
    os << "birkhoff " << (rb.d_reducible ? "D-reducible" : "NOT") << " (level " << rb.max_level
       << "), franklin " << (rf.d_reducible ? "D-REDUCIBLE (wrong)" : "not D-reducible");
    return {rb.d_reducible && !rf.d_reducible, os.str()};
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion_published_sample() {
    std::string dir = published_dir() + "/reducible-configurations";
    if (!std::filesystem::is_directory(dir))
        return {false, "published configuration corpus not present at " + dir +
                           " (unreachable from this environment); place the corpus there to run "
                           "the 50-sample gate"};
    std::vector<std::string> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".conf") files.push_back(e.path().string());
    if (files.size() < 50) return {false, "corpus has fewer than 50 configurations"};
    std::sort(files.begin(), files.end());
    std::mt19937 rng(2024);
    std::shuffle(files.begin(), files.end(), rng);
    files.resize(50);
    int max_level = 0;
    for (const std::string& f : files) {
        auto r = check_d_reducibility(load_config_file(f));
        if (!r.d_reducible) return {false, f + " is not D-reducible"};
        max_level = std::max(max_level, r.max_level);
    }
    std::ostringstream os;
    os << "50 sampled configurations D-reducible, max level " << max_level;
    return {max_level <= 25, os.str()};
}

Outcome criterion_published_full_sweep(bool full) {
    if (!full) return skip_outcome("optional gate; run with --full for the complete sweep");
    std::string dir = published_dir() + "/reducible-configurations";
    if (!std::filesystem::is_directory(dir))
        return {false, "published configuration corpus not present at " + dir};
    std::vector<std::string> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".conf") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    int max_level = 0;
    std::vector<char> bad(files.size(), 0);
    std::vector<int> lvl(files.size(), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (size_t i = 0; i < files.size(); ++i) {
        auto r = check_d_reducibility(load_config_file(files[i]));
        bad[i] = !r.d_reducible;
        lvl[i] = r.max_level;
    }
    for (size_t i = 0; i < files.size(); ++i) {
        if (bad[i]) return {false, files[i] + " is not D-reducible"};
        max_level = std::max(max_level, lvl[i]);
    }
    return {max_level <= 25, std::to_string(files.size()) + " configurations swept, max level " +
                                 std::to_string(max_level)};
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion_charge_conservation() {
    RuleSet rules = sample_rules();
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 20 + static_cast<int>(rng() % 281);
        EmbeddedTriangulation g = (trial % 2 == 0) ? random_apollonian(n, 1000 + trial)
                                                   : random_triangulation(n, 1000 + trial);
        ChargeLedger led = charge_ledger(g, rules);
        if (led.total() != 120)
            return {false, "sum " + std::to_string(led.total()) + " at trial " +
                               std::to_string(trial)};
        for (VertexId v = 0; v < g.n(); ++v)
            if (led.final_charge[v] > 60 - 2 * g.degree(v))
                return {false, "vertex bound violated at trial " + std::to_string(trial)};
    }
    return {true, "100 random triangulations: sum 120 exactly, T(v) <= 60-2d(v) everywhere"};
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion_icosahedron() {
    ChargeLedger led = charge_ledger(icosahedron(), sample_rules());
    for (int32_t t : led.final_charge)
        if (t != 10) return {false, "nonuniform charge"};
    return {true, "T(v) = 10 on all 12 vertices"};
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion_combination_oracle() {
    RuleSet rs = sample_rules();
    RuleSet six;
    six.rules.assign(rs.rules.begin(), rs.rules.begin() + 6);
    constexpr int32_t kCap = 13;
    auto instance_keys = [&](const PseudoConfiguration& carrier, DartId root,
                             std::set<std::string>& sink) {
        std::vector<std::vector<int32_t>> choices(carrier.z.vertex_count);
        for (VertexId v = 0; v < carrier.z.vertex_count; ++v) {
            DegreeRange r = carrier.range[v];
            for (int32_t d = std::min(r.lo, kCap); d <= std::min(r.hi, kCap); ++d)
                choices[v].push_back(d);
        }
        std::vector<int32_t> pick(carrier.z.vertex_count);
        std::function<void(VertexId)> go = [&](VertexId v) {
            if (v == carrier.z.vertex_count) {
                PseudoConfiguration inst;
                inst.z = carrier.z;
                for (int32_t d : pick) inst.range.push_back({d, d});
                sink.insert(canonical_trace(inst, root));
                return;
            }
            for (int32_t d : choices[v]) {
                pick[v] = d;
                go(v + 1);
            }
        };
        go(0);
    };
    auto combined = combine_rules(six, {});
    std::map<std::string, std::set<std::string>> incremental, oracle;
    std::map<std::string, int32_t> inc_charge, oracle_charge;
    for (const CombinedRule& c : combined) {
        std::string flags;
        for (bool b : c.from_rule) flags += b ? '1' : '0';
        instance_keys(c.carrier, c.send_dart, incremental[flags]);
        inc_charge[flags] = c.charge;
    }
    for (uint32_t mask = 1; mask < (1u << 6); ++mask) {
        CombinedRule acc = neutral_combination(6);
        PseudoConfiguration u = acc.carrier;
        std::vector<DartId> sends{acc.send_dart};
        int32_t charge = 0;
        std::string flags(6, '0');
        for (int i = 0; i < 6; ++i) {
            if (!(mask & (1u << i))) continue;
            flags[i] = '1';
            charge += six.rules[i].charge;
            DartId off = u.z.dart_count();
            u = disjoint_union(u, six.rules[i].carrier);
            sends.push_back(six.rules[i].send_dart + off);
        }
        IdentificationRequest s;
        for (size_t i = 0; i + 1 < sends.size(); ++i) s.emplace_back(sends[i], sends[i + 1]);
        for (auto& img : free_homomorphism_configuration(u, s)) {
            instance_keys(img.conf, img.phi.dart_map[sends[0]], oracle[flags]);
            oracle_charge[flags] = charge;
        }
    }
    std::string zero(6, '0');
    incremental.erase(zero);
    if (incremental.size() != oracle.size()) return {false, "realizable subset sets differ"};
    for (auto& [flags, keys] : oracle) {
        if (!incremental.count(flags) || incremental[flags] != keys)
            return {false, "instance families differ for subset " + flags};
        if (inc_charge[flags] != oracle_charge[flags])
            return {false, "charges differ for subset " + flags};
    }
    return {true, "6-rule subset: incremental combination agrees exactly with the brute-force "
                  "oracle over all " +
                      std::to_string(oracle.size()) + " realizable subsets"};
}

// When the expected maximum-charge carrier family is mounted, every
// maximum-charge combination must be isomorphic to a family member.
std::string carrier_family_note(const std::vector<CombinedRule>& combined, int32_t max_charge,
                                const std::string& family_subdir) {
    std::string dir = published_dir() + family_subdir;
    if (!std::filesystem::is_directory(dir)) return " (carrier family not mounted; max only)";
    std::vector<PseudoConfiguration> family = load_cartwheel_directory(dir);
    for (const CombinedRule& c : combined) {
        if (c.charge != max_charge) continue;
        bool matched = false;
        for (const PseudoConfiguration& f : family)
            if (isomorphic(c.carrier, f)) matched = true;
        if (!matched) return " BUT a max-charge carrier is outside the mounted family";
    }
    return "; all max-charge carriers inside the mounted family";
}

Outcome criterion_full_unblocked_max8(bool full) {
    std::string rules_path = published_dir() + "/rules.txt";
    if (!full) return skip_outcome("optional gate; run with --full and the published rule set");
    if (!std::filesystem::exists(rules_path))
        return {false, "published 84-rule set not present at " + rules_path +
                           " (unreachable from this environment)"};
    RuleSet rules = load_rules_file(rules_path);
    auto combined = combine_rules(rules, {});
    int32_t max_charge = 0;
    for (const CombinedRule& c : combined) max_charge = std::max(max_charge, c.charge);
    std::string family_note = carrier_family_note(combined, max_charge, "/carriers_max8");
    return {max_charge == 8, "max charge " + std::to_string(max_charge) + family_note};
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion_full_blocked_max5(bool full) {
    if (!full) return skip_outcome("optional gate; run with --full and the published corpora");
    std::string rules_path = published_dir() + "/rules.txt";
    std::string conf_dir = published_dir() + "/reducible-configurations";
    if (!std::filesystem::exists(rules_path) || !std::filesystem::is_directory(conf_dir))
        return {false, "published rule/configuration corpora not present under " +
                           published_dir() + " (unreachable from this environment)"};
    RuleSet rules = load_rules_file(rules_path);
    auto dbar = build_dbar(load_config_directory(conf_dir));
    auto combined = combine_rules(rules, dbar);
    int32_t max_charge = 0;
    for (const CombinedRule& c : combined) max_charge = std::max(max_charge, c.charge);
    std::string family_note = carrier_family_note(combined, max_charge, "/carriers_max5");
    return {max_charge == 5, "max charge " + std::to_string(max_charge) + family_note};
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion_cartwheel_counts(bool full) {
    if (!full) return skip_outcome("optional gate; run with --full and the published corpora");
    std::string rules_path = published_dir() + "/rules.txt";
    std::string conf_dir = published_dir() + "/reducible-configurations";
    if (!std::filesystem::exists(rules_path) || !std::filesystem::is_directory(conf_dir))
        return {false, "published corpora not present under " + published_dir() +
                           " (unreachable from this environment)"};
    RuleSet rules = load_rules_file(rules_path);
    auto dbar = build_dbar(load_config_directory(conf_dir));
    auto combined = combine_rules(rules, dbar);
    CartwheelInputs in{&rules, &combined, &dbar};
    try {
        EnumerationSummary s =
            enum_all_bad_cartwheels({7, 8, 9, 10, 11}, in, "acceptance_cartwheels");
        bool ok = s.survivors_by_degree[8] == 728 && s.survivors_by_degree[7] == 9366 &&
                  s.survivors_by_degree[9] == 0 && s.survivors_by_degree[10] == 0 &&
                  s.survivors_by_degree[11] == 0;
        std::ostringstream os;
        os << "survivors d7=" << s.survivors_by_degree[7] << " d8=" << s.survivors_by_degree[8];
        return {ok, os.str()};
    } catch (const AssertionFailureError& e) {
        return {false, std::string("enumeration assertion failed: ") + e.what()};
    }
}

// ---------------------------------------------------------------- criterion 9
Outcome criterion_combination_checks(bool full) {
    std::string survivors_dir = published_dir() + "/cartwheels";
    std::string conf_dir = published_dir() + "/reducible-configurations";
    std::string exception_path = published_dir() + "/exception_x.conf";
    if (!std::filesystem::is_directory(survivors_dir) ||
        !std::filesystem::is_directory(conf_dir) || !std::filesystem::exists(exception_path))
        return {false,
                "published survivors / configurations / exceptional pattern not present under " +
                    published_dir() +
                    " (unreachable from this environment); the smoke variant needs them"};
    auto dbar = build_dbar(load_config_directory(conf_dir));
    Configuration x = load_config_file(exception_path);
    std::vector<PseudoConfiguration> all = load_cartwheel_directory(survivors_dir);
    if (!full) {
        // Smoke variant over 20 sampled survivors: certifies the pipeline.
        std::mt19937 rng(5);
        std::shuffle(all.begin(), all.end(), rng);
        if (all.size() > 20) all.resize(20);
    }
    CombineReport r8 = check_deg8(all, dbar, x);
    CombineReport r7t = check_7triangle(all, dbar);
    CombineReport r7 = check_deg7(all, dbar);
    std::ostringstream os;
    os << "deg8 " << (r8.passed() ? "pass" : "fail") << ", 7triangle "
       << (r7t.passed() ? "pass" : "fail") << ", deg7 " << (r7.passed() ? "pass" : "fail");
    return {r8.passed() && r7t.passed() && r7.passed(), os.str()};
}

// --------------------------------------------------------------- criterion 10
Outcome criterion_catalan() {
    const int64_t catalan[] = {1, 1, 2, 5, 14, 42, 132};
    for (int n = 2; n <= 12; n += 2) {
        if (static_cast<int64_t>(all_planar_kempe_chains(n).size()) != catalan[n / 2])
            return {false, "count mismatch at n = " + std::to_string(n)};
    }
    return {true, "cardinalities are Catalan(n/2) for n in {2,4,6,8,10,12}"};
}

// --------------------------------------------------------------- criterion 11
PseudoTriangulation random_small_pt(std::mt19937& rng, int max_darts) {
    PseudoConfiguration acc;
    int pieces = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < pieces; ++i) {
        PseudoConfiguration piece;
        if (rng() % 2) {
            piece.z = from_rotations(3, {{1, 2}, {2, 0}, {0, 1}});
            piece.range.assign(3, DegreeRange{2, 2});
        } else {
            piece.z = from_rotations(2, {{1, -1}, {0, -1}});
            piece.range.assign(2, DegreeRange{2, kInfiniteDegree});
        }
        acc = acc.z.vertex_count == 0 ? piece : disjoint_union(acc, piece);
    }
    PseudoTriangulation z = acc.z;
    while (z.dart_count() > max_darts) {
        std::uniform_int_distribution<DartId> pick(0, z.dart_count() - 1);
        z = free_homomorphism_triangulation(z, {{pick(rng), pick(rng)}}).z;
    }
    return z;
}

Outcome criterion_free_homomorphism_properties() {
    std::mt19937 rng(42);
    // Request-order independence over 100 random instances.
    for (int trial = 0; trial < 100; ++trial) {
        PseudoTriangulation z = random_small_pt(rng, 12);
        IdentificationRequest s;
        std::uniform_int_distribution<DartId> pick(0, std::max(z.dart_count() - 1, 0));
        for (int i = 0; i < 3 && z.dart_count() > 0; ++i) s.emplace_back(pick(rng), pick(rng));
        IdentificationRequest shuffled = s;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        TriangulationImage a = free_homomorphism_triangulation(z, s);
        TriangulationImage b = free_homomorphism_triangulation(z, shuffled);
        if (a.z.dart_count() != b.z.dart_count() || a.z.vertex_count != b.z.vertex_count)
            return {false, "order dependence at trial " + std::to_string(trial)};
        for (DartId d = 0; d < z.dart_count(); ++d)
            if (component_trace(a.z, a.phi.dart_map[d]) !=
                component_trace(b.z, b.phi.dart_map[d]))
                return {false, "order dependence at trial " + std::to_string(trial)};
    }
    // Staging equivalence.
    for (int trial = 0; trial < 60; ++trial) {
        PseudoTriangulation z = random_small_pt(rng, 10);
        if (z.dart_count() == 0) continue;
        std::uniform_int_distribution<DartId> pick(0, z.dart_count() - 1);
        IdentificationRequest s1{{pick(rng), pick(rng)}, {pick(rng), pick(rng)}};
        IdentificationRequest s2{{pick(rng), pick(rng)}};
        IdentificationRequest both = s1;
        both.insert(both.end(), s2.begin(), s2.end());
        TriangulationImage one_shot = free_homomorphism_triangulation(z, both);
        TriangulationImage first = free_homomorphism_triangulation(z, s1);
        IdentificationRequest mapped;
        for (auto [e, f] : s2) mapped.emplace_back(first.phi.dart_map[e], first.phi.dart_map[f]);
        TriangulationImage second = free_homomorphism_triangulation(first.z, mapped);
        Homomorphism staged = compose(second.phi, first.phi);
        for (DartId d = 0; d < z.dart_count(); ++d)
            if (component_trace(one_shot.z, one_shot.phi.dart_map[d]) !=
                component_trace(second.z, staged.dart_map[d]))
                return {false, "staging mismatch at trial " + std::to_string(trial)};
    }
    // Universal property against brute-force quotient enumeration.
    int quotients = 0;
    for (int trial = 0; trial < 20; ++trial) {
        PseudoTriangulation z = random_small_pt(rng, 8);
        const int nd = z.dart_count();
        if (nd == 0) continue;
        std::uniform_int_distribution<DartId> pick(0, nd - 1);
        IdentificationRequest s{{pick(rng), pick(rng)}};
        TriangulationImage free_img = free_homomorphism_triangulation(z, s);
        std::vector<int> rgs(nd, 0);
        bool fail = false;
        std::function<void(int, int)> go = [&](int i, int maxv) {
            if (fail) return;
            if (i == nd) {
                for (auto [e, f] : s)
                    if (rgs[e] != rgs[f]) return;
                int classes = *std::max_element(rgs.begin(), rgs.end()) + 1;
                std::vector<int> vclass(z.vertex_count);
                for (VertexId v = 0; v < z.vertex_count; ++v) vclass[v] = v;
                std::function<int(int)> vroot = [&](int v) {
                    return vclass[v] == v ? v : vclass[v] = vroot(vclass[v]);
                };
                for (DartId e = 0; e < nd; ++e)
                    for (DartId f = e + 1; f < nd; ++f)
                        if (rgs[e] == rgs[f]) vclass[vroot(z.head[e])] = vroot(z.head[f]);
                std::vector<int> crev(classes, -1), csucc(classes, -2), cpred(classes, -2),
                    chead(classes, -1);
                for (DartId e = 0; e < nd; ++e) {
                    int c = rgs[e];
                    if (crev[c] == -1)
                        crev[c] = rgs[z.rev[e]];
                    else if (crev[c] != rgs[z.rev[e]])
                        return;
                    if (chead[c] == -1) chead[c] = vroot(z.head[e]);
                    if (z.succ[e] != kNil) {
                        if (csucc[c] == -2)
                            csucc[c] = rgs[z.succ[e]];
                        else if (csucc[c] != rgs[z.succ[e]])
                            return;
                    }
                    if (z.pred[e] != kNil) {
                        if (cpred[c] == -2)
                            cpred[c] = rgs[z.pred[e]];
                        else if (cpred[c] != rgs[z.pred[e]])
                            return;
                    }
                }
                std::vector<int> vids(z.vertex_count, -1);
                int nv = 0;
                for (VertexId v = 0; v < z.vertex_count; ++v)
                    if (vroot(v) == v) vids[v] = nv++;
                PseudoTriangulation q;
                q.vertex_count = nv;
                for (int c = 0; c < classes; ++c)
                    q.add_dart(vids[vroot(chead[c])], crev[c], csucc[c] == -2 ? kNil : csucc[c],
                               cpred[c] == -2 ? kNil : cpred[c]);
                if (!validate(q).empty()) return;
                Homomorphism proj;
                proj.vertex_map.resize(z.vertex_count);
                proj.dart_map.resize(nd);
                for (VertexId v = 0; v < z.vertex_count; ++v) proj.vertex_map[v] = vids[vroot(v)];
                for (DartId e = 0; e < nd; ++e) proj.dart_map[e] = rgs[e];
                if (!check_homomorphism(z, q, proj)) return;
                ++quotients;
                Homomorphism factor;
                factor.vertex_map.assign(free_img.z.vertex_count, kNil);
                factor.dart_map.assign(free_img.z.dart_count(), kNil);
                for (DartId e = 0; e < nd; ++e) {
                    DartId fe = free_img.phi.dart_map[e];
                    if (factor.dart_map[fe] == kNil)
                        factor.dart_map[fe] = proj.dart_map[e];
                    else if (factor.dart_map[fe] != proj.dart_map[e])
                        fail = true;
                }
                for (VertexId v = 0; v < z.vertex_count; ++v) {
                    VertexId fv = free_img.phi.vertex_map[v];
                    if (factor.vertex_map[fv] == kNil)
                        factor.vertex_map[fv] = proj.vertex_map[v];
                    else if (factor.vertex_map[fv] != proj.vertex_map[v])
                        fail = true;
                }
                if (!fail && !check_homomorphism(free_img.z, q, factor)) fail = true;
                return;
            }
            for (int v = 0; v <= maxv + 1; ++v) {
                rgs[i] = v;
                go(i + 1, std::max(maxv, v));
            }
        };
        go(0, -1);
        if (fail) return {false, "universal property violated at trial " + std::to_string(trial)};
    }
    return {true, "order independence (100 cases), staging (60 cases), universal property (" +
                      std::to_string(quotients) + " brute-force quotients factored)"};
}

// --------------------------------------------------------------- criterion 12
Outcome criterion_coloring() {
    ColorContext ctx = make_color_context(load_config_directory(data_dir() + "/dreducible"),
                                          sample_rules());
    auto check = [&](const EmbeddedTriangulation& g, const std::string& what) -> std::string {
        Coloring c = four_color(g, ctx);
        if (!verify_coloring(g, c)) return what + " was improper";
        return "";
    };
    for (auto [g, name] : std::initializer_list<std::pair<EmbeddedTriangulation, const char*>>{
             {tetrahedron(), "K4"}, {octahedron(), "octahedron"}, {icosahedron(), "icosahedron"}}) {
        std::string err = check(g, name);
        if (!err.empty()) return {false, err};
    }
    {
        Coloring k4 = four_color(tetrahedron(), ctx);
        std::set<int> used(k4.color.begin(), k4.color.end());
        if (used.size() != 4) return {false, "K4 did not use four distinct colors"};
    }
    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) {
        int n = 50 + static_cast<int>(rng() % 451);
        std::string err = check(random_apollonian(n, 5000 + i), "apollonian");
        if (!err.empty()) return {false, err};
    }
    for (int i = 0; i < 20; ++i) {
        std::string err = check(random_triangulation(10000, 7000 + i), "random 10^4");
        if (!err.empty()) return {false, err};
    }
    // Kempe properness across random intermediate changes.
    EmbeddedTriangulation g = random_apollonian(300, 31);
    Coloring c = four_color(g, ctx);
    Adjacency adj = adjacency_of(g);
    std::mt19937_64 r2(13);
    for (int step = 0; step < 200; ++step) {
        int pair_id = 1 + static_cast<int>(r2() % 3);
        KempeChainIndex idx = kempe_chains(adj, c, pair_id);
        std::vector<char> sw(idx.count, 0);
        for (int32_t i = 0; i < idx.count; ++i) sw[i] = r2() & 1;
        kempe_change(c, idx, sw, pair_id);
        if (!verify_coloring(g, c))
            return {false, "Kempe change broke properness at step " + std::to_string(step)};
    }
    return {true, "K4 + octahedron + icosahedron + 50 stacked (n <= 500) + 20 random n = 10^4 all "
                  "proper; 200 Kempe changes stayed proper"};
}

// --------------------------------------------------------------- criterion 13
std::set<std::vector<int>> brute_force_partitions(int r, const RingSurgery& s) {
    // Proper colorings of the surgered empty ring, as position partitions.
    std::set<std::vector<int>> out;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < r; ++i) edges.push_back({i, (i + 1) % r});
    int extra = -1;  // star vertex
    std::vector<int> identify;
    if (s.kind == RingSurgery::kAddEdges) {
        edges.push_back({s.j, (s.j + 2) % r});
        if (r == 5) edges.push_back({s.j, (s.j + 3) % r});
    } else if (s.kind == RingSurgery::kIdentify) {
        identify = {s.j, (s.j + 2) % r};
    } else {
        extra = r;
        for (int i = 0; i < r; ++i) edges.push_back({i, extra});
    }
    int total = r + (extra >= 0 ? 1 : 0);
    std::vector<int> col(total, -1);
    std::function<void(int)> go = [&](int i) {
        if (i == total) {
            std::vector<int> sig(r);
            std::map<int, int> first;
            for (int p = 0; p < r; ++p) {
                if (!first.count(col[p])) first[col[p]] = p;
                sig[p] = first[col[p]];
            }
            out.insert(sig);
            return;
        }
        for (int c = 0; c < 4; ++c) {
            col[i] = c;
            bool ok = true;
            if (!identify.empty()) {
                // Identified positions share one color.
                if (i == identify[1] && col[identify[0]] != c) ok = false;
            }
            for (auto [a, b] : edges)
                if (a <= i && b <= i && a != b && col[a] == col[b] &&
                    !(std::count(identify.begin(), identify.end(), a) &&
                      std::count(identify.begin(), identify.end(), b)))
                    ok = false;
            if (ok) go(i + 1);
        }
        col[i] = -1;
    };
    go(0);
    return out;
}

Outcome criterion_ring_procedures() {
    ColorContext ctx = make_color_context(load_config_directory(data_dir() + "/dreducible"),
                                          sample_rules());
    std::mt19937_64 rng(77);
    int x4_runs = 0, x5_runs = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int r = (trial % 2 == 0) ? 4 : 5;
        // Random disk: wheel over an r-ring, randomly subdivided inside.
        Rotations rot(r + 1);
        for (int i = 0; i < r; ++i) rot[r] = {};
        for (int i = 0; i < r; ++i) rot[r].push_back(i);
        for (int i = 0; i < r; ++i) {
            int next = (i + 1) % r;
            int prev = (i + r - 1) % r;
            rot[i] = {next, r, prev};
        }
        // Close into a sphere with an outer apex for generation/coloring.
        EmbeddedTriangulation h;
        h.rot = rot;
        int apex = h.n();
        h.rot.push_back({});
        for (int i = 0; i < r; ++i) h.rot[i].push_back(apex);  // after prev, closing the cycle
        for (int i = r - 1; i >= 0; --i) h.rot[apex].push_back(i);
        if (!validate_triangulation(h).empty()) {
            h.rot[apex].clear();
            for (int i = 0; i < r; ++i) h.rot[apex].push_back(i);
        }
        if (!validate_triangulation(h).empty()) return {false, "disk scaffold invalid"};
        // Random interior growth: subdivide faces not using the apex.
        int grow = 2 + static_cast<int>(rng() % 6);
        for (int gi = 0; gi < grow; ++gi) {
            std::vector<std::array<int32_t, 3>> faces;
            for (VertexId v = 0; v < h.n(); ++v) {
                if (v == apex) continue;
                const auto& rv = h.rot[v];
                for (size_t k = 0; k < rv.size(); ++k) {
                    int32_t x = rv[k], y = rv[(k + 1) % rv.size()];
                    if (x == apex || y == apex) continue;
                    if (v < x && v < y) faces.push_back({v, x, y});
                }
            }
            auto [v, x, y] = faces[rng() % faces.size()];
            int32_t w = h.n();
            h.rot.push_back({v, x, y});
            auto ins = [&](VertexId vv, int32_t after, int32_t nw) {
                auto& rv = h.rot[vv];
                rv.insert(std::find(rv.begin(), rv.end(), after) + 1, nw);
            };
            ins(v, x, w);
            ins(x, y, w);
            ins(y, v, w);
        }
        if (!validate_triangulation(h).empty()) return {false, "disk growth invalid"};
        Coloring full = four_color(h, ctx);
        if (!verify_coloring(h, full)) return {false, "disk coloring improper"};
        // Disk view: drop the apex.
        Adjacency adj(h.n());
        for (VertexId v = 0; v < h.n(); ++v)
            for (int32_t w : h.rot[v])
                if (v != apex && w != apex) adj[v].push_back(w);
        Coloring c = full;
        c.color[apex] = -1;
        std::vector<VertexId> ring(r);
        for (int i = 0; i < r; ++i) ring[i] = i;
        RingSurgery s = r == 4 ? x4_reduce(adj, ring, c) : x5_reduce(adj, ring, c);
        (r == 4 ? x4_runs : x5_runs)++;
        // Family members must be proper on the disk and their ring partitions
        // must equal the brute-force partitions of the surgered ring.
        std::set<std::vector<int>> got;
        for (const Coloring& fam : s.family) {
            for (VertexId v = 0; v < h.n(); ++v) {
                if (v == apex || fam.color[v] < 0) continue;
                for (VertexId w : adj[v])
                    if (fam.color[w] == fam.color[v])
                        return {false, "family coloring improper at trial " +
                                           std::to_string(trial)};
            }
            std::vector<int> sig(r);
            std::map<int, int> first;
            for (int p = 0; p < r; ++p) {
                int col = fam.color[ring[p]];
                if (!first.count(col)) first[col] = p;
                sig[p] = first[col];
            }
            got.insert(sig);
        }
        std::set<std::vector<int>> want = brute_force_partitions(r, s);
        if (got != want)
            return {false, "family mismatch at trial " + std::to_string(trial) + " (got " +
                               std::to_string(got.size()) + ", want " +
                               std::to_string(want.size()) + ")"};
    }
    return {true, std::to_string(x4_runs) + " 4-ring and " + std::to_string(x5_runs) +
                      " 5-ring cases matched the brute-force families"};
}

}  // namespace

int main(int argc, char** argv) {
    bool full = false;
    std::string subset = "all";
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--full") full = true;
        if (arg.rfind("--subset=", 0) == 0) subset = arg.substr(9);
    }

    struct Gate {
        int number;
        std::string name;
        bool published;  // needs the externally published corpora
        std::function<Outcome()> run;
    };
    std::vector<Gate> gates = {
        {1, "low-degree reducibility levels", false, criterion_low_degree_levels},
        {2, "birkhoff / franklin verdicts", false, criterion_birkhoff_franklin},
        {3, "published 50-sample levels", true, criterion_published_sample},
        {3, "published full sweep", true, [&] { return criterion_published_full_sweep(full); }},
        {4, "charge conservation and vertex bound", false, criterion_charge_conservation},
        {5, "icosahedron uniform charge", false, criterion_icosahedron},
        {6, "rule combination vs brute-force oracle", false, criterion_combination_oracle},
        {6, "full unblocked combination (max 8)", true,
         [&] { return criterion_full_unblocked_max8(full); }},
        {7, "full blocked combination (max 5)", true,
         [&] { return criterion_full_blocked_max5(full); }},
        {8, "bad-cartwheel survivor counts", true,
         [&] { return criterion_cartwheel_counts(full); }},
        {9, "cartwheel combination checks", true,
         [&] { return criterion_combination_checks(full); }},
        {10, "planar chain partition cardinalities", false, criterion_catalan},
        {11, "free homomorphism properties", false, criterion_free_homomorphism_properties},
        {12, "four-coloring", false, criterion_coloring},
        {13, "4-ring and 5-ring procedures", false, criterion_ring_procedures},
    };
    int failures = 0;
    for (const Gate& g : gates) {
        if (subset == "local" && g.published) continue;
        if (subset == "published" && !g.published) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = g.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const char* tag = o.skipped ? "SKIP" : (o.pass ? "PASS" : "FAIL");
        std::printf("%s criterion %2d (%s): %s [%.1fs]\n", tag, g.number, g.name.c_str(),
                    o.detail.c_str(), secs);
        if (!o.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
