#include "fourcolor/rules.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#ifdef FOURCOLOR_OPENMP
#include <omp.h>
#endif

namespace fourcolor {

namespace {

DegreeRange parse_degree_token(const std::string& tok) {
    if (tok.empty()) throw ParseError("empty degree token");
    char suffix = tok.back();
    if (suffix == '+') {
        int d = std::stoi(tok.substr(0, tok.size() - 1));
        return DegreeRange{d, kInfiniteDegree};
    }
    if (suffix == '-') {
        int d = std::stoi(tok.substr(0, tok.size() - 1));
        return DegreeRange{5, d};
    }
    int d = std::stoi(tok);
    return DegreeRange{d, d};
}

std::string degree_token(DegreeRange r) {
    if (r.single()) return std::to_string(r.lo);
    if (r.hi == kInfiniteDegree) return std::to_string(r.lo) + "+";
    return std::to_string(r.hi) + "-";
}

void validate_rule(const Rule& r) {
    const PseudoTriangulation& z = r.carrier.z;
    if (r.charge < 1) throw InvariantViolationError("rule " + r.name + ": charge must be >= 1");
    if (r.send_dart < 0 || r.send_dart >= z.dart_count())
        throw InvariantViolationError("rule " + r.name + ": send dart out of range");
    if (z.head[r.send_dart] == z.tail(r.send_dart))
        throw InvariantViolationError("rule " + r.name + ": send endpoints must differ");
    for (VertexId v = 0; v < z.vertex_count; ++v) {
        const DegreeRange dr = r.carrier.range[v];
        if (dr.lo < 5 || dr.lo > dr.hi)
            throw InvariantViolationError("rule " + r.name + ": degree range must satisfy 5 <= lo <= hi");
    }
    if (!validate(z).empty())
        throw InvariantViolationError("rule " + r.name + ": carrier is not a pseudo-triangulation");
    // G(R) - v connected for every v.
    std::vector<std::vector<VertexId>> adj(z.vertex_count);
    for (DartId e = 0; e < z.dart_count(); ++e) adj[z.head[e]].push_back(z.tail(e));
    for (VertexId skip = 0; skip < z.vertex_count; ++skip) {
        if (z.vertex_count <= 2) break;
        std::vector<char> seen(z.vertex_count, 0);
        seen[skip] = 1;
        VertexId start = skip == 0 ? 1 : 0;
        std::vector<VertexId> stack{start};
        seen[start] = 1;
        int count = 1;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (VertexId w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
        }
        if (count != z.vertex_count - 1)
            throw InvariantViolationError("rule " + r.name + ": carrier minus vertex " +
                                          std::to_string(skip) + " is disconnected");
    }
}

std::string rooted_rule_trace(const PseudoConfiguration& carrier, DartId dart) {
    return canonical_trace(carrier, dart);
}

}  // namespace

RuleSet parse_rules(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.find('#');
        if (pos != std::string::npos) line.erase(pos);
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) lines.push_back(line);
    }
    size_t at = 0;
    auto next_line = [&]() -> const std::string& {
        if (at >= lines.size()) throw ParseError("unexpected end of rule file");
        return lines[at++];
    };
    RuleSet rs;
    while (at < lines.size()) {
        std::istringstream hs(next_line());
        std::string kw, name;
        if (!(hs >> kw >> name) || kw != "rule") throw ParseError("expected \"rule <name>\"");
        Rule r;
        r.name = name;
        int32_t n;
        {
            std::istringstream ns(next_line());
            if (!(ns >> n) || n < 2) throw ParseError("bad vertex count in rule " + name);
        }
        {
            std::istringstream ds(next_line());
            std::string kw2;
            if (!(ds >> kw2) || kw2 != "degrees:") throw ParseError("expected degrees: line");
            std::string tok;
            while (ds >> tok) r.carrier.range.push_back(parse_degree_token(tok));
            if (static_cast<int32_t>(r.carrier.range.size()) != n)
                throw ParseError("degree count mismatch in rule " + name);
        }
        Rotations rot(n);
        for (int32_t i = 0; i < n; ++i) {
            const std::string& rline = next_line();
            auto colon = rline.find(':');
            if (colon == std::string::npos) throw ParseError("rotation line missing ':'");
            int32_t v;
            {
                std::istringstream vs(rline.substr(0, colon));
                if (!(vs >> v) || v < 0 || v >= n) throw ParseError("bad vertex id in rule " + name);
            }
            std::istringstream as(rline.substr(colon + 1));
            int32_t a;
            while (as >> a) rot[v].push_back(a);
        }
        r.carrier.z = from_rotations(n, rot);
        {
            std::istringstream ss(next_line());
            std::string kw3;
            int32_t s, t, charge;
            if (!(ss >> kw3 >> s >> t >> charge) || kw3 != "send:")
                throw ParseError("expected send: line in rule " + name);
            r.send_dart = kNil;
            for (DartId e = 0; e < r.carrier.z.dart_count(); ++e)
                if (r.carrier.z.head[e] == t && r.carrier.z.tail(e) == s) r.send_dart = e;
            if (r.send_dart == kNil)
                throw ParseError("send edge not present in rule " + name);
            r.charge = charge;
        }
        validate_rule(r);
        // Mirror closure: append the reflected variant unless isomorphic.
        Rule mirrored;
        mirrored.name = r.name + "m";
        mirrored.carrier.z = mirror(r.carrier.z);
        mirrored.carrier.range = r.carrier.range;
        mirrored.send_dart = r.send_dart;
        mirrored.charge = r.charge;
        bool symmetric = rooted_rule_trace(r.carrier, r.send_dart) ==
                         rooted_rule_trace(mirrored.carrier, mirrored.send_dart);
        rs.rules.push_back(std::move(r));
        if (!symmetric) rs.rules.push_back(std::move(mirrored));
    }
    return rs;
}

RuleSet parse_rules_text(const std::string& text) {
    std::istringstream in(text);
    return parse_rules(in);
}

RuleSet load_rules_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_rules(in);
}

std::string serialize_rules(const RuleSet& rs) {
    std::ostringstream os;
    for (const Rule& r : rs.rules) {
        if (r.name.size() > 1 && r.name.back() == 'm') continue;  // mirrors are derived
        os << "rule " << r.name << '\n' << r.carrier.z.vertex_count << '\n';
        os << "degrees:";
        for (const DegreeRange& dr : r.carrier.range) os << ' ' << degree_token(dr);
        os << '\n';
        auto rot = to_rotations(r.carrier.z);
        if (!rot) throw InvariantViolationError("rule carrier not rotation-representable");
        for (size_t v = 0; v < rot->size(); ++v) {
            os << v << ':';
            for (int32_t a : (*rot)[v]) os << ' ' << a;
            os << '\n';
        }
        os << "send: " << r.carrier.z.tail(r.send_dart) << ' ' << r.carrier.z.head[r.send_dart]
           << ' ' << r.charge << '\n';
    }
    return os.str();
}

bool always_applies(const PseudoConfiguration& target, DartId e, const Rule& r) {
    return homomorphism(r.carrier, r.send_dart, target, e, RangePredicate::kInclude).has_value();
}

bool never_applies(const PseudoConfiguration& target, DartId e, const Rule& r) {
    return !homomorphism(r.carrier, r.send_dart, target, e, RangePredicate::kIntersect).has_value();
}

bool dominantly_applies(const PseudoConfiguration& target, DartId e, const Rule& r) {
    return homomorphism(r.carrier, r.send_dart, target, e, RangePredicate::kDominant).has_value();
}

int32_t amount_of_charge_send(const PseudoConfiguration& target, DartId e,
                              const std::vector<Rule>& rules) {
    int32_t a = 0;
    for (const Rule& r : rules)
        if (always_applies(target, e, r)) a += r.charge;
    return a;
}

int32_t amount_of_possible_charge_send(const PseudoConfiguration& target, DartId e,
                                       const std::vector<CombinedRule>& combined) {
    int32_t a = 0;
    for (const CombinedRule& r : combined) {
        if (r.charge <= a) continue;
        if (homomorphism(r.carrier, r.send_dart, target, e, RangePredicate::kIntersect))
            a = r.charge;
    }
    return a;
}

CombinedRule neutral_combination(size_t rule_count) {
    CombinedRule r0;
    r0.carrier.z = from_rotations(2, {{1, -1}, {0, -1}});
    r0.carrier.range = {DegreeRange{1, kInfiniteDegree}, DegreeRange{1, kInfiniteDegree}};
    for (DartId e = 0; e < 2; ++e)
        if (r0.carrier.z.head[e] == 1) r0.send_dart = e;  // dart s0 -> t0
    r0.charge = 0;
    r0.from_rule.assign(rule_count, false);
    return r0;
}

std::vector<CombinedRule> add_rule_to_combination(const CombinedRule& base, const Rule& r,
                                                  size_t rule_index,
                                                  const std::vector<ExtendedConfiguration>& k) {
    PseudoConfiguration u = disjoint_union(base.carrier, r.carrier);
    const DartId base_dart = base.send_dart;
    const DartId rule_dart = r.send_dart + base.carrier.z.dart_count();
    std::vector<CombinedRule> out;
    for (ConfigurationImage& img : free_homomorphism_configuration(u, {{base_dart, rule_dart}})) {
        CombinedRule c;
        c.send_dart = img.phi.dart_map[base_dart];
        c.charge = base.charge + r.charge;
        c.from_rule = base.from_rule;
        if (rule_index < c.from_rule.size()) c.from_rule[rule_index] = true;
        c.carrier = std::move(img.conf);
        if (!k.empty() &&
            blocked_by(c.carrier, c.carrier.z.head[c.send_dart], k))
            continue;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<CombinedRule> combine_rules(const RuleSet& rs,
                                        const std::vector<ExtendedConfiguration>& k,
                                        bool progress) {
    std::vector<CombinedRule> acc{neutral_combination(rs.rules.size())};
    for (size_t i = 0; i < rs.rules.size(); ++i) {
        const Rule& r = rs.rules[i];
        std::vector<std::vector<CombinedRule>> fresh(acc.size());
#ifdef FOURCOLOR_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (size_t j = 0; j < acc.size(); ++j)
            fresh[j] = add_rule_to_combination(acc[j], r, i, k);
        size_t before = acc.size();
        for (auto& batch : fresh)
            for (auto& c : batch) acc.push_back(std::move(c));
        if (progress)
            std::cerr << "rule " << r.name << ": " << before << " -> " << acc.size()
                      << " combinations\n";
    }
    return acc;
}

std::vector<CombinedRule> dedup_combined(const std::vector<CombinedRule>& in) {
    std::set<std::string> seen;
    std::vector<CombinedRule> out;
    for (const CombinedRule& c : in) {
        std::string tr = canonical_trace(c.carrier, c.send_dart);
        if (seen.insert(tr).second) out.push_back(c);
    }
    return out;
}

}  // namespace fourcolor
