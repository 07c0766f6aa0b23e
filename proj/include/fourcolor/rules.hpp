#pragma once

#include <string>
#include <vector>

#include "fourcolor/config.hpp"

namespace fourcolor {

/// A discharging rule: ranged near-triangulation carrier, the charge dart
/// (tail sends to head), and the amount sent.
struct Rule {
    std::string name;
    PseudoConfiguration carrier;
    DartId send_dart = kNil;  // tail s, head t
    int32_t charge = 0;
};

/// Ordered rule list with mirror closure applied (mirror added unless
/// isomorphic to the original as a rooted ranged carrier).
struct RuleSet {
    std::vector<Rule> rules;
};

/// Grammar: blocks of
///   rule <name>
///   <n>
///   degrees: d0 d1 ...     (d, d+ for [d,inf], d- for [5,d])
///   <n rotation lines "v: ...">
///   send: <s> <t> <r>
/// Validates: carrier minus any vertex connected, 5 <= lo <= hi, s != t
/// adjacent, r >= 1.
RuleSet parse_rules(std::istream& in);
RuleSet parse_rules_text(const std::string& text);
RuleSet load_rules_file(const std::string& path);
std::string serialize_rules(const RuleSet& rs);

/// Rule application tests on a ranged target, anchored at the target dart.
bool always_applies(const PseudoConfiguration& target, DartId e, const Rule& r);
bool never_applies(const PseudoConfiguration& target, DartId e, const Rule& r);
bool dominantly_applies(const PseudoConfiguration& target, DartId e, const Rule& r);

struct CombinedRule {
    PseudoConfiguration carrier;
    DartId send_dart = kNil;
    int32_t charge = 0;
    std::vector<bool> from_rule;  // flag per RuleSet index
};

/// Sum of charges of rules that always apply to e.
int32_t amount_of_charge_send(const PseudoConfiguration& target, DartId e,
                              const std::vector<Rule>& rules);

/// Maximum combined charge over combinations that do not never-apply to e.
int32_t amount_of_possible_charge_send(const PseudoConfiguration& target, DartId e,
                                       const std::vector<CombinedRule>& combined);

/// Free combinations of base with one more rule, filtered by blocking
/// against k (center = head of the combined dart) when k is nonempty.
std::vector<CombinedRule> add_rule_to_combination(const CombinedRule& base, const Rule& r,
                                                  size_t rule_index,
                                                  const std::vector<ExtendedConfiguration>& k);

/// Neutral two-vertex rule with ranges [1,inf] and charge 0.
CombinedRule neutral_combination(size_t rule_count);

/// Iterative accumulation over the rule set starting from the neutral rule.
/// Combinations blocked by k are dropped as soon as they appear.
std::vector<CombinedRule> combine_rules(const RuleSet& rs,
                                        const std::vector<ExtendedConfiguration>& k,
                                        bool progress = false);

/// De-duplicate combined rules by rooted canonical form of (carrier, dart).
std::vector<CombinedRule> dedup_combined(const std::vector<CombinedRule>& in);

}  // namespace fourcolor
