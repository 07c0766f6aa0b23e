#pragma once

#include <array>
#include <map>

#include "fourcolor/rules.hpp"

namespace fourcolor {

struct AssertionFailureError : std::runtime_error {
    std::string witness;  // serialized cartwheel
    AssertionFailureError(const std::string& msg, std::string w)
        : std::runtime_error(msg), witness(std::move(w)) {}
};

inline constexpr std::array<int32_t, 5> kCartwheelDegrees{5, 6, 7, 8, 9};

/// Free cartwheel carrier: vertex 0 is the center, 1..d its neighbors,
/// second neighbors carry tail ranges [5,9].
PseudoConfiguration generate_cartwheel(int32_t d, const std::vector<int32_t>& degrees);

/// One representative per rotation class of neighbor degree words.
std::vector<PseudoConfiguration> enum_wheels(int32_t d);

/// Inputs threaded through the enumeration.
struct CartwheelInputs {
    const RuleSet* rules = nullptr;
    const std::vector<CombinedRule>* combined = nullptr;  // not blocked by dbar
    const std::vector<ExtendedConfiguration>* dbar = nullptr;
};

/// Dart from neighbor j into the center (head 0), and the reverse.
DartId inbound_dart(const PseudoConfiguration& c, VertexId neighbor);
DartId outbound_dart(const PseudoConfiguration& c, VertexId neighbor);

/// Center darts grouped by the tail's (fixed) degree, cyclic order.
std::array<std::vector<DartId>, 10> center_darts_by_degree(const PseudoConfiguration& c);

struct AssignedCartwheel {
    PseudoConfiguration conf;
    std::vector<size_t> in_rules;  // combined-rule index per neighbor 1..i
};

int32_t upper_bound_of_charge(const PseudoConfiguration& c, const std::vector<size_t>& assigned,
                              const CartwheelInputs& in);

/// True = cut: a non-associated rule always applies, the charge bound is
/// negative, or the carrier is blocked.
bool prune_cartwheel(const PseudoConfiguration& c, const std::vector<size_t>& assigned,
                     const CartwheelInputs& in);

std::vector<PseudoConfiguration> enum_possible_bad_wheels(int32_t d, const CartwheelInputs& in);

std::vector<PseudoConfiguration> concrete_degrees_except_tail(const PseudoConfiguration& c);

std::vector<PseudoConfiguration> update_degree_by_rule(const PseudoConfiguration& c, DartId e,
                                                       const CombinedRule& r);

std::vector<AssignedCartwheel> fix_in_rules(const PseudoConfiguration& c0,
                                            const CartwheelInputs& in);

std::vector<AssignedCartwheel> fix_out_rules(std::vector<AssignedCartwheel> pending,
                                             const CartwheelInputs& in);

/// Full pipeline for one initial wheel; checks the three survivor assertions
/// (charge bound exactly zero, center degree 7 or 8, a center dart with tail
/// degree above 6) and throws AssertionFailureError with a witness.
std::vector<PseudoConfiguration> enum_bad_cartwheels(const PseudoConfiguration& c0,
                                                     const CartwheelInputs& in,
                                                     bool check_assertions = true);

/// Cartwheel file payload (dart arena, ranges, center marker).
std::string write_cartwheel(const PseudoConfiguration& c, VertexId center = 0);
std::pair<PseudoConfiguration, VertexId> read_cartwheel(const std::string& text);
std::vector<PseudoConfiguration> load_cartwheel_directory(const std::string& dir);

struct EnumerationSummary {
    std::map<int32_t, int64_t> survivors_by_degree;
    int64_t wheels = 0;
    int64_t pruned_wheels = 0;
    std::vector<std::string> files;
};

/// Parallel over initial wheels; survivors persisted one file per cartwheel
/// named by canonical-form hash. Assertion failures abort with the witness
/// written next to the outputs.
EnumerationSummary enum_all_bad_cartwheels(const std::vector<int32_t>& degrees,
                                           const CartwheelInputs& in, const std::string& out_dir,
                                           bool check_assertions = true);

}  // namespace fourcolor
