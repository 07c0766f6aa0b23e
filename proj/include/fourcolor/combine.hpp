#pragma once

#include "fourcolor/cartwheel.hpp"

namespace fourcolor {

/// Per-check outcome with reproducible witnesses on failure.
struct CombineReport {
    struct Failure {
        std::string what;
        std::string witness;  // serialized pseudo-configuration
    };
    std::vector<Failure> failures;
    int64_t combinations_checked = 0;
    bool passed() const { return failures.empty(); }
};

/// Drops cartwheels with a fixed-degree-k vertex; [k-1,9] tails collapse to
/// the fixed degree k-1.
std::vector<PseudoConfiguration> delete_degree_from_k_to_9(
    const std::vector<PseudoConfiguration>& set, int32_t k);

struct CombinedImage {
    PseudoConfiguration conf;
    Homomorphism phi;  // restricted to the original configuration
};

/// Free combinations of the configuration with every member of `wheels`
/// along every center dart, keeping images not blocked by `blockers`.
/// strict_center anchors the blocking check at the image of the first
/// operand's center (vertex 0); otherwise an arbitrary image vertex is used.
std::vector<CombinedImage> combine_each_cartwheel(
    const PseudoConfiguration& conf, DartId e, const std::vector<PseudoConfiguration>& wheels,
    const std::vector<ExtendedConfiguration>& blockers, bool strict_center = true);

/// Two sequential combinations; the first stage always filters by dbar.
std::vector<CombinedImage> combine_each_cartwheel_twice(
    const PseudoConfiguration& conf, DartId e1, DartId e2,
    const std::vector<PseudoConfiguration>& wheels,
    const std::vector<ExtendedConfiguration>& dbar,
    const std::vector<ExtendedConfiguration>& blockers);

/// True iff the configuration embeds `x` with `v` playing x's degree-8
/// central vertex, over the eight rotations of the anchor dart.
bool contain_x(const PseudoConfiguration& conf, VertexId v, const Configuration& x);

/// Degree-8 centers: 8-8 and unique-8-7 combinations must be blocked;
/// minimal-distance 7-8-7 double combinations must contain x at the center.
CombineReport check_deg8(const std::vector<PseudoConfiguration>& all,
                         const std::vector<ExtendedConfiguration>& dbar, const Configuration& x);

/// Adjacent degree-7 pairs around degree-7 centers: all double combinations
/// blocked.
CombineReport check_7triangle(const std::vector<PseudoConfiguration>& all,
                              const std::vector<ExtendedConfiguration>& dbar);

/// Degree-7 centers with the triangle of three degree-7 vertices joining the
/// blockers.
CombineReport check_deg7(const std::vector<PseudoConfiguration>& all,
                         const std::vector<ExtendedConfiguration>& dbar);

/// The facial triangle with all three degrees 7, as a blocking member.
ExtendedConfiguration t73_member();
Configuration t73_configuration();

}  // namespace fourcolor
