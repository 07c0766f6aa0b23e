#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "fourcolor/dart.hpp"

namespace fourcolor {

inline constexpr int32_t kInfiniteDegree = std::numeric_limits<int32_t>::max();

struct DegreeRange {
    int32_t lo = 1;
    int32_t hi = kInfiniteDegree;

    bool single() const { return lo == hi; }
    bool operator==(const DegreeRange&) const = default;
};

inline std::optional<DegreeRange> intersect(DegreeRange a, DegreeRange b) {
    DegreeRange r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (r.lo > r.hi) return std::nullopt;
    return r;
}

/// Loop-free pseudo-triangulation plus per-vertex degree ranges.
struct PseudoConfiguration {
    PseudoTriangulation z;
    std::vector<DegreeRange> range;

    bool single_degrees() const {
        for (const auto& r : range)
            if (!r.single()) return false;
        return true;
    }
};

/// Empty report iff the instance satisfies the pseudo-configuration
/// range discipline: inner v fixed at its degree, boundary v with lo > degree.
std::vector<std::string> validate_ranges(const PseudoConfiguration& c);

struct Homomorphism {
    std::vector<VertexId> vertex_map;
    std::vector<DartId> dart_map;
};

struct DomainMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// second after first (pointwise). Throws DomainMismatchError on size clash.
Homomorphism compose(const Homomorphism& second, const Homomorphism& first);

Homomorphism identity_homomorphism(int32_t vertices, int32_t darts);

/// Independent full re-check of the four link-preservation conditions.
bool check_homomorphism(const PseudoTriangulation& src, const PseudoTriangulation& dst,
                        const Homomorphism& phi);

enum class RangePredicate {
    kInclude,    // src range contains dst range
    kIntersect,  // ranges intersect
    kDominant,   // ranges intersect and (src hi infinite or dst hi < 9)
};

bool range_predicate(RangePredicate g, DegreeRange src, DegreeRange dst);

/// The unique homomorphism mapping e to e_star and satisfying g on every
/// mapped vertex pair, or nullopt. src must be connected from e.
std::optional<Homomorphism> homomorphism(const PseudoConfiguration& src, DartId e,
                                         const PseudoConfiguration& dst, DartId e_star,
                                         RangePredicate g);

using IdentificationRequest = std::vector<std::pair<DartId, DartId>>;

struct TriangulationImage {
    PseudoTriangulation z;
    Homomorphism phi;
};

/// Minimal homomorphic image respecting the identification requests.
/// Always succeeds; union-find with the directed unite (root of x under
/// root of y) the pointer-inheritance rules rely on.
TriangulationImage free_homomorphism_triangulation(const PseudoTriangulation& z,
                                                   const IdentificationRequest& requests);

struct ConfigurationImage {
    PseudoConfiguration conf;
    Homomorphism phi;
};

enum class IdentificationError { kLoop, kDegreeMismatch };

/// Identifies darts, then intersects ranges over each merged vertex class.
std::optional<ConfigurationImage> dart_identification(const PseudoConfiguration& c,
                                                      const IdentificationRequest& requests,
                                                      IdentificationError* error = nullptr);

/// Tallies of silently dropped branches, for debugging only.
struct ResolveStats {
    int64_t inner_subdegree = 0;
    int64_t identification = 0;  // loop or degree mismatch during a fix
    int64_t boundary = 0;
};

/// Worklist resolution of degree issues: inner sub-degree branches dropped,
/// single-degree issues fixed by dart identification or boundary-dart
/// addition, ranges subdivided at [lo,lo] / [lo+1,hi]. Returns the issue-free
/// survivors with composed homomorphisms.
std::vector<ConfigurationImage> resolve_degree_issues(const PseudoConfiguration& c,
                                                      ResolveStats* stats = nullptr);

/// dart_identification then resolve_degree_issues; empty set on error.
std::vector<ConfigurationImage> free_homomorphism_configuration(
    const PseudoConfiguration& c, const IdentificationRequest& requests);

/// Disjoint union; darts/vertices of b are shifted by a's counts.
PseudoConfiguration disjoint_union(const PseudoConfiguration& a, const PseudoConfiguration& b);

/// Canonical trace that also folds in the degree ranges (vertex-first-visit
/// order); used for de-duplication of ranged carriers.
std::string canonical_trace(const PseudoConfiguration& c, DartId root);
bool isomorphic(const PseudoConfiguration& a, const PseudoConfiguration& b);

}  // namespace fourcolor
