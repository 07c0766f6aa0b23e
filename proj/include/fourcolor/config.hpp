#pragma once

#include <string>
#include <vector>

#include "fourcolor/hom.hpp"

namespace fourcolor {

struct InvariantViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A configuration stored in completion form: ring vertices come first
/// (ids 0..ring_size-1), configuration vertices follow with their single
/// degrees. Files with ring_size == 0 carry only the configuration graph;
/// parse_config builds the ring for them.
struct Configuration {
    std::string name;
    int32_t n = 0;          // total vertices including the ring
    int32_t ring_size = 0;  // R
    Rotations rotations;    // per vertex, ring first; boundary gap -1
    std::vector<int32_t> delta;  // per configuration vertex (id - ring_size)

    int32_t config_order() const { return n - ring_size; }
    int32_t delta_of(VertexId completion_id) const { return delta[completion_id - ring_size]; }
};

struct FreeCompletion {
    PseudoTriangulation z;
    std::vector<VertexId> ring;  // ring vertex ids in cyclic order: 0..R-1
    int32_t ring_size() const { return static_cast<int32_t>(ring.size()); }
};

/// Parses the grammar: header "N R", then N-R degree lines, then N rotation
/// lines "v: ...". R == 0 files list the bare configuration; the ring is
/// constructed. Validates (Z1)-(Z3). Throws ParseError / InvariantViolationError.
Configuration parse_config(std::istream& in, const std::string& name = "");
Configuration parse_config_text(const std::string& text, const std::string& name = "");
Configuration load_config_file(const std::string& path);
std::string serialize_config(const Configuration& c);

/// All .conf files in a directory, sorted by filename.
std::vector<Configuration> load_config_directory(const std::string& dir);

/// Ring length by the defining formula: sum of external degrees minus the
/// outer-walk length of the configuration graph.
int32_t expected_ring_size(const Configuration& c);

FreeCompletion free_completion(const Configuration& c);

/// Diameter at most 4, plus the distance-4 path condition.
bool check_d0(const Configuration& c);

/// A cut-vertex-free extension with ranges and its special dart.
struct ExtendedConfiguration {
    PseudoConfiguration conf;
    DartId special_dart = kNil;
};

/// Ring vertices adjacent to cut-vertices; throws InvalidConfigurationError
/// when the ring contact pattern contradicts (Z3).
std::vector<std::pair<int32_t, int32_t>> find_cut_pairs(const Configuration& c);

/// The 2^{|P|} cut-vertex extensions, ring removed except the kept auxiliary
/// neighbor ([d+1, inf] range), special dart by lexicographic degree maximum.
std::vector<ExtendedConfiguration> extend_from_cut_vertices(const Configuration& c);

DartId maximum_degree_dart(const PseudoConfiguration& conf);

inline constexpr int kConfDegMax = 12;

/// Extensions of every member plus all mirrors, special darts recomputed.
std::vector<ExtendedConfiguration> build_dbar(const std::vector<Configuration>& set);

/// True iff some member of k maps into the single-degree target with its
/// special dart landing on a degree-matching dart; members with a fixed
/// degree above 8 at the special dart head may only map onto the center.
bool contain_conf(const PseudoConfiguration& target, VertexId center,
                  const std::vector<ExtendedConfiguration>& k);

/// Witness variant: index into k and the homomorphism into target.
struct Containment {
    size_t member;
    Homomorphism phi;
};
std::optional<Containment> contain_conf_witness(const PseudoConfiguration& target,
                                                VertexId center,
                                                const std::vector<ExtendedConfiguration>& k);

/// Representative single-degree expansions: the center keeps its full range
/// only up to kConfDegMax, other vertices up to 8; otherwise just the top.
std::vector<PseudoConfiguration> representative_degree(const PseudoConfiguration& c,
                                                       VertexId center);

/// True iff every representative expansion contains a member of k.
bool blocked_by(const PseudoConfiguration& c, VertexId center,
                const std::vector<ExtendedConfiguration>& k);

}  // namespace fourcolor
