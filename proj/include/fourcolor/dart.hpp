#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fourcolor {

using VertexId = int32_t;
using DartId = int32_t;
inline constexpr int32_t kNil = -1;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MultipleDartsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RotationDiscrepancyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DisconnectedFromRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dart arena: per-dart head/rev/succ/pred slots, nil encoded as -1.
/// Instances are treated as immutable once built; algorithms that rewrite
/// pointers work on copies.
struct PseudoTriangulation {
    std::vector<VertexId> head;
    std::vector<DartId> rev;
    std::vector<DartId> succ;
    std::vector<DartId> pred;
    int32_t vertex_count = 0;

    int32_t dart_count() const { return static_cast<int32_t>(head.size()); }
    VertexId tail(DartId e) const { return head[rev[e]]; }

    DartId add_dart(VertexId h, DartId r, DartId s, DartId p) {
        head.push_back(h);
        rev.push_back(r);
        succ.push_back(s);
        pred.push_back(p);
        return dart_count() - 1;
    }
};

/// The one-vertex one-dart instance with e = rev(e) = succ(e) = pred(e).
PseudoTriangulation terminal_triangulation();

using Rotations = std::vector<std::vector<int32_t>>;

/// Builds the dart table from per-vertex cyclic neighbor lists; -1 marks a
/// boundary gap. Throws MultipleDartsError / RotationDiscrepancyError.
PseudoTriangulation from_rotations(int32_t n, const Rotations& rotations);

/// Inverse of from_rotations. Refuses multigraph images (parallel darts);
/// callers must fall back to the dart serialization for those.
std::optional<Rotations> to_rotations(const PseudoTriangulation& z);

enum class Requirement { M1, M2, M3, M4, M5, M6 };

struct Violation {
    Requirement requirement;
    // Witness: a dart for (M2)-(M5), a vertex for (M1)/(M6).
    int32_t witness;
};

const char* requirement_name(Requirement r);

/// Empty result iff (M1)-(M6) all hold.
std::vector<Violation> validate(const PseudoTriangulation& z);

/// Swaps succ and pred on every dart.
PseudoTriangulation mirror(const PseudoTriangulation& z);

int degree(const PseudoTriangulation& z, VertexId v);
bool is_boundary_vertex(const PseudoTriangulation& z, VertexId v);
bool is_boundary_dart(const PseudoTriangulation& z, DartId e);

/// First dart of v's incidence list (pred == nil) for boundary vertices,
/// lowest-id dart with head v for inner ones.
DartId first_dart(const PseudoTriangulation& z, VertexId v);
std::vector<DartId> incidence_list(const PseudoTriangulation& z, VertexId v);

/// Breadth-first trace over (rev, succ, pred) links from a root dart with
/// first-visit numbering. Equal traces <=> dart-rooted isomorphism.
/// Throws DisconnectedFromRootError if some dart is unreachable.
std::string canonical_trace(const PseudoTriangulation& z, DartId root);

/// Trace of the component reachable from root only (no connectivity check).
std::string component_trace(const PseudoTriangulation& z, DartId root);

/// True iff a dart-rooted isomorphism exists for some choice of root in z2.
bool isomorphic(const PseudoTriangulation& z1, const PseudoTriangulation& z2);

/// Text serialization: line 1 "N R", then N lines "v: a0 a1 ... ak".
/// R is carried for formats that put a ring first; plain triangulations use 0.
std::string write_rotation_text(const Rotations& rotations, int32_t ring_size = 0);
struct RotationFile {
    int32_t n = 0;
    int32_t ring_size = 0;
    Rotations rotations;
};
RotationFile read_rotation_text(std::istream& in);
RotationFile read_rotation_file(const std::string& path);

/// Dart-level JSON form for images that to_rotations refuses.
std::string write_dart_json(const PseudoTriangulation& z);
PseudoTriangulation read_dart_json(const std::string& text);

/// FNV-1a over the canonical trace; stable across platforms and runs.
uint64_t trace_hash(const std::string& trace);

}  // namespace fourcolor
