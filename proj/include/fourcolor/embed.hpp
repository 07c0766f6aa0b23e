#pragma once

#include <string>
#include <vector>

#include "fourcolor/hom.hpp"
#include "fourcolor/rules.hpp"

namespace fourcolor {

struct NotATriangulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sphere triangulation given by its rotation system; all vertices inner.
struct EmbeddedTriangulation {
    Rotations rot;

    int32_t n() const { return static_cast<int32_t>(rot.size()); }
    int degree(VertexId v) const { return static_cast<int>(rot[v].size()); }
    bool adjacent(VertexId u, VertexId v) const;
    int64_t edge_count() const;
};

/// Empty iff the rotation system is a simple sphere triangulation: neighbor
/// lists are duplicate-free, orientations agree across edges, and every
/// corner closes a triangle.
std::vector<std::string> validate_triangulation(const EmbeddedTriangulation& g);

EmbeddedTriangulation read_triangulation(const std::string& path);
std::string write_triangulation(const EmbeddedTriangulation& g);

/// All vertices inner, ranges fixed at the degrees.
PseudoConfiguration to_pseudo_configuration(const EmbeddedTriangulation& g);

struct ChargeLedger {
    PseudoTriangulation z;        // dart representation of the triangulation
    std::vector<int32_t> initial;  // 10 * (6 - d(v))
    std::vector<int32_t> final_charge;
    std::vector<int32_t> sent;  // per dart: charge sent tail -> head
    int64_t total() const;
};

/// phi(u,v) per ordered edge by rooted rule application, T per vertex.
/// The parallel version splits the per-dart loop over OpenMP threads; the
/// serial version is the reference the tests compare against.
ChargeLedger charge_ledger(const EmbeddedTriangulation& g, const RuleSet& rules);
ChargeLedger charge_ledger_serial(const EmbeddedTriangulation& g, const RuleSet& rules);

}  // namespace fourcolor
