#pragma once

#include <cstdint>

#include "fourcolor/embed.hpp"

namespace fourcolor {

EmbeddedTriangulation tetrahedron();
EmbeddedTriangulation octahedron();
EmbeddedTriangulation icosahedron();

/// Random stacked triangulation: repeated insertion of a degree-3 vertex
/// into a uniformly random face of the current triangulation.
EmbeddedTriangulation random_apollonian(int32_t n, uint64_t seed);

/// Stacked triangulation mixed by random diagonal flips (flips that keep
/// the graph simple). flips < 0 picks 2n flips.
EmbeddedTriangulation random_triangulation(int32_t n, uint64_t seed, int64_t flips = -1);

}  // namespace fourcolor
