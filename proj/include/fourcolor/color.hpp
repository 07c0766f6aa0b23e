#pragma once

#include <optional>
#include <unordered_map>

#include "fourcolor/embed.hpp"
#include "fourcolor/reduce.hpp"

namespace fourcolor {

struct InvalidInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StuckRingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Coloring {
    std::vector<int> color;  // in {0..3}; -1 = uncolored
};

bool verify_coloring(const EmbeddedTriangulation& g, const Coloring& c);

using Adjacency = std::vector<std::vector<VertexId>>;
Adjacency adjacency_of(const EmbeddedTriangulation& g);

/// Components of the subgraphs induced by the two complementary color pairs
/// {0, pair_id} and its complement; -1 for uncolored vertices.
struct KempeChainIndex {
    std::vector<int32_t> chain;
    int32_t count = 0;
};
KempeChainIndex kempe_chains(const Adjacency& adj, const Coloring& c, int pair_id);

/// Swaps colors inside every selected chain of both pair classes.
void kempe_change(Coloring& c, const KempeChainIndex& idx, const std::vector<char>& swap_chain,
                  int pair_id);

/// The chain on colors {a, b} through x, as a vertex list (x must carry a or b).
std::vector<VertexId> chain_through(const Adjacency& adj, const Coloring& c, VertexId x, int a,
                                    int b);

struct ObstructingCycle {
    std::vector<VertexId> cycle;  // cyclic order; public vertices (if any) last
    int public_count = 0;         // 0..2, consecutive, at the end of `cycle`
};

/// Corpus, rule set and per-member ring tables threaded through coloring.
struct ColorContext {
    std::vector<Configuration> corpus;  // cut-vertex-free D-reducible members
    RuleSet rules;
    std::vector<FreeCompletion> completions;
    std::vector<FreeCompletion> mirrored_completions;
    std::vector<ExtendedConfiguration> dbar;  // extensions and mirrors
    std::vector<size_t> dbar_member;
    std::vector<char> dbar_mirrored;
    std::vector<std::unordered_map<PackedColoring, int>> tables;
    std::vector<std::unordered_map<PackedColoring, int>> mirrored_tables;
};

/// Loads tables (from the optional on-disk cache keyed by canonical form)
/// or computes them; rejects corpus members that are not D-reducible or
/// carry cut-vertices.
ColorContext make_color_context(std::vector<Configuration> corpus, RuleSet rules,
                                const std::string& cache_dir = "");

struct ReducibleInstance {
    size_t member = 0;
    bool mirrored = false;
    std::vector<VertexId> cmap;  // completion vertex -> graph vertex
    int32_t ring_size = 0;

    VertexId ring_vertex(int pos) const { return cmap[pos]; }
    std::vector<VertexId> interior() const {
        return {cmap.begin() + ring_size, cmap.end()};
    }
};

struct ReductionSets {
    std::vector<ReducibleInstance> reducibles;
    std::vector<ObstructingCycle> obstructions;
};

/// Shortest k-local obstructing cycle around v (bounded search over the
/// degree-bounded ball), or nothing.
std::optional<ObstructingCycle> find_local_obstructing_cycle(const EmbeddedTriangulation& g,
                                                             VertexId v, int k);

/// Charge accounting: greedy non-touching selection of positively-charged /
/// high-degree / deep-flat centers, then per center a local obstructing
/// cycle or an embedded corpus member. Low-degree vertices short-circuit as
/// single-vertex reducibles.
ReductionSets find_reduction_sets(const EmbeddedTriangulation& g, const ColorContext& ctx);

/// Batch D-reduction: remove instances, re-triangulate the empty rings,
/// recurse, then rounds of derandomized improving Kempe changes until all
/// rings extend. Throws StuckRingError if a ring coloring falls outside its
/// table (would contradict D-reducibility).
Coloring batch_reduce_and_color(const EmbeddedTriangulation& g,
                                const std::vector<ReducibleInstance>& instances,
                                const ColorContext& ctx, int depth = 0);

/// Case outcome of the 4-/5-ring boundary procedures: the surgery the parent
/// graph applies across the empty ring, plus witness colorings of the disk
/// realizing every coloring family member.
struct RingSurgery {
    enum Kind { kAddEdges, kIdentify, kStar } kind = kAddEdges;
    int j = 0;  // 0-based ring position parameter for kAddEdges / kIdentify
    std::vector<Coloring> family;
};

RingSurgery x4_reduce(const Adjacency& adj, const std::vector<VertexId>& ring, const Coloring& c);
RingSurgery x5_reduce(const Adjacency& adj, const std::vector<VertexId>& ring, const Coloring& c);

Coloring recurse_obstructions(const EmbeddedTriangulation& g,
                              const std::vector<ObstructingCycle>& cycles,
                              const ColorContext& ctx, int depth = 0);

Coloring four_color(const EmbeddedTriangulation& g, const ColorContext& ctx, int depth = 0);

}  // namespace fourcolor
