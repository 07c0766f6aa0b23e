#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "fourcolor/config.hpp"

namespace fourcolor {

struct OddLengthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A ring coloring packed 2 bits per position, position 0 in the low bits.
using PackedColoring = uint64_t;

inline int color_at(PackedColoring c, int pos) { return (c >> (2 * pos)) & 3; }
inline PackedColoring with_color(PackedColoring c, int pos, int color) {
    return (c & ~(PackedColoring{3} << (2 * pos))) | (PackedColoring(color) << (2 * pos));
}

/// One partition of an even contracted cycle: class label per position,
/// derived from a matching-parentheses string via the stack labeling.
using ChainPartition = std::vector<uint8_t>;

/// All partitions for an even cycle length; cardinality Catalan(n/2).
/// Throws OddLengthError for odd n.
const std::vector<ChainPartition>& all_planar_kempe_chains(int n);

/// All 4-colorings of the ring extendible to proper colorings of the
/// completion (depth-first over the completion's vertices).
std::vector<PackedColoring> all_ring_colorings(const FreeCompletion& fc);

/// A full witness coloring of the completion extending one ring coloring,
/// or empty if none.
std::vector<int> extend_ring_coloring(const FreeCompletion& fc, PackedColoring ring);

struct ReducibilityResult {
    bool d_reducible = false;
    int max_level = 0;
    int ring_size = 0;
    int64_t proper_colorings = 0;
    int64_t classified = 0;
    std::vector<PackedColoring> stuck;  // sample of unclassified colorings
};

/// Scan-order knob: permuted color pairs and per-round shuffling of the
/// pending list. The classified set must not depend on it.
struct ReducibilityScanOrder {
    std::array<int, 3> pair_order{1, 2, 3};
    uint64_t shuffle_seed = 0;  // 0 = keep enumeration order
};

/// Fixed point over unclassified ring colorings; classifies a coloring when
/// some color pair makes every chain partition admit a flip landing in the
/// classified set. Optionally reports each coloring's level.
ReducibilityResult check_d_reducibility(
    const FreeCompletion& fc,
    std::function<void(PackedColoring, int)> level_sink = nullptr,
    const ReducibilityScanOrder& order = {});

ReducibilityResult check_d_reducibility(const Configuration& c);

/// All proper colorings of a cycle of the given length.
std::vector<PackedColoring> proper_ring_colorings(int length);

}  // namespace fourcolor
