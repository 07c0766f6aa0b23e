#include "fourcolor/reduce.hpp"

#include <algorithm>
#include <random>
#include <map>
#include <unordered_map>

namespace fourcolor {

namespace {

void gen_parens(int open, int close, int n, std::string& cur, std::vector<std::string>& out) {
    if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
    }
    if (open < n / 2) {
        cur.push_back('(');
        gen_parens(open + 1, close, n, cur, out);
        cur.pop_back();
    }
    if (close < open) {
        cur.push_back(')');
        gen_parens(open, close + 1, n, cur, out);
        cur.pop_back();
    }
}

}  // namespace

const std::vector<ChainPartition>& all_planar_kempe_chains(int n) {
    if (n < 0 || n % 2 != 0) throw OddLengthError("cycle length must be even");
    static std::map<int, std::vector<ChainPartition>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<ChainPartition> result;
    std::vector<std::string> parens;
    std::string cur;
    gen_parens(0, 0, n, cur, parens);
    for (const std::string& s : parens) {
        // Stack of region labels, seeded with the outer region 0. An opening
        // arc starts a fresh chain; a closing arc rejoins the chain of the
        // enclosing region.
        ChainPartition labels;
        std::vector<uint8_t> stack{0};
        uint8_t c = 1;
        for (char ch : s) {
            if (ch == '(') {
                stack.push_back(c);
                labels.push_back(c);
                ++c;
            } else {
                stack.pop_back();
                labels.push_back(stack.back());
            }
        }
        result.push_back(std::move(labels));
    }
    return cache.emplace(n, std::move(result)).first->second;
}

namespace {

struct CompletionAdjacency {
    std::vector<std::vector<VertexId>> adj;
    std::vector<VertexId> order;     // DFS order: interior first, ring last
    std::vector<int> ring_position;  // -1 for interior vertices
};

CompletionAdjacency completion_adjacency(const FreeCompletion& fc) {
    CompletionAdjacency out;
    int n = fc.z.vertex_count;
    out.adj.assign(n, {});
    std::vector<std::vector<char>> seen(n, std::vector<char>(n, 0));
    for (DartId e = 0; e < fc.z.dart_count(); ++e) {
        VertexId h = fc.z.head[e], t = fc.z.tail(e);
        if (!seen[h][t]) {
            seen[h][t] = 1;
            out.adj[h].push_back(t);
        }
    }
    out.ring_position.assign(n, -1);
    for (size_t i = 0; i < fc.ring.size(); ++i) out.ring_position[fc.ring[i]] = (int)i;
    for (VertexId v = 0; v < n; ++v)
        if (out.ring_position[v] < 0) out.order.push_back(v);
    for (VertexId r : fc.ring) out.order.push_back(r);
    return out;
}

void color_dfs(const CompletionAdjacency& ca, size_t i, std::vector<int>& colors,
               const std::function<bool(const std::vector<int>&)>& leaf) {
    if (i == ca.order.size()) {
        if (!leaf(colors)) return;
        return;
    }
    VertexId v = ca.order[i];
    for (int c = 0; c < 4; ++c) {
        bool ok = true;
        for (VertexId w : ca.adj[v]) {
            if (colors[w] == c) {
                ok = false;
                break;
            }
        }
        if (ok) {
            colors[v] = c;
            color_dfs(ca, i + 1, colors, leaf);
            colors[v] = -1;
        }
    }
}

}  // namespace

std::vector<PackedColoring> all_ring_colorings(const FreeCompletion& fc) {
    CompletionAdjacency ca = completion_adjacency(fc);
    std::vector<int> colors(fc.z.vertex_count, -1);
    std::vector<PackedColoring> out;
    std::vector<char> seen;  // indexed when ring small, else fall back to sort
    const int r = fc.ring_size();
    const bool direct = r <= 13;
    if (direct) seen.assign(size_t{1} << (2 * r), 0);
    color_dfs(ca, 0, colors, [&](const std::vector<int>& full) {
        PackedColoring pc = 0;
        for (int i = 0; i < r; ++i) pc |= PackedColoring(full[fc.ring[i]]) << (2 * i);
        if (direct) {
            if (!seen[pc]) {
                seen[pc] = 1;
                out.push_back(pc);
            }
        } else {
            out.push_back(pc);
        }
        return true;
    });
    if (!direct) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> extend_ring_coloring(const FreeCompletion& fc, PackedColoring ring) {
    CompletionAdjacency ca = completion_adjacency(fc);
    std::vector<int> colors(fc.z.vertex_count, -1);
    for (int i = 0; i < fc.ring_size(); ++i) colors[fc.ring[i]] = color_at(ring, i);
    // Interior vertices only (ring fixed): reuse the DFS order's prefix.
    std::vector<VertexId> interior;
    for (VertexId v : ca.order)
        if (ca.ring_position[v] < 0) interior.push_back(v);
    std::vector<int> result;
    std::function<bool(size_t)> dfs = [&](size_t i) -> bool {
        if (i == interior.size()) {
            result = colors;
            return true;
        }
        VertexId v = interior[i];
        for (int c = 0; c < 4; ++c) {
            bool ok = true;
            for (VertexId w : ca.adj[v])
                if (colors[w] == c) {
                    ok = false;
                    break;
                }
            if (ok) {
                colors[v] = c;
                if (dfs(i + 1)) return true;
                colors[v] = -1;
            }
        }
        return false;
    };
    dfs(0);
    return result;
}

std::vector<PackedColoring> proper_ring_colorings(int length) {
    std::vector<PackedColoring> out;
    std::vector<int> colors(length, -1);
    std::function<void(int)> dfs = [&](int i) {
        if (i == length) {
            if (colors[length - 1] == colors[0]) return;
            PackedColoring pc = 0;
            for (int j = 0; j < length; ++j) pc |= PackedColoring(colors[j]) << (2 * j);
            out.push_back(pc);
            return;
        }
        for (int c = 0; c < 4; ++c) {
            if (i > 0 && colors[i - 1] == c) continue;
            colors[i] = c;
            dfs(i + 1);
        }
        colors[i] = -1;
    };
    if (length > 0) dfs(0);
    return out;
}

namespace {

// Level store: flat array for small rings, hash map beyond.
class LevelStore {
  public:
    explicit LevelStore(int ring) : ring_(ring), direct_(ring <= 13) {
        if (direct_) flat_.assign(size_t{1} << (2 * ring), -1);
    }
    int get(PackedColoring c) const {
        if (direct_) return flat_[c];
        auto it = map_.find(c);
        return it == map_.end() ? -1 : it->second;
    }
    void set(PackedColoring c, int level) {
        if (direct_)
            flat_[c] = static_cast<int16_t>(level);
        else
            map_[c] = static_cast<int16_t>(level);
    }

  private:
    int ring_;
    bool direct_;
    std::vector<int16_t> flat_;
    std::unordered_map<PackedColoring, int16_t> map_;
};

}  // namespace

ReducibilityResult check_d_reducibility(const FreeCompletion& fc,
                                        std::function<void(PackedColoring, int)> level_sink,
                                        const ReducibilityScanOrder& order) {
    ReducibilityResult res;
    const int r = fc.ring_size();
    res.ring_size = r;
    LevelStore levels(r);

    std::vector<PackedColoring> extendible = all_ring_colorings(fc);
    for (PackedColoring c : extendible) {
        levels.set(c, 0);
        if (level_sink) level_sink(c, 0);
    }
    res.classified = static_cast<int64_t>(extendible.size());

    std::vector<PackedColoring> pending;
    for (PackedColoring c : proper_ring_colorings(r))
        if (levels.get(c) < 0) pending.push_back(c);
    res.proper_colorings = res.classified + static_cast<int64_t>(pending.size());

    std::mt19937_64 shuffle_rng(order.shuffle_seed);
    int round = 0;
    while (!pending.empty()) {
        ++round;
        if (order.shuffle_seed != 0) std::shuffle(pending.begin(), pending.end(), shuffle_rng);
        std::vector<PackedColoring> next;
        std::vector<PackedColoring> classified_this_round;
        bool updated = false;
        for (PackedColoring phi : pending) {
            bool classified = false;
            for (int pair_index = 0; pair_index < 3 && !classified; ++pair_index) {
                int pair_id = order.pair_order[pair_index];
                // Contract ring edges whose endpoints lie on the same side of
                // the color pair {0, pair_id}.
                auto side = [&](int pos) {
                    int c = color_at(phi, pos);
                    return (c == 0 || c == pair_id) ? 0 : 1;
                };
                // Arc id per position (arcs = maximal same-side runs, cyclic).
                std::vector<int> arc(r, -1);
                int arcs = 0;
                {
                    int start = 0;
                    while (start < r && side((start + r - 1) % r) == side(start)) ++start;
                    if (start == r) {
                        // Uniform side: a single arc.
                        std::fill(arc.begin(), arc.end(), 0);
                        arcs = 1;
                    } else {
                        int cur = -1;
                        for (int k = 0; k < r; ++k) {
                            int pos = (start + k) % r;
                            if (k == 0 || side(pos) != side((start + k - 1 + r) % r)) ++cur;
                            arc[pos] = cur;
                        }
                        arcs = cur + 1;
                    }
                }
                // XOR mask per arc: flipping an arc toggles each position's
                // color by pair_id.
                std::vector<PackedColoring> arc_mask(arcs, 0);
                for (int pos = 0; pos < r; ++pos)
                    arc_mask[arc[pos]] |= PackedColoring(pair_id) << (2 * pos);

                bool all_partitions_ok = true;
                auto feasible = [&](const std::vector<PackedColoring>& class_masks) {
                    // Gray-code walk over subsets of classes.
                    PackedColoring psi = phi;
                    size_t k = class_masks.size();
                    if (levels.get(psi) >= 0) return true;
                    uint32_t prev = 0;
                    for (uint32_t s = 1; s < (uint32_t{1} << k); ++s) {
                        uint32_t gray = s ^ (s >> 1);
                        uint32_t diff = gray ^ prev;
                        prev = gray;
                        int bit = __builtin_ctz(diff);
                        psi ^= class_masks[bit];
                        if (levels.get(psi) >= 0) return true;
                    }
                    return false;
                };
                if (arcs == 1) {
                    all_partitions_ok = feasible({arc_mask[0]});
                } else {
                    for (const ChainPartition& p : all_planar_kempe_chains(arcs)) {
                        uint8_t max_label = *std::max_element(p.begin(), p.end());
                        std::vector<PackedColoring> by_label(max_label + 1, 0);
                        std::vector<char> used(max_label + 1, 0);
                        for (int a = 0; a < arcs; ++a) {
                            by_label[p[a]] ^= arc_mask[a];
                            used[p[a]] = 1;
                        }
                        std::vector<PackedColoring> class_masks;
                        for (int l = 0; l <= max_label; ++l)
                            if (used[l]) class_masks.push_back(by_label[l]);
                        if (!feasible(class_masks)) {
                            all_partitions_ok = false;
                            break;
                        }
                    }
                }
                if (all_partitions_ok) classified = true;
            }
            if (classified) {
                // Buffered until the end of the round: a level-i coloring may
                // only lean on strictly lower levels, matching the definition
                // of i-extendibility (and the colorer's strict-improvement
                // rounds rely on exactly that).
                classified_this_round.push_back(phi);
                updated = true;
            } else {
                next.push_back(phi);
            }
        }
        for (PackedColoring phi : classified_this_round) {
            levels.set(phi, round);
            if (level_sink) level_sink(phi, round);
            res.max_level = std::max(res.max_level, round);
            ++res.classified;
        }
        if (!updated) break;
        pending = std::move(next);
    }
    res.d_reducible = pending.empty();
    if (!res.d_reducible) {
        for (size_t i = 0; i < pending.size() && i < 8; ++i) res.stuck.push_back(pending[i]);
    }
    return res;
}

ReducibilityResult check_d_reducibility(const Configuration& c) {
    return check_d_reducibility(free_completion(c));
}

}  // namespace fourcolor
