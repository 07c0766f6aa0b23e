#include "fourcolor/gen.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace fourcolor {

EmbeddedTriangulation tetrahedron() {
    EmbeddedTriangulation g;
    g.rot = {{1, 2, 3}, {2, 0, 3}, {0, 1, 3}, {0, 2, 1}};
    return g;
}

EmbeddedTriangulation octahedron() {
    EmbeddedTriangulation g;
    g.rot = {{1, 2, 3, 4}, {2, 0, 4, 5}, {3, 0, 1, 5}, {4, 0, 2, 5}, {1, 0, 3, 5}, {4, 3, 2, 1}};
    return g;
}

EmbeddedTriangulation icosahedron() {
    EmbeddedTriangulation g;
    g.rot = {
        {1, 2, 3, 4, 5},  {0, 5, 10, 6, 2}, {0, 1, 6, 7, 3},  {0, 2, 7, 8, 4},
        {0, 3, 8, 9, 5},  {0, 4, 9, 10, 1}, {1, 10, 11, 7, 2}, {2, 6, 11, 8, 3},
        {3, 7, 11, 9, 4}, {4, 8, 11, 10, 5}, {5, 9, 11, 6, 1}, {6, 10, 9, 8, 7},
    };
    return g;
}

namespace {

// Inserts w into rot[v] right after x (cyclically).
void insert_after(Rotations& rot, VertexId v, int32_t x, int32_t w) {
    auto& r = rot[v];
    auto it = std::find(r.begin(), r.end(), x);
    r.insert(it + 1, w);
}

}  // namespace

EmbeddedTriangulation random_apollonian(int32_t n, uint64_t seed) {
    EmbeddedTriangulation g = tetrahedron();
    std::mt19937_64 rng(seed);
    // Track faces as oriented triples (v, x, y) with y following x in rot[v].
    std::vector<std::array<int32_t, 3>> faces = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 2, 3}};
    // Normalize the initial face list against the rotation system.
    faces.clear();
    for (VertexId v = 0; v < g.n(); ++v) {
        const auto& r = g.rot[v];
        for (size_t i = 0; i < r.size(); ++i) {
            int32_t x = r[i], y = r[(i + 1) % r.size()];
            if (v < x && v < y) faces.push_back({v, x, y});
        }
    }
    while (g.n() < n) {
        std::uniform_int_distribution<size_t> pick(0, faces.size() - 1);
        size_t fi = pick(rng);
        auto [v, x, y] = faces[fi];
        int32_t w = g.n();
        g.rot.push_back({v, x, y});
        insert_after(g.rot, v, x, w);
        insert_after(g.rot, x, y, w);
        insert_after(g.rot, y, v, w);
        faces[fi] = {v, x, w};
        faces.push_back({x, y, w});
        faces.push_back({y, v, w});
    }
    return g;
}

EmbeddedTriangulation random_triangulation(int32_t n, uint64_t seed, int64_t flips) {
    EmbeddedTriangulation g = random_apollonian(n, seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    if (flips < 0) flips = 2 * static_cast<int64_t>(n);
    std::uniform_int_distribution<int32_t> pick_v(0, n - 1);
    for (int64_t step = 0; step < flips; ++step) {
        VertexId u = pick_v(rng);
        auto& ru = g.rot[u];
        std::uniform_int_distribution<size_t> pick_i(0, ru.size() - 1);
        size_t i = pick_i(rng);
        VertexId v = ru[i];
        // Triangles (u, v, a) and (u, b, v): a follows v, b precedes v.
        VertexId a = ru[(i + 1) % ru.size()];
        VertexId b = ru[(i + ru.size() - 1) % ru.size()];
        if (a == b || g.adjacent(a, b)) continue;
        if (g.degree(u) <= 3 || g.degree(v) <= 3) continue;
        // Remove edge uv, add edge ab.
        auto& rv = g.rot[v];
        ru.erase(ru.begin() + i);
        rv.erase(std::find(rv.begin(), rv.end(), u));
        insert_after(g.rot, a, u, b);
        insert_after(g.rot, b, v, a);
    }
    return g;
}

}  // namespace fourcolor
