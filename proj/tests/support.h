// Shared fixtures and brute-force oracles for the test binaries.
#ifndef HPLAN_TESTS_SUPPORT_H
#define HPLAN_TESTS_SUPPORT_H

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <hplan/footstep.h>
#include <hplan/signature.h>
#include <hplan/union_graph.h>
#include <hplan/world.h>

namespace hplan::testing {

inline std::string data_file(const std::string& name) { return std::string(HPLAN_TEST_DATA) + "/" + name; }

inline Surface flat_surface(int id, int x0, int y0, int x1, int y1, double z = 0.0, double res = 0.1)
{
    Surface s;
    s.id = id;
    s.c = z;
    s.bounds = { x0 * res, y0 * res, x1 * res, y1 * res };
    s.resolution = res;
    return s;
}

inline std::vector<Cell> box_cells(int x0, int y0, int x1, int y1)
{
    std::vector<Cell> out;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            out.push_back({ x, y });
        }
    }
    return out;
}

// random worlds

struct RandomWorldOptions {
    int nx = 24;
    int ny = 24;
    int surfaces = 1; // 1..3
    int obstacles = 4;
    int clearance = 2; // free cells kept between obstacles and around them
    int max_side = 3;
};

struct RandomWorld {
    std::vector<Surface> surfaces;
    std::vector<ObstacleCells> obstacles;
    /// Inclusive lattice box of each obstacle, in obstacle order.
    std::vector<std::array<int, 4>> boxes;
};

/// Rectangular surfaces chained along x (each overlapping the next), with
/// rectangular cell obstacles separated by `clearance` free cells.
inline RandomWorld random_world(std::mt19937& rng, const RandomWorldOptions& o)
{
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    RandomWorld rw;
    if (o.surfaces == 1) {
        rw.surfaces.push_back(flat_surface(1, 0, 0, o.nx, o.ny));
    } else if (o.surfaces == 2) {
        const int a = uni(o.nx / 2 + 2, o.nx - 4);
        const int b = uni(4, o.nx / 2 - 2);
        const int dy = uni(-3, 3);
        rw.surfaces.push_back(flat_surface(1, 0, 0, a, o.ny));
        rw.surfaces.push_back(flat_surface(2, b, dy, o.nx, o.ny + dy, 0.05));
    } else {
        const int third = o.nx / 3;
        const int a1 = third + uni(2, 4);
        const int b1 = third - uni(2, 4);
        const int a2 = 2 * third + uni(2, 4);
        const int b2 = std::max(a1, 2 * third - uni(2, 4));
        rw.surfaces.push_back(flat_surface(1, 0, 0, a1, o.ny));
        rw.surfaces.push_back(flat_surface(2, b1, uni(-2, 2), a2, o.ny, 0.05));
        rw.surfaces.push_back(flat_surface(3, b2, uni(-2, 2), o.nx, o.ny, 0.1));
    }

    for (int attempt = 0; attempt < 400 && int(rw.boxes.size()) < o.obstacles; ++attempt) {
        const Surface& s = rw.surfaces[uni(0, int(rw.surfaces.size()) - 1)];
        const int w = uni(1, o.max_side);
        const int h = uni(1, o.max_side);
        const int m = o.clearance;
        if (s.cell_x1() - s.cell_x0() < w + 2 * m + 1 || s.cell_y1() - s.cell_y0() < h + 2 * m + 1) {
            continue;
        }
        const int x0 = uni(s.cell_x0() + m, s.cell_x1() - m - w);
        const int y0 = uni(s.cell_y0() + m, s.cell_y1() - m - h);
        const std::array<int, 4> box{ x0, y0, x0 + w - 1, y0 + h - 1 };
        bool ok = true;
        for (const auto& b : rw.boxes) {
            const int gap_x = std::max(b[0] - box[2], box[0] - b[2]) - 1;
            const int gap_y = std::max(b[1] - box[3], box[1] - b[3]) - 1;
            if (std::max(gap_x, gap_y) < m) {
                ok = false;
            }
        }
        if (!ok) {
            continue;
        }
        rw.boxes.push_back(box);
        rw.obstacles.push_back({ s.id, box_cells(box[0], box[1], box[2], box[3]), 0 });
    }
    return rw;
}

inline World build(const RandomWorld& rw) { return build_world(rw.surfaces, rw.obstacles); }

// grid paths: sequences of union-graph vertices joined by edges

using VertexPath = std::vector<int>;

inline std::optional<int> edge_between(const UnionGraph& g, int a, int b)
{
    const auto& es = g.edges(a);
    for (std::size_t i = 0; i < es.size(); ++i) {
        if (es[i].to == b) {
            return int(i);
        }
    }
    return std::nullopt;
}

inline bool is_path(const UnionGraph& g, const VertexPath& p)
{
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (!edge_between(g, p[i], p[i + 1])) {
            return false;
        }
    }
    return !p.empty();
}

inline std::vector<SurfacePoint> to_polyline(const UnionGraph& g, const VertexPath& p)
{
    std::vector<SurfacePoint> out;
    for (int v : p) {
        const Point2 c = g.world().center(g.cell_of(v));
        out.push_back({ c.x, c.y, g.surface_of(v) });
    }
    return out;
}

inline VertexPath bfs_path(const UnionGraph& g, int a, int b)
{
    std::vector<int> parent(g.num_vertices(), -2);
    std::deque<int> q{ a };
    parent[a] = -1;
    while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        if (v == b) {
            break;
        }
        for (const auto& e : g.edges(v)) {
            if (parent[e.to] == -2) {
                parent[e.to] = v;
                q.push_back(e.to);
            }
        }
    }
    if (parent[b] == -2) {
        return {};
    }
    VertexPath p;
    for (int v = b; v != -1; v = parent[v]) {
        p.push_back(v);
    }
    std::reverse(p.begin(), p.end());
    return p;
}

inline std::vector<int> free_vertices(const UnionGraph& g)
{
    std::vector<int> out;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (g.is_free(v)) {
            out.push_back(v);
        }
    }
    return out;
}

inline VertexPath random_walk(const UnionGraph& g, std::mt19937& rng, int start, int steps)
{
    VertexPath p{ start };
    for (int i = 0; i < steps; ++i) {
        const auto& es = g.edges(p.back());
        if (es.empty()) {
            break;
        }
        p.push_back(es[std::uniform_int_distribution<std::size_t>(0, es.size() - 1)(rng)].to);
    }
    return p;
}

// Elementary deformations. Each preserves the endpoints and the homotopy
// class in the glued free space: a spur is a back-and-forth, a square move
// sweeps over a 2x2 block of cells free on one surface, and a gate slide
// swaps which surface a 4-adjacent step inside the gate overlap is taken on.

inline bool block_free(const UnionGraph& g, int surface, Cell a, Cell b)
{
    const World& w = g.world();
    for (int x = std::min(a.x, b.x); x <= std::max(a.x, b.x); ++x) {
        for (int y = std::min(a.y, b.y); y <= std::max(a.y, b.y); ++y) {
            if (!w.surface(surface)->contains({ x, y }) || !w.free(surface, { x, y })) {
                return false;
            }
        }
    }
    return true;
}

inline bool try_move(const UnionGraph& g, std::mt19937& rng, VertexPath& p)
{
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int n = int(p.size());
    const int kind = uni(0, 5);
    if (kind == 0) { // insert spur
        const int i = uni(0, n - 1);
        const auto& es = g.edges(p[i]);
        if (es.empty()) {
            return false;
        }
        const int u = es[uni(0, int(es.size()) - 1)].to;
        p.insert(p.begin() + i + 1, { u, p[i] });
        return true;
    }
    if (n < 3) {
        return false;
    }
    const int i = uni(1, n - 2);
    const int a = p[i - 1], b = p[i], c = p[i + 1];
    const int sa = g.surface_of(a), sb = g.surface_of(b), sc = g.surface_of(c);
    const Cell ca = g.cell_of(a), cb = g.cell_of(b), cc = g.cell_of(c);
    if (kind == 1) { // remove spur
        if (a != c) {
            return false;
        }
        p.erase(p.begin() + i, p.begin() + i + 2);
        return true;
    }
    const bool same = sa == sb && sb == sc;
    const bool diag_ac = std::abs(ca.x - cc.x) == 1 && std::abs(ca.y - cc.y) == 1;
    if (kind == 2) { // flip an L to the other corner of its 2x2 block
        if (!same || !diag_ac || !block_free(g, sa, ca, cc)) {
            return false;
        }
        const Cell other = (cb == Cell{ ca.x, cc.y }) ? Cell{ cc.x, ca.y } : Cell{ ca.x, cc.y };
        if (!(cb == Cell{ ca.x, cc.y } || cb == Cell{ cc.x, ca.y })) {
            return false;
        }
        p[i] = g.vertex(sa, other);
        return true;
    }
    if (kind == 3) { // L -> diagonal
        if (!same || !diag_ac || !block_free(g, sa, ca, cc)) {
            return false;
        }
        if (!(cb == Cell{ ca.x, cc.y } || cb == Cell{ cc.x, ca.y })) {
            return false;
        }
        p.erase(p.begin() + i);
        return true;
    }
    if (kind == 4) { // diagonal -> L
        if (sa != sb || std::abs(ca.x - cb.x) != 1 || std::abs(ca.y - cb.y) != 1) {
            return false;
        }
        const Cell corner = uni(0, 1) ? Cell{ ca.x, cb.y } : Cell{ cb.x, ca.y };
        p.insert(p.begin() + i, g.vertex(sa, corner));
        return true;
    }
    // gate slide: (c0,s)->(c0,t)->(c1,t)  <->  (c0,s)->(c1,s)->(c1,t)
    if (sa != sb && ca == cb && sc == sb && std::abs(ca.x - cc.x) + std::abs(ca.y - cc.y) == 1) {
        const int alt = g.vertex(sa, cc);
        if (alt < 0 || !g.is_free(alt) || !edge_between(g, a, alt) || !edge_between(g, alt, c)) {
            return false;
        }
        p[i] = alt;
        return true;
    }
    if (sa == sb && sb != sc && cb == cc && std::abs(ca.x - cb.x) + std::abs(ca.y - cb.y) == 1) {
        const int alt = g.vertex(sc, ca);
        if (alt < 0 || !g.is_free(alt) || !edge_between(g, a, alt) || !edge_between(g, alt, c)) {
            return false;
        }
        p[i] = alt;
        return true;
    }
    return false;
}

inline VertexPath deform(const UnionGraph& g, std::mt19937& rng, VertexPath p, int moves)
{
    for (int k = 0, tries = 0; k < moves && tries < moves * 50; ++tries) {
        if (try_move(g, rng, p)) {
            ++k;
        }
    }
    return p;
}

/// Two paths from a to b going round opposite halves of the free ring that
/// surrounds obstacle box `box` on `surface`. Empty when the ring is not free.
inline std::optional<std::pair<VertexPath, VertexPath>> around_obstacle(const UnionGraph& g, int surface,
                                                                        const std::array<int, 4>& box, int a, int b)
{
    const int x0 = box[0] - 1, y0 = box[1] - 1, x1 = box[2] + 1, y1 = box[3] + 1;
    if (!block_free(g, surface, { x0, y0 }, { x0, y1 }) || !block_free(g, surface, { x1, y0 }, { x1, y1 }) ||
        !block_free(g, surface, { x0, y0 }, { x1, y0 }) || !block_free(g, surface, { x0, y1 }, { x1, y1 })) {
        return std::nullopt;
    }
    VertexPath upper, lower;
    for (int y = y0; y <= y1; ++y) {
        upper.push_back(g.vertex(surface, { x0, y }));
    }
    for (int x = x0 + 1; x <= x1; ++x) {
        upper.push_back(g.vertex(surface, { x, y1 }));
    }
    for (int x = x0; x <= x1; ++x) {
        lower.push_back(g.vertex(surface, { x, y0 }));
    }
    for (int y = y0 + 1; y <= y1; ++y) {
        lower.push_back(g.vertex(surface, { x1, y }));
    }
    const VertexPath head = bfs_path(g, a, upper.front());
    const VertexPath tail = bfs_path(g, upper.back(), b);
    if (head.empty() || tail.empty()) {
        return std::nullopt;
    }
    auto join = [&](const VertexPath& mid) {
        VertexPath p = head;
        p.insert(p.end(), mid.begin() + 1, mid.end());
        p.insert(p.end(), tail.begin() + 1, tail.end());
        return p;
    };
    return std::make_pair(join(upper), join(lower));
}

// Textbook Dijkstra over the explicitly enumerated augmented graph
// (free vertex x reduced word), restricted to the reduced prefixes of the
// references. Edge words come from crossing detection on the cell segment.

inline std::set<Word> prefix_closure(const std::vector<Word>& refs, const World& w)
{
    std::set<Word> out{ Word{} };
    for (const Word& r : refs) {
        for (std::size_t k = 1; k <= r.size(); ++k) {
            out.insert(reduce(Word(r.begin(), r.begin() + k), w));
        }
    }
    return out;
}

inline std::map<std::pair<int, Word>, Cost> augmented_dijkstra(const UnionGraph& g, int goal,
                                                               const std::vector<Word>& refs)
{
    const World& w = g.world();
    const std::set<Word> sset = prefix_closure(refs, w);
    const std::vector<Word> members(sset.begin(), sset.end());
    std::map<Word, int> index;
    for (std::size_t i = 0; i < members.size(); ++i) {
        index[members[i]] = int(i);
    }
    const int m = int(members.size());
    const int nv = g.num_vertices();
    auto id = [&](int v, int s) { return std::size_t(v) * m + s; };

    std::vector<std::vector<std::pair<std::size_t, Cost>>> adj(std::size_t(nv) * m);
    const double res = w.resolution();
    for (int v = 0; v < nv; ++v) {
        if (!g.is_free(v)) {
            continue;
        }
        const Cell cv = g.cell_of(v);
        for (const auto& e : g.edges(v)) {
            const Cell cu = g.cell_of(e.to);
            const Word word = cell_segment_crossings(cv, g.surface_of(v), cu, g.surface_of(e.to), w);
            const double len = std::hypot(double(cu.x - cv.x), double(cu.y - cv.y)) * res;
            const Cost c = static_cast<Cost>(std::llround(len * 1000.0));
            for (int s = 0; s < m; ++s) {
                const auto it = index.find(concat_reduce(members[s], word, w));
                if (it != index.end()) {
                    adj[id(v, s)].push_back({ id(e.to, it->second), c });
                }
            }
        }
    }
    std::vector<Cost> dist(adj.size(), kInfiniteCost);
    using Item = std::pair<Cost, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
    dist[id(goal, index.at(Word{}))] = 0;
    q.push({ 0, id(goal, index.at(Word{})) });
    while (!q.empty()) {
        const auto [d, x] = q.top();
        q.pop();
        if (d > dist[x]) {
            continue;
        }
        for (const auto& [y, c] : adj[x]) {
            if (d + c < dist[y]) {
                dist[y] = d + c;
                q.push({ dist[y], y });
            }
        }
    }
    std::map<std::pair<int, Word>, Cost> out;
    for (std::size_t x = 0; x < dist.size(); ++x) {
        if (is_finite(dist[x])) {
            out[{ int(x / m), members[x % m] }] = dist[x];
        }
    }
    return out;
}

/// Plain cell Dijkstra with octile costs, for anchor checks.
inline std::vector<Cost> octile_oracle(const UnionGraph& g, int goal)
{
    const World& w = g.world();
    const Cost straight = meters_to_mm(w.resolution());
    const Cost diag = meters_to_mm(w.resolution() * std::sqrt(2.0));
    std::vector<Cost> dist(g.num_vertices(), kInfiniteCost);
    using Item = std::pair<Cost, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
    dist[goal] = 0;
    q.push({ 0, goal });
    while (!q.empty()) {
        const auto [d, v] = q.top();
        q.pop();
        if (d > dist[v]) {
            continue;
        }
        const Cell cv = g.cell_of(v);
        const int sv = g.surface_of(v);
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                if (!dx && !dy) {
                    continue;
                }
                const Cell cu{ cv.x + dx, cv.y + dy };
                if (!w.surface(sv)->contains(cu) || !w.free(sv, cu)) {
                    continue;
                }
                if (dx && dy && (!w.free(sv, { cv.x + dx, cv.y }) || !w.free(sv, { cv.x, cv.y + dy }))) {
                    continue;
                }
                const int u = g.vertex(sv, cu);
                const Cost nd = d + (dx && dy ? diag : straight);
                if (nd < dist[u]) {
                    dist[u] = nd;
                    q.push({ nd, u });
                }
            }
        }
        for (const Gate& gate : w.gates()) {
            const int other = sv == gate.lower_surface ? gate.upper_surface
                              : sv == gate.upper_surface ? gate.lower_surface
                                                         : -1;
            if (other < 0 || !w.is_gate_cell(gate, cv)) {
                continue;
            }
            const int u = g.vertex(other, cv);
            if (d < dist[u]) {
                dist[u] = d;
                q.push({ d, u });
            }
        }
    }
    return dist;
}

/// Uniform-cost search over the footstep lattice; optimal cost to any goal.
inline Cost footstep_optimum(FootstepSpace& space, int start, std::size_t cap = 2000000)
{
    std::vector<Cost> dist;
    auto at = [&](int s) -> Cost& {
        if (std::size_t(s) >= dist.size()) {
            dist.resize(std::size_t(s) + 1, kInfiniteCost);
        }
        return dist[s];
    };
    using Item = std::pair<Cost, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
    at(start) = 0;
    q.push({ 0, start });
    std::vector<Successor> succ;
    std::size_t pops = 0;
    while (!q.empty() && pops < cap) {
        const auto [d, s] = q.top();
        q.pop();
        if (d > at(s)) {
            continue;
        }
        ++pops;
        if (space.is_goal(s)) {
            return d;
        }
        succ.clear();
        space.successors(s, succ);
        for (const auto& n : succ) {
            if (d + n.cost < at(n.state)) {
                at(n.state) = d + n.cost;
                q.push({ d + n.cost, n.state });
            }
        }
    }
    return kInfiniteCost;
}

/// Connected components of the free vertices by BFS.
inline std::vector<int> components(const UnionGraph& g)
{
    std::vector<int> comp(g.num_vertices(), -1);
    int next = 0;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (!g.is_free(v) || comp[v] >= 0) {
            continue;
        }
        std::deque<int> q{ v };
        comp[v] = next;
        while (!q.empty()) {
            const int x = q.front();
            q.pop_front();
            for (const auto& e : g.edges(x)) {
                if (comp[e.to] < 0) {
                    comp[e.to] = next;
                    q.push_back(e.to);
                }
            }
        }
        ++next;
    }
    return comp;
}

} // namespace hplan::testing

#endif
