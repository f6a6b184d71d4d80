#include <hplan/union_graph.h>

#include <cmath>
#include <queue>

namespace hplan {

UnionGraph::UnionGraph(const World& world) : m_world(&world)
{
    for (const auto& ws : world.workspaces()) {
        m_offsets.push_back(m_num_vertices);
        m_num_vertices += ws.size();
    }
    m_free.assign(m_num_vertices, 0);
    m_adj.resize(m_num_vertices);

    const Cost straight = meters_to_mm(world.resolution());
    const Cost diagonal = meters_to_mm(world.resolution() * std::sqrt(2.0));

    for (std::size_t si = 0; si < world.workspaces().size(); ++si) {
        const Workspace2D& ws = world.workspaces()[si];
        for (int i = 0; i < ws.size(); ++i) {
            m_free[m_offsets[si] + i] = ws.free(ws.cell(i)) ? 1 : 0;
        }
    }

    for (std::size_t si = 0; si < world.workspaces().size(); ++si) {
        const Workspace2D& ws = world.workspaces()[si];
        const int sid = ws.surface_id();
        for (int i = 0; i < ws.size(); ++i) {
            const Cell c = ws.cell(i);
            if (!ws.free(c)) {
                continue;
            }
            const int v = m_offsets[si] + i;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) {
                        continue;
                    }
                    const Cell n{ c.x + dx, c.y + dy };
                    if (!ws.free(n)) {
                        continue;
                    }
                    if (dx != 0 && dy != 0 && (!ws.free({ c.x + dx, c.y }) || !ws.free({ c.x, c.y + dy }))) {
                        continue;
                    }
                    const Word w = cell_segment_crossings(c, sid, n, sid, world);
                    m_adj[v].push_back({ m_offsets[si] + ws.index(n), (dx && dy) ? diagonal : straight,
                                         m_words.intern(w), false });
                }
            }
        }
    }

    for (const Gate& g : world.gates()) {
        const int li = world.surface_index(g.lower_surface);
        const int ui = world.surface_index(g.upper_surface);
        const int up = m_words.intern(Word{ Letter{ g.letter, false } });
        const int down = m_words.intern(Word{ Letter{ g.letter, true } });
        for (const Cell& c : g.free_points) {
            const int a = m_offsets[li] + world.workspaces()[li].index(c);
            const int b = m_offsets[ui] + world.workspaces()[ui].index(c);
            m_adj[a].push_back({ b, 0, up, true });
            m_adj[b].push_back({ a, 0, down, true });
        }
    }
}

int UnionGraph::vertex(int surface_id, Cell c) const
{
    const int si = m_world->surface_index(surface_id);
    if (si < 0) {
        return -1;
    }
    const Workspace2D& ws = m_world->workspaces()[si];
    if (!ws.contains(c)) {
        return -1;
    }
    return m_offsets[si] + ws.index(c);
}

int UnionGraph::surface_of(int v) const
{
    std::size_t si = m_offsets.size() - 1;
    while (m_offsets[si] > v) {
        --si;
    }
    return m_world->workspaces()[si].surface_id();
}

Cell UnionGraph::cell_of(int v) const
{
    std::size_t si = m_offsets.size() - 1;
    while (m_offsets[si] > v) {
        --si;
    }
    return m_world->workspaces()[si].cell(v - m_offsets[si]);
}

std::size_t UnionGraph::num_edges() const
{
    std::size_t n = 0;
    for (const auto& a : m_adj) {
        n += a.size();
    }
    return n / 2;
}

int UnionGraph::num_free() const
{
    int n = 0;
    for (auto f : m_free) {
        n += f;
    }
    return n;
}

std::vector<Cost> dijkstra(const UnionGraph& g, const std::vector<int>& sources)
{
    std::vector<Cost> dist(g.num_vertices(), kInfiniteCost);
    using Item = std::pair<Cost, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    for (int s : sources) {
        if (s >= 0 && g.is_free(s)) {
            dist[s] = 0;
            open.push({ 0, s });
        }
    }
    while (!open.empty()) {
        const auto [d, v] = open.top();
        open.pop();
        if (d > dist[v]) {
            continue;
        }
        for (const auto& e : g.edges(v)) {
            const Cost alt = d + e.length;
            if (alt < dist[e.to]) {
                dist[e.to] = alt;
                open.push({ alt, e.to });
            }
        }
    }
    return dist;
}

} // namespace hplan
