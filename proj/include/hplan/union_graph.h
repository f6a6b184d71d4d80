#ifndef HPLAN_UNION_GRAPH_H
#define HPLAN_UNION_GRAPH_H

#include <vector>

#include <hplan/signature.h>
#include <hplan/world.h>

namespace hplan {

/// Graph over the free cells of every projected workspace: 8-connected
/// within a surface (no corner cutting) plus zero-length edges joining
/// coincident cells across each gate.
class UnionGraph
{
public:
    struct Edge {
        int to = 0;
        Cost length = 0;
        int word = WordPool::kEmpty; ///< crossing word, interned in words()
        bool gate = false;
    };

    explicit UnionGraph(const World& world);

    const World& world() const { return *m_world; }

    /// Vertex ids cover every cell of every surface; blocked cells have no edges.
    int num_vertices() const { return m_num_vertices; }
    int vertex(int surface_id, Cell c) const;
    int surface_of(int v) const;
    Cell cell_of(int v) const;
    bool is_free(int v) const { return m_free[v] != 0; }

    const std::vector<Edge>& edges(int v) const { return m_adj[v]; }
    std::size_t num_edges() const; ///< undirected
    int num_free() const;

    const WordPool& words() const { return m_words; }

private:
    const World* m_world;
    std::vector<int> m_offsets; ///< per surface index
    int m_num_vertices = 0;
    std::vector<std::uint8_t> m_free;
    std::vector<std::vector<Edge>> m_adj;
    WordPool m_words;
};

/// Backward Dijkstra from a set of source vertices; kInfiniteCost where unreachable.
std::vector<Cost> dijkstra(const UnionGraph& g, const std::vector<int>& sources);

} // namespace hplan

#endif
