#ifndef HPLAN_HEURISTICS_H
#define HPLAN_HEURISTICS_H

#include <iosfwd>
#include <memory>
#include <set>
#include <vector>

#include <hplan/hbsp.h>
#include <hplan/union_graph.h>

namespace hplan {

/// Backward Dijkstra over the union graph from the goal cell (mm).
std::vector<Cost> build_h_dijk(const UnionGraph& graph, int goal_vertex);

/// Anchor table plus one homotopy heuristic per reference word, all served
/// by a single shared HBSP session.
class HeuristicSet
{
public:
    HeuristicSet(const UnionGraph& graph, int goal_vertex, std::vector<Word> references, double w2,
                 Cost goal_radius_mm = 0);

    const UnionGraph& graph() const { return *m_graph; }
    int goal_vertex() const { return m_goal; }
    double w2() const { return m_w2; }
    Cost goal_radius() const { return m_radius; }

    /// Raw backward distance to the goal cell.
    Cost h_dijk(int vertex) const;
    const std::vector<Cost>& h_dijk_table() const { return m_hdijk; }

    /// Distance to the goal region, max(0, h_dijk - radius).
    Cost eval_anchor(int vertex) const;

    std::size_t num_homotopy() const { return m_references.size(); }
    const std::vector<Word>& references() const { return m_references; }

    /// d_s for reference i, bounded by w2 * h_dijk; kInfiniteCost on any
    /// failure. Shifted by the goal radius like the anchor.
    Cost eval_homotopy(std::size_t i, int vertex, const Word& s_u);

    /// True when s_u can still be completed into some reference class.
    bool in_class(const Word& s_u);

    HbspSession* session() { return m_session.get(); }
    const HbspSession* session() const { return m_session.get(); }

    /// surface,x,y,value_mm over free cells with a finite anchor value.
    void write_anchor_csv(std::ostream& os) const;
    /// Same columns for reference i, taken from the settled part of the session.
    void write_homotopy_csv(std::size_t i, std::ostream& os) const;

private:
    const UnionGraph* m_graph;
    int m_goal;
    std::vector<Word> m_references;
    double m_w2;
    Cost m_radius;
    std::vector<Cost> m_hdijk;
    std::unique_ptr<HbspSession> m_session;
    std::vector<std::set<Word>> m_ref_suffixes;
};

} // namespace hplan

#endif
