#include <hplan/heuristics.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

namespace hplan {

std::vector<Cost> build_h_dijk(const UnionGraph& graph, int goal_vertex)
{
    if (goal_vertex < 0 || goal_vertex >= graph.num_vertices() || !graph.is_free(goal_vertex)) {
        throw InvalidQuery("goal cell is not in free space");
    }
    return dijkstra(graph, { goal_vertex });
}

HeuristicSet::HeuristicSet(const UnionGraph& graph, int goal_vertex, std::vector<Word> references, double w2,
                           Cost goal_radius_mm)
    : m_graph(&graph), m_goal(goal_vertex), m_references(std::move(references)), m_w2(w2), m_radius(goal_radius_mm)
{
    m_hdijk = build_h_dijk(graph, goal_vertex);
    if (!m_references.empty()) {
        m_session = std::make_unique<HbspSession>(graph, goal_vertex, m_references);
        for (const Word& r : m_references) {
            m_ref_suffixes.push_back(suffixes({ r }, graph.world()).members);
        }
    }
}

Cost HeuristicSet::h_dijk(int vertex) const
{
    if (vertex < 0 || vertex >= int(m_hdijk.size())) {
        return kInfiniteCost;
    }
    return m_hdijk[vertex];
}

Cost HeuristicSet::eval_anchor(int vertex) const
{
    const Cost h = h_dijk(vertex);
    if (!is_finite(h)) {
        return kInfiniteCost;
    }
    return std::max<Cost>(0, h - m_radius);
}

Cost HeuristicSet::eval_homotopy(std::size_t i, int vertex, const Word& s_u)
{
    const Cost h = h_dijk(vertex);
    if (!is_finite(h)) {
        return kInfiniteCost;
    }
    const Cost bound = static_cast<Cost>(m_w2 * double(h));
    const QueryResult r = m_session->d_s(vertex, s_u, m_references[i], bound);
    if (r.status != QueryStatus::Found) {
        return kInfiniteCost;
    }
    return std::max<Cost>(0, r.distance - m_radius);
}

bool HeuristicSet::in_class(const Word& s_u)
{
    if (!m_session) {
        return false;
    }
    for (const Word& s : m_references) {
        if (m_session->suffix_set().contains(concat_reduce(s, s_u, m_graph->world()))) {
            return true;
        }
    }
    return false;
}

namespace {

void write_row(std::ostream& os, const UnionGraph& g, int v, Cost value)
{
    const Cell c = g.cell_of(v);
    const Point2 p = g.world().center(c);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d,%.3f,%.3f,%lld\n", g.surface_of(v), p.x, p.y, static_cast<long long>(value));
    os << buf;
}

} // namespace

void HeuristicSet::write_anchor_csv(std::ostream& os) const
{
    os << "surface,x,y,value_mm\n";
    for (int v = 0; v < m_graph->num_vertices(); ++v) {
        if (m_graph->is_free(v) && is_finite(m_hdijk[v])) {
            write_row(os, *m_graph, v, eval_anchor(v));
        }
    }
}

void HeuristicSet::write_homotopy_csv(std::size_t i, std::ostream& os) const
{
    os << "surface,x,y,value_mm\n";
    if (!m_session || i >= m_references.size()) {
        return;
    }
    std::map<int, Cost> best;
    const WordPool& pool = m_session->pool();
    for (const auto& r : m_session->settled_records()) {
        if (!m_ref_suffixes[i].count(pool.get(r.vertex.sig))) {
            continue;
        }
        auto [it, inserted] = best.try_emplace(r.vertex.cell, r.distance);
        if (!inserted) {
            it->second = std::min(it->second, r.distance);
        }
    }
    for (const auto& [v, d] : best) {
        write_row(os, *m_graph, v, std::max<Cost>(0, d - m_radius));
    }
}

} // namespace hplan
