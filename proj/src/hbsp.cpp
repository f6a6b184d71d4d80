#include <hplan/hbsp.h>

#include <algorithm>
#include <ostream>

namespace hplan {

const char* to_string(QueryStatus s)
{
    switch (s) {
    case QueryStatus::Found:
        return "found";
    case QueryStatus::ExceedsBound:
        return "exceeds_bound";
    case QueryStatus::Exhausted:
        return "exhausted";
    case QueryStatus::Unreachable:
        return "unreachable";
    }
    return "unknown";
}

bool HbspSession::ItemAfter::operator()(const Item& a, const Item& b) const
{
    if (a.dist != b.dist) {
        return a.dist > b.dist;
    }
    if (a.cell != b.cell) {
        return a.cell > b.cell;
    }
    return self->m_text[a.sig] > self->m_text[b.sig];
}

HbspSession::HbspSession(const UnionGraph& graph, int goal_vertex, const std::vector<Word>& references)
    : m_graph(&graph), m_goal(goal_vertex), m_references(references), m_open(ItemAfter{ this })
{
    if (goal_vertex < 0 || goal_vertex >= graph.num_vertices() || !graph.is_free(goal_vertex)) {
        throw InvalidQuery("goal cell is not in free space");
    }
    m_suffix = suffixes(references, graph.world());
    m_text.push_back(to_string(Word{}));
    m_in_suffix.push_back(1);
    for (const Word& w : m_suffix.members) {
        const int id = m_pool.intern(w);
        if (id >= int(m_text.size())) {
            m_text.push_back(to_string(w));
            m_in_suffix.push_back(1);
        }
    }
    m_dist[key(goal_vertex, WordPool::kEmpty)] = 0;
    m_open.push({ 0, goal_vertex, WordPool::kEmpty });
}

// -1 when the extended signature leaves the suffix set
int HbspSession::step(int sig, int edge_word)
{
    if (edge_word == WordPool::kEmpty) {
        return sig;
    }
    const std::uint64_t k = key(edge_word, sig);
    auto it = m_steps.find(k);
    if (it != m_steps.end()) {
        return it->second;
    }
    const Word next = concat_reduce(m_pool.get(sig), m_graph->words().get(edge_word), m_graph->world());
    int result = -1;
    if (auto id = m_pool.find(next); id && *id < int(m_in_suffix.size()) && m_in_suffix[*id]) {
        result = *id;
    }
    m_steps.emplace(k, result);
    return result;
}

std::vector<std::pair<AugmentedVertex, Cost>> HbspSession::succ(const AugmentedVertex& v)
{
    std::vector<std::pair<AugmentedVertex, Cost>> out;
    for (const auto& e : m_graph->edges(v.cell)) {
        const int s = step(v.sig, e.word);
        if (s >= 0) {
            out.push_back({ { e.to, s }, e.length });
        }
    }
    return out;
}

void HbspSession::skip_stale()
{
    while (!m_open.empty()) {
        const Item& top = m_open.top();
        const std::uint64_t k = key(top.cell, top.sig);
        if (m_final.count(k) || m_dist[k] < top.dist) {
            m_open.pop();
        } else {
            break;
        }
    }
}

QueryResult HbspSession::query(const AugmentedVertex& u, Cost bound)
{
    if (u.sig < 0 || u.sig >= int(m_in_suffix.size()) || !m_in_suffix[u.sig]) {
        return { QueryStatus::Unreachable, kInfiniteCost };
    }
    const std::uint64_t target = key(u.cell, u.sig);
    if (auto it = m_final.find(target); it != m_final.end()) {
        return { QueryStatus::Found, it->second };
    }
    while (true) {
        skip_stale();
        if (m_open.empty()) {
            return { QueryStatus::Exhausted, kInfiniteCost };
        }
        const Item top = m_open.top();
        if (top.dist > bound) {
            return { QueryStatus::ExceedsBound, kInfiniteCost };
        }
        m_open.pop();
        const std::uint64_t k = key(top.cell, top.sig);
        m_final.emplace(k, top.dist);
        m_settled_order.push_back({ { top.cell, top.sig }, top.dist });
        m_last_key = top.dist;

        for (const auto& [n, len] : succ({ top.cell, top.sig })) {
            const std::uint64_t nk = key(n.cell, n.sig);
            if (m_final.count(nk)) {
                continue;
            }
            const Cost alt = top.dist + len;
            auto [it, inserted] = m_dist.try_emplace(nk, alt);
            if (inserted || alt < it->second) {
                it->second = alt;
                m_open.push({ alt, n.cell, n.sig });
            }
        }
        if (k == target) {
            return { QueryStatus::Found, top.dist };
        }
    }
}

QueryResult HbspSession::query(int cell, const Word& sig, Cost bound)
{
    const auto id = m_pool.find(sig);
    if (!id) {
        return { QueryStatus::Unreachable, kInfiniteCost };
    }
    return query(AugmentedVertex{ cell, *id }, bound);
}

QueryResult HbspSession::d_s(int cell, const Word& s_u, const Word& s, Cost bound)
{
    return query(cell, concat_reduce(s, s_u, m_graph->world()), bound);
}

void HbspSession::drain(Cost bound)
{
    // cell -1 is never settled
    query(AugmentedVertex{ -1, WordPool::kEmpty }, bound);
}

bool HbspSession::settled(const AugmentedVertex& v) const { return m_final.count(key(v.cell, v.sig)) != 0; }

std::optional<Cost> HbspSession::distance(const AugmentedVertex& v) const
{
    auto it = m_final.find(key(v.cell, v.sig));
    if (it == m_final.end()) {
        return std::nullopt;
    }
    return it->second;
}

void HbspSession::write_csv(std::ostream& os) const
{
    std::vector<SettledRecord> recs = m_settled_order;
    std::sort(recs.begin(), recs.end(), [this](const SettledRecord& a, const SettledRecord& b) {
        if (a.vertex.cell != b.vertex.cell) {
            return a.vertex.cell < b.vertex.cell;
        }
        return m_text[a.vertex.sig] < m_text[b.vertex.sig];
    });
    os << "surface,x,y,sig,dist_mm\n";
    for (const auto& r : recs) {
        const Cell c = m_graph->cell_of(r.vertex.cell);
        os << m_graph->surface_of(r.vertex.cell) << ',' << c.x << ',' << c.y << ',' << m_text[r.vertex.sig] << ','
           << r.distance << '\n';
    }
}

} // namespace hplan
