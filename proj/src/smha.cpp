#include <hplan/smha.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <tuple>

namespace hplan {

const char* to_string(PlanStatus s)
{
    switch (s) {
    case PlanStatus::Success:
        return "success";
    case PlanStatus::CapExceeded:
        return "cap_exceeded";
    case PlanStatus::Exhausted:
        return "exhausted";
    }
    return "unknown";
}

std::size_t SmhaStats::total_expansions() const
{
    std::size_t n = 0;
    for (auto e : expansions) {
        n += e;
    }
    return n;
}

namespace {

constexpr Cost kUnset = -1;

// (key, -g, state): smallest key, then larger g, then smaller id
using Entry = std::tuple<Cost, Cost, int>;

struct Node {
    Cost g = kInfiniteCost;
    int parent = -1;
    Cost edge = 0; ///< cost from parent when the parent was set
    bool closed_anchor = false;
    bool closed_inad = false;
    std::vector<Cost> h;       ///< kUnset until evaluated
    std::vector<Entry> queued; ///< state -1 when not in queue i
};

class Engine
{
public:
    Engine(SearchSpace& space, Heuristic& anchor, const std::vector<Heuristic*>& inad, const SmhaConfig& cfg)
        : m_space(space), m_cfg(cfg), m_nq(inad.size() + 1), m_open(m_nq)
    {
        m_heur.push_back(&anchor);
        m_heur.insert(m_heur.end(), inad.begin(), inad.end());
        m_stats.expansions.assign(m_nq, 0);
        m_stats.evaluations.assign(m_nq, 0);
    }

    PlanResult run(int start);

private:
    Node& node(int s)
    {
        if (s >= int(m_nodes.size())) {
            m_nodes.resize(std::size_t(s) + 1);
        }
        Node& n = m_nodes[s];
        if (n.h.empty()) {
            n.h.assign(m_nq, kUnset);
            n.queued.assign(m_nq, Entry{ 0, 0, -1 });
            ++m_stats.generated;
        }
        return n;
    }

    Cost h(int s, std::size_t i)
    {
        Node& n = node(s);
        if (n.h[i] == kUnset) {
            n.h[i] = m_heur[i]->value(s);
            ++m_stats.evaluations[i];
        }
        return n.h[i];
    }

    Cost key(int s, std::size_t i)
    {
        const Cost hv = h(s, i);
        if (!is_finite(hv)) {
            return kInfiniteCost;
        }
        return node(s).g + static_cast<Cost>(std::llround(m_cfg.w1 * double(hv)));
    }

    Cost min_key(std::size_t i) const { return m_open[i].empty() ? kInfiniteCost : std::get<0>(*m_open[i].begin()); }

    void remove(int s, std::size_t i)
    {
        Entry& e = node(s).queued[i];
        if (std::get<2>(e) >= 0) {
            m_open[i].erase(e);
            std::get<2>(e) = -1;
        }
    }

    void put(int s, std::size_t i, Cost k)
    {
        remove(s, i);
        Node& n = node(s);
        n.queued[i] = Entry{ k, -n.g, s };
        m_open[i].insert(n.queued[i]);
    }

    void expand(int s, std::size_t queue);

    SearchSpace& m_space;
    SmhaConfig m_cfg;
    std::size_t m_nq;
    std::vector<Heuristic*> m_heur;
    std::vector<std::set<Entry>> m_open;
    std::vector<Node> m_nodes;
    SmhaStats m_stats;
    int m_goal = -1;
    std::vector<Successor> m_succ;
};

void Engine::expand(int s, std::size_t queue)
{
    ++m_stats.expansions[queue];
    for (std::size_t i = 0; i < m_nq; ++i) {
        remove(s, i);
    }
    {
        Node& n = node(s);
        if (!n.closed_anchor && !n.closed_inad) {
            ++m_stats.settled;
        }
        (queue == 0 ? n.closed_anchor : n.closed_inad) = true;
    }

    m_succ.clear();
    m_space.successors(s, m_succ);
    const Cost gs = node(s).g;
    for (const Successor& sc : m_succ) {
        Node& n = node(sc.state);
        const Cost alt = gs + sc.cost;
        if (alt >= n.g) {
            continue;
        }
        n.g = alt;
        n.parent = s;
        n.edge = sc.cost;
        if (m_space.is_goal(sc.state) && (m_goal < 0 || alt < m_nodes[m_goal].g)) {
            m_goal = sc.state;
        }
        if (n.closed_anchor) {
            continue;
        }
        const Cost k0 = key(sc.state, 0);
        if (!is_finite(k0)) {
            continue;
        }
        put(sc.state, 0, k0);
        if (node(sc.state).closed_inad) {
            continue;
        }
        for (std::size_t i = 1; i < m_nq; ++i) {
            const Cost ki = key(sc.state, i);
            if (is_finite(ki) && double(ki) <= m_cfg.w2 * double(k0)) {
                put(sc.state, i, ki);
            }
        }
    }
}

PlanResult Engine::run(int start)
{
    const auto t0 = std::chrono::steady_clock::now();
    PlanResult result;

    node(start).g = 0;
    if (m_space.is_goal(start)) {
        m_goal = start;
    }
    const Cost k0 = key(start, 0);
    if (is_finite(k0)) {
        put(start, 0, k0);
        for (std::size_t i = 1; i < m_nq; ++i) {
            const Cost ki = key(start, i);
            if (is_finite(ki)) {
                put(start, i, ki);
            }
        }
    }

    const auto goal_g = [this]() { return m_goal < 0 ? kInfiniteCost : m_nodes[m_goal].g; };
    bool success = false;
    bool capped = false;
    std::size_t total = 0;

    // one anchor-gated step from queue i; false when the search terminates
    const auto step = [&](std::size_t i) {
        const Cost anchor_min = min_key(0);
        if (i > 0 && double(min_key(i)) <= m_cfg.w2 * double(anchor_min)) {
            if (goal_g() <= min_key(i)) {
                success = is_finite(goal_g());
                return false;
            }
            if (anchor_min > 0) {
                m_stats.max_gate_ratio = std::max(m_stats.max_gate_ratio, double(min_key(i)) / double(anchor_min));
            }
            expand(std::get<2>(*m_open[i].begin()), i);
        } else {
            if (goal_g() <= anchor_min) {
                success = is_finite(goal_g());
                return false;
            }
            expand(std::get<2>(*m_open[0].begin()), 0);
        }
        if (++total >= m_cfg.expansion_cap) {
            capped = true;
            return false;
        }
        return true;
    };

    bool running = true;
    while (running && !m_open[0].empty()) {
        bool any = false;
        for (std::size_t i = 1; i < m_nq && running && !m_open[0].empty(); ++i) {
            if (m_open[i].empty()) {
                continue;
            }
            any = true;
            running = step(i);
        }
        if (running && !any && !m_open[0].empty()) {
            running = step(0);
        }
    }
    if (!success && !capped && m_open[0].empty() && is_finite(goal_g())) {
        success = true;
    }

    if (success) {
        // parents may have improved after the goal was reached, so the
        // returned path can be cheaper than g(goal)
        result.status = PlanStatus::Success;
        result.cost = 0;
        for (int s = m_goal; s >= 0; s = m_nodes[s].parent) {
            result.path.push_back(s);
            if (s == start) {
                break;
            }
            result.cost += m_nodes[s].edge;
        }
        std::reverse(result.path.begin(), result.path.end());
    } else {
        result.status = capped ? PlanStatus::CapExceeded : PlanStatus::Exhausted;
    }
    result.stats = m_stats;
    result.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace

PlanResult smha_plan(SearchSpace& space, Heuristic& anchor, const std::vector<Heuristic*>& inadmissible, int start,
                     const SmhaConfig& config)
{
    if (config.w1 < 1.0 || config.w2 < 1.0) {
        throw InvalidQuery("w1 and w2 must be at least 1");
    }
    Engine engine(space, anchor, inadmissible, config);
    return engine.run(start);
}

} // namespace hplan
