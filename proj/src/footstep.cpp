#include <hplan/footstep.h>

#include <cmath>
#include <queue>

namespace hplan {

namespace {

int floor_div(int a, int b)
{
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

double bin_angle(int theta) { return theta * (2.0 * M_PI / kThetaBins); }

int wrap_bin(int theta) { return ((theta % kThetaBins) + kThetaBins) % kThetaBins; }

std::uint64_t pair_key(int a, int b) { return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b); }

} // namespace

std::vector<Primitive> default_primitives()
{
    const double d[][2] = { { 0.1, 0.0 }, { 0.2, 0.0 }, { 0.1, 0.1 }, { 0.1, -0.1 },
                            { 0.0, 0.1 }, { 0.0, -0.1 }, { -0.1, 0.0 } };
    std::vector<Primitive> out;
    for (const auto& p : d) {
        for (int dt : { 0, 1, -1 }) {
            out.push_back({ p[0], p[1], dt });
        }
    }
    return out;
}

std::size_t FootstepStateHash::operator()(const FootstepState& s) const noexcept
{
    std::size_t h = 1469598103934665603ull;
    for (int v : { s.left.x, s.left.y, s.left.theta, s.left.surface, s.right.x, s.right.y, s.right.theta,
                   s.right.surface, int(s.moving), s.sig }) {
        h ^= std::size_t(std::uint32_t(v));
        h *= 1099511628211ull;
    }
    return h;
}

double foot_z(const FootPose& p, const World& world)
{
    const Surface* s = world.surface(p.surface);
    if (!s) {
        return 0.0;
    }
    const Point2 c = world.center({ p.x, p.y });
    return s->height(c.x, c.y);
}

std::optional<Projection> project_m(const FootPose& left, const FootPose& right, const World& world)
{
    const Cell m{ floor_div(left.x + right.x + 1, 2), floor_div(left.y + right.y + 1, 2) };
    const double z_mid = 0.5 * (foot_z(left, world) + foot_z(right, world));
    const Point2 c = world.center(m);
    // ties go to the surface carrying more feet, then to the lower id
    const auto feet_on = [&](int sid) { return int(left.surface == sid) + int(right.surface == sid); };
    std::optional<Projection> best;
    double best_gap = 0.0;
    for (int sid : world.surfaces_containing(m)) {
        const double gap = std::abs(z_mid - world.surface(sid)->height(c.x, c.y));
        const bool tie = std::abs(gap - best_gap) <= 1e-12;
        if (!best || gap < best_gap - 1e-12 || (tie && feet_on(sid) > feet_on(best->surface))) {
            best = Projection{ m, sid };
            best_gap = gap;
        }
    }
    return best;
}

bool is_valid(const FootPose& left, const FootPose& right, const World& world, const FootstepParams& params)
{
    for (const FootPose* p : { &left, &right }) {
        const Surface* s = world.surface(p->surface);
        if (!s || !s->contains({ p->x, p->y }) || !world.free(p->surface, { p->x, p->y })) {
            return false;
        }
    }
    const double res = world.resolution();
    const double dx = (left.x - right.x) * res;
    const double dy = (left.y - right.y) * res;
    const double sep = std::hypot(dx, dy);
    if (sep < params.min_separation - 1e-9 || sep > params.max_separation + 1e-9) {
        return false;
    }
    if (std::abs(foot_z(left, world) - foot_z(right, world)) > params.max_step_height + 1e-9) {
        return false;
    }
    const int dyaw = wrap_bin(left.theta - right.theta);
    if (std::min(dyaw, kThetaBins - dyaw) > params.max_relative_yaw) {
        return false;
    }
    const double a = bin_angle(right.theta);
    if (-std::sin(a) * dx + std::cos(a) * dy <= 1e-9) {
        return false;
    }
    const auto m = project_m(left, right, world);
    return m && world.free(m->surface, m->cell);
}

int goal_vertex(const FootstepGoal& goal, const UnionGraph& graph)
{
    int v = -1;
    if (goal.kind == FootstepGoal::Kind::Region) {
        v = graph.vertex(goal.center.surface, graph.world().cell_at(goal.center.x, goal.center.y));
    } else if (auto m = project_m(goal.left, goal.right, graph.world())) {
        v = graph.vertex(m->surface, m->cell);
    }
    if (v < 0 || !graph.is_free(v)) {
        throw InvalidQuery("goal does not project to a free cell");
    }
    return v;
}

FootstepSpace::FootstepSpace(const UnionGraph& graph, const FootstepParams& params, HeuristicSet& heuristics,
                             const FootstepGoal& goal)
    : m_graph(&graph), m_world(&graph.world()), m_params(params), m_heur(&heuristics), m_goal(goal),
      m_tracking(heuristics.num_homotopy() > 0)
{
    if (m_params.primitives.empty()) {
        throw InvalidQuery("empty primitive set");
    }
    if (m_params.step_cost <= 0) {
        throw InvalidQuery("step cost must be positive");
    }
}

int FootstepSpace::intern(const FootstepState& s)
{
    auto it = m_ids.find(s);
    if (it != m_ids.end()) {
        return it->second;
    }
    if (!is_valid(s.left, s.right, *m_world, m_params)) {
        throw InvalidQuery("footstep state is not valid");
    }
    Record r;
    r.state = s;
    r.m = *project_m(s.left, s.right, *m_world);
    r.vertex = m_graph->vertex(r.m.surface, r.m.cell);
    const int id = int(m_states.size());
    m_states.push_back(r);
    m_ids.emplace(s, id);
    return id;
}

std::optional<Word> FootstepSpace::sig_word(int id) const
{
    const int sig = m_states[id].state.sig;
    if (sig == FootstepState::kOffClass) {
        return std::nullopt;
    }
    return m_words.get(sig);
}

Cost FootstepSpace::graph_distance(int v0, int v1, Cost bound)
{
    if (v0 == v1) {
        return 0;
    }
    std::unordered_map<int, Cost> dist{ { v0, 0 } };
    using Item = std::pair<Cost, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    open.push({ 0, v0 });
    while (!open.empty()) {
        const auto [d, v] = open.top();
        open.pop();
        if (d > dist[v]) {
            continue;
        }
        if (v == v1) {
            return d;
        }
        for (const auto& e : m_graph->edges(v)) {
            const Cost alt = d + e.length;
            if (alt > bound) {
                continue;
            }
            auto [it, inserted] = dist.try_emplace(e.to, alt);
            if (inserted || alt < it->second) {
                it->second = alt;
                open.push({ alt, e.to });
            }
        }
    }
    return kInfiniteCost;
}

const FootstepSpace::Transition& FootstepSpace::transition(int v0, int v1)
{
    const std::uint64_t k = pair_key(v0, v1);
    if (auto it = m_transitions.find(k); it != m_transitions.end()) {
        return it->second;
    }
    Transition t;
    const Cell c0 = m_graph->cell_of(v0);
    const Cell c1 = m_graph->cell_of(v1);
    const int s0 = m_graph->surface_of(v0);
    const int s1 = m_graph->surface_of(v1);
    t.cost = meters_to_mm(std::hypot(c1.x - c0.x, c1.y - c0.y) * m_world->resolution()) + m_params.step_cost;
    // the projected step must not be shorter than the projected workspace allows
    if (graph_distance(v0, v1, t.cost) <= t.cost) {
        try {
            t.word = m_crossings.intern(cell_segment_crossings(c0, s0, c1, s1, *m_world));
            t.valid = true;
        } catch (const InvalidSegment&) {
        } catch (const WorldError&) {
        }
    }
    return m_transitions.emplace(k, t).first->second;
}

int FootstepSpace::extend_sig(int sig, int crossing_word)
{
    if (!m_tracking || sig == FootstepState::kOffClass || crossing_word == WordPool::kEmpty) {
        return sig;
    }
    const std::uint64_t k = pair_key(sig, crossing_word);
    if (auto it = m_sig_steps.find(k); it != m_sig_steps.end()) {
        return it->second;
    }
    const Word next = concat_reduce(m_words.get(sig), m_crossings.get(crossing_word), *m_world);
    const int result = m_heur->in_class(next) ? m_words.intern(next) : FootstepState::kOffClass;
    m_sig_steps.emplace(k, result);
    return result;
}

void FootstepSpace::successors(int id, std::vector<Successor>& out)
{
    const Record from = m_states[id];
    const FootstepState& s = from.state;
    const bool left_moves = s.moving == Foot::Left;
    const FootPose& stance = left_moves ? s.right : s.left;
    const double side = left_moves ? 1.0 : -1.0;
    const double res = m_world->resolution();
    const double a = bin_angle(stance.theta);
    const double z_stance = foot_z(stance, *m_world);

    for (const Primitive& p : m_params.primitives) {
        const double lat = side * (m_params.nominal_width + p.dy);
        const double px = stance.x * res + std::cos(a) * p.dx - std::sin(a) * lat;
        const double py = stance.y * res + std::sin(a) * p.dx + std::cos(a) * lat;
        const Cell c = m_world->cell_at(px, py);
        const int theta = wrap_bin(stance.theta + p.dtheta);
        const Point2 cc = m_world->center(c);
        for (int sid : m_world->surfaces_containing(c)) {
            if (!m_world->free(sid, c) ||
                std::abs(m_world->surface(sid)->height(cc.x, cc.y) - z_stance) > m_params.max_step_height + 1e-9) {
                continue;
            }
            FootstepState n;
            n.left = left_moves ? FootPose{ c.x, c.y, theta, sid } : s.left;
            n.right = left_moves ? s.right : FootPose{ c.x, c.y, theta, sid };
            n.moving = left_moves ? Foot::Right : Foot::Left;
            if (!is_valid(n.left, n.right, *m_world, m_params)) {
                continue;
            }
            const auto m = project_m(n.left, n.right, *m_world);
            const int v1 = m_graph->vertex(m->surface, m->cell);
            const Transition t = transition(from.vertex, v1);
            if (!t.valid) {
                continue;
            }
            n.sig = extend_sig(s.sig, t.word);
            out.push_back({ intern(n), t.cost });
        }
    }
}

bool FootstepSpace::is_goal(int id)
{
    if (m_goal.kind == FootstepGoal::Kind::Poses) {
        const FootstepState& s = m_states[id].state;
        return s.left == m_goal.left && s.right == m_goal.right;
    }
    // gates are free in H_Dijk, so a cell below or above the goal would pass on distance alone
    return m_states[id].m.surface == m_goal.center.surface &&
           m_heur->h_dijk(m_states[id].vertex) <= meters_to_mm(m_goal.radius_m);
}

std::optional<Cost> FootstepSpace::edge_cost(int from, int to)
{
    const Transition& t = transition(m_states[from].vertex, m_states[to].vertex);
    if (!t.valid) {
        return std::nullopt;
    }
    return t.cost;
}

Cost AnchorHeuristic::value(int state) { return m_space.heuristics().eval_anchor(m_space.vertex_of(state)); }

Cost HomotopyHeuristic::value(int state)
{
    const auto w = m_space.sig_word(state);
    if (!w) {
        return kInfiniteCost;
    }
    return m_space.heuristics().eval_homotopy(m_index, m_space.vertex_of(state), *w);
}

} // namespace hplan
