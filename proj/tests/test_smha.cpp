#include <doctest.h>

#include <queue>
#include <random>

#include <hplan/smha.h>

using namespace hplan;

namespace {

// 8-connected grid; cells are states, '#' blocks.
struct Grid : SearchSpace {
    int nx, ny;
    std::vector<char> cells;
    int goal;

    Grid(std::vector<std::string> rows)
        : nx(int(rows[0].size())), ny(int(rows.size())), goal(-1)
    {
        for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x) {
                cells.push_back(rows[y][x]);
                if (rows[y][x] == 'G') {
                    goal = y * nx + x;
                }
            }
        }
    }
    bool free(int x, int y) const { return x >= 0 && y >= 0 && x < nx && y < ny && cells[y * nx + x] != '#'; }
    int find(char c) const { return int(std::find(cells.begin(), cells.end(), c) - cells.begin()); }

    void successors(int s, std::vector<Successor>& out) override
    {
        const int x = s % nx, y = s / nx;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if ((dx || dy) && free(x + dx, y + dy) && (!dx || !dy || (free(x + dx, y) && free(x, y + dy)))) {
                    out.push_back({ (y + dy) * nx + x + dx, (dx && dy) ? 141 : 100 });
                }
            }
        }
    }
    bool is_goal(int s) override { return s == goal; }
};

struct Octile : Heuristic {
    const Grid& g;
    explicit Octile(const Grid& grid) : g(grid) {}
    Cost value(int s) override
    {
        const int dx = std::abs(s % g.nx - g.goal % g.nx), dy = std::abs(s / g.nx - g.goal / g.nx);
        return 100 * std::max(dx, dy) + 41 * std::min(dx, dy);
    }
};

struct Fixed : Heuristic {
    std::vector<Cost> values;
    Cost value(int s) override { return values[s]; }
};

struct Infinite : Heuristic {
    Cost value(int) override { return kInfiniteCost; }
};

Cost optimum(Grid& g, int start)
{
    std::vector<Cost> d(g.cells.size(), kInfiniteCost);
    std::priority_queue<std::pair<Cost, int>, std::vector<std::pair<Cost, int>>, std::greater<>> q;
    d[start] = 0;
    q.push({ 0, start });
    std::vector<Successor> succ;
    while (!q.empty()) {
        const auto [c, s] = q.top();
        q.pop();
        if (c > d[s]) {
            continue;
        }
        succ.clear();
        g.successors(s, succ);
        for (const auto& n : succ) {
            if (c + n.cost < d[n.state]) {
                d[n.state] = c + n.cost;
                q.push({ d[n.state], n.state });
            }
        }
    }
    return d[g.goal];
}

Grid random_grid(std::mt19937& rng, int n, double density)
{
    std::vector<std::string> rows(n, std::string(n, '.'));
    std::bernoulli_distribution wall(density);
    for (auto& r : rows) {
        for (auto& c : r) {
            c = wall(rng) ? '#' : '.';
        }
    }
    rows[0][0] = 'S';
    rows[n - 1][n - 1] = 'G';
    return Grid(rows);
}

void check_path(Grid& g, const PlanResult& r, int start)
{
    REQUIRE_FALSE(r.path.empty());
    CHECK(r.path.front() == start);
    CHECK(g.is_goal(r.path.back()));
    Cost sum = 0;
    std::vector<Successor> succ;
    for (std::size_t i = 0; i + 1 < r.path.size(); ++i) {
        succ.clear();
        g.successors(r.path[i], succ);
        auto it = std::find_if(succ.begin(), succ.end(), [&](const Successor& s) { return s.state == r.path[i + 1]; });
        REQUIRE(it != succ.end());
        sum += it->cost;
    }
    CHECK(sum == r.cost);
}

} // namespace

TEST_CASE("anchor-only search with w1 = 1 is optimal")
{
    std::mt19937 rng(1);
    int solved = 0;
    for (int i = 0; i < 60; ++i) {
        Grid g = random_grid(rng, 20, 0.25);
        const int start = g.find('S');
        const Cost opt = optimum(g, start);
        Octile h(g);
        const PlanResult r = smha_plan(g, h, {}, start, { 1.0, 1.0, 1000000 });
        if (!is_finite(opt)) {
            CHECK(r.status == PlanStatus::Exhausted);
            continue;
        }
        ++solved;
        REQUIRE(r.status == PlanStatus::Success);
        CHECK(r.cost == opt);
        check_path(g, r, start);
        CHECK(r.stats.expansions.size() == 1);
    }
    CHECK(solved > 20);
}

TEST_CASE("cost stays within w1 * w2 of optimal with arbitrary inadmissible heuristics")
{
    std::mt19937 rng(2);
    int solved = 0;
    for (int i = 0; i < 100; ++i) {
        Grid g = random_grid(rng, 24, 0.2);
        const int start = g.find('S');
        const Cost opt = optimum(g, start);
        if (!is_finite(opt)) {
            continue;
        }
        ++solved;
        Octile anchor(g);
        Fixed junk, scaled;
        std::uniform_int_distribution<Cost> any(0, 5000);
        for (std::size_t s = 0; s < g.cells.size(); ++s) {
            junk.values.push_back(rng() % 10 == 0 ? kInfiniteCost : any(rng));
            scaled.values.push_back(anchor.value(int(s)) * 5);
        }
        const SmhaConfig cfg{ 3.0, 2.0, 1000000 };
        const PlanResult r = smha_plan(g, anchor, { &junk, &scaled }, start, cfg);
        REQUIRE(r.status == PlanStatus::Success);
        CHECK(r.cost <= 6 * opt);
        CHECK(r.stats.max_gate_ratio <= cfg.w2 + 1e-12);
        check_path(g, r, start);
        CHECK(r.stats.expansions.size() == 3);
        CHECK(r.stats.evaluations.size() == 3);
        CHECK(r.stats.settled <= r.stats.total_expansions());
        CHECK(r.stats.generated >= r.stats.settled);
    }
    CHECK(solved > 50);
}

TEST_CASE("misleading and helpful heuristics: plan succeeds within the anchor gate")
{
    // two corridors from S; the upper one dead-ends
    Grid g({ "##################",
             "#S.............#.#",
             "#.################",
             "#...............G#",
             "##################" });
    const int start = g.find('S');
    Octile anchor(g);
    Fixed dead_end, around;
    for (std::size_t s = 0; s < g.cells.size(); ++s) {
        const int x = int(s) % g.nx, y = int(s) / g.nx;
        dead_end.values.push_back(y == 1 ? Cost(100 * (15 - x)) : 5000);
        around.values.push_back(y == 3 ? Cost(100 * (16 - x)) : 5000);
    }
    const SmhaConfig cfg{ 3.0, 2.0, 100000 };
    const PlanResult r = smha_plan(g, anchor, { &dead_end, &around }, start, cfg);
    REQUIRE(r.status == PlanStatus::Success);
    CHECK(r.cost == optimum(g, start));
    CHECK(r.stats.max_gate_ratio <= cfg.w2);
    check_path(g, r, start);
    CHECK(r.stats.expansions[2] > 0);
}

TEST_CASE("infinite inadmissible heuristics fall back to the anchor")
{
    std::mt19937 rng(3);
    for (int i = 0; i < 30; ++i) {
        Grid g = random_grid(rng, 16, 0.2);
        const int start = g.find('S');
        const Cost opt = optimum(g, start);
        Octile anchor(g);
        Infinite inf1, inf2;
        const PlanResult r = smha_plan(g, anchor, { &inf1, &inf2 }, start, { 3.0, 2.0, 100000 });
        if (is_finite(opt)) {
            REQUIRE(r.status == PlanStatus::Success);
            CHECK(r.cost <= 6 * opt);
            CHECK(r.stats.expansions[1] == 0);
            CHECK(r.stats.expansions[2] == 0);
        } else {
            CHECK(r.status == PlanStatus::Exhausted);
        }
    }
}

TEST_CASE("expansion cap and exhaustion")
{
    Grid open({ "S.........", "..........", "..........", ".........G" });
    Octile h(open);
    const PlanResult capped = smha_plan(open, h, {}, open.find('S'), { 1.0, 1.0, 3 });
    CHECK(capped.status == PlanStatus::CapExceeded);
    CHECK(capped.stats.total_expansions() == 3);
    CHECK(capped.path.empty());

    Grid walled({ "S.#....", "..#....", "..#...G" });
    Octile hw(walled);
    const PlanResult none = smha_plan(walled, hw, {}, walled.find('S'), { 3.0, 2.0, 1000 });
    CHECK(none.status == PlanStatus::Exhausted);
    CHECK_FALSE(is_finite(none.cost));
}

TEST_CASE("start at the goal")
{
    Grid g({ "G.." });
    Octile h(g);
    const PlanResult r = smha_plan(g, h, {}, 0, {});
    REQUIRE(r.status == PlanStatus::Success);
    CHECK(r.cost == 0);
    CHECK(r.path == std::vector<int>{ 0 });
}

TEST_CASE("weights below one are rejected")
{
    Grid g({ "S.G" });
    Octile h(g);
    CHECK_THROWS_AS(smha_plan(g, h, {}, 0, { 0.5, 2.0, 10 }), InvalidQuery);
    CHECK_THROWS_AS(smha_plan(g, h, {}, 0, { 3.0, 0.9, 10 }), InvalidQuery);
}

TEST_CASE("status names")
{
    CHECK(std::string(to_string(PlanStatus::Success)) == "success");
    CHECK(std::string(to_string(PlanStatus::CapExceeded)) == "cap_exceeded");
    CHECK(std::string(to_string(PlanStatus::Exhausted)) == "exhausted");
}
