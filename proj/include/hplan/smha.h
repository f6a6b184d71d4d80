#ifndef HPLAN_SMHA_H
#define HPLAN_SMHA_H

#include <cstddef>
#include <vector>

#include <hplan/common.h>

namespace hplan {

struct Successor {
    int state = 0;
    Cost cost = 0;
};

/// Graph the engine searches. State ids are small non-negative integers
/// handed out by the space itself.
class SearchSpace
{
public:
    virtual ~SearchSpace() = default;

    virtual void successors(int state, std::vector<Successor>& out) = 0;
    virtual bool is_goal(int state) = 0;
};

class Heuristic
{
public:
    virtual ~Heuristic() = default;

    /// kInfiniteCost keeps the state out of this heuristic's queue.
    virtual Cost value(int state) = 0;
};

struct SmhaConfig {
    double w1 = 3.0;
    double w2 = 2.0;
    std::size_t expansion_cap = 1000000;
};

enum class PlanStatus { Success, CapExceeded, Exhausted };

const char* to_string(PlanStatus s);

struct SmhaStats {
    std::vector<std::size_t> expansions;  ///< per queue, anchor first
    std::vector<std::size_t> evaluations; ///< per heuristic, anchor first
    std::size_t settled = 0;              ///< states closed by any queue
    std::size_t generated = 0;
    double wall_ms = 0.0;
    /// Largest min_key(i) / min_key(anchor) seen when expanding from an
    /// inadmissible queue; never above w2.
    double max_gate_ratio = 0.0;

    std::size_t total_expansions() const;
};

struct PlanResult {
    PlanStatus status = PlanStatus::Exhausted;
    Cost cost = kInfiniteCost;
    std::vector<int> path; ///< start to goal
    SmhaStats stats;
};

/// Shared multi-heuristic A*: one anchor queue and one queue per
/// inadmissible heuristic sharing g-values and back pointers. An empty
/// `inadmissible` list gives weighted A* with weight w1.
PlanResult smha_plan(SearchSpace& space, Heuristic& anchor, const std::vector<Heuristic*>& inadmissible, int start,
                     const SmhaConfig& config);

} // namespace hplan

#endif
