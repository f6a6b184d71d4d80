#ifndef HPLAN_FOOTSTEP_H
#define HPLAN_FOOTSTEP_H

#include <optional>
#include <unordered_map>
#include <vector>

#include <hplan/heuristics.h>
#include <hplan/signature.h>
#include <hplan/smha.h>
#include <hplan/union_graph.h>
#include <hplan/world.h>

namespace hplan {

inline constexpr int kThetaBins = 16;

/// Foot placement on the planning lattice; z follows from the surface.
struct FootPose {
    int x = 0;
    int y = 0;
    int theta = 0; ///< bin in [0, kThetaBins)
    int surface = 0;

    friend bool operator==(const FootPose&, const FootPose&) = default;
};

enum class Foot { Left, Right };

/// Moving-foot displacement relative to its nominal placement beside the
/// stance foot, in the stance frame (meters, x forward, y outward).
struct Primitive {
    double dx = 0.0;
    double dy = 0.0;
    int dtheta = 0; ///< bins
};

std::vector<Primitive> default_primitives();

struct FootstepParams {
    double min_separation = 0.1;
    double max_separation = 0.35;
    double max_step_height = 0.15;
    int max_relative_yaw = 2; ///< bins
    double nominal_width = 0.2;
    Cost step_cost = 50;
    std::vector<Primitive> primitives = default_primitives();
};

struct FootstepState {
    FootPose left;
    FootPose right;
    Foot moving = Foot::Left;
    /// Accumulated signature id in FootstepSpace::words(), kOffClass when no
    /// reference class can still be completed.
    int sig = WordPool::kEmpty;

    static constexpr int kOffClass = -1;

    friend bool operator==(const FootstepState&, const FootstepState&) = default;
};

struct FootstepStateHash {
    std::size_t operator()(const FootstepState& s) const noexcept;
};

double foot_z(const FootPose& p, const World& world);

/// Projected midpoint of the two feet.
struct Projection {
    Cell cell;
    int surface = 0;
};

/// Midpoint rounded half-up on the lattice; surface with height closest to
/// the mean foot height among those containing the cell. nullopt when no
/// surface contains it.
std::optional<Projection> project_m(const FootPose& left, const FootPose& right, const World& world);

bool is_valid(const FootPose& left, const FootPose& right, const World& world, const FootstepParams& params);

struct FootstepGoal {
    enum class Kind { Region, Poses };
    Kind kind = Kind::Region;
    SurfacePoint center;
    double radius_m = 0.0;
    FootPose left;
    FootPose right;
};

/// Goal cell on the union graph for a goal description.
int goal_vertex(const FootstepGoal& goal, const UnionGraph& graph);

/// Footstep lattice as a search space. Signatures are tracked only when the
/// heuristic set carries references.
class FootstepSpace : public SearchSpace
{
public:
    FootstepSpace(const UnionGraph& graph, const FootstepParams& params, HeuristicSet& heuristics,
                  const FootstepGoal& goal);

    int intern(const FootstepState& s);
    const FootstepState& state(int id) const { return m_states[id].state; }
    std::size_t num_states() const { return m_states.size(); }

    /// Union-graph vertex of M(state).
    int vertex_of(int id) const { return m_states[id].vertex; }
    Projection projection_of(int id) const { return m_states[id].m; }

    /// Accumulated signature; nullopt for off-class states.
    std::optional<Word> sig_word(int id) const;
    const WordPool& words() const { return m_words; }
    bool tracking() const { return m_tracking; }

    void successors(int id, std::vector<Successor>& out) override;
    bool is_goal(int id) override;

    /// Cost of the edge between two states' projections, nullopt if they are
    /// not joined by a valid projected step.
    std::optional<Cost> edge_cost(int from, int to);

    const FootstepParams& params() const { return m_params; }
    const UnionGraph& graph() const { return *m_graph; }
    HeuristicSet& heuristics() { return *m_heur; }

private:
    struct Record {
        FootstepState state;
        Projection m;
        int vertex = -1;
    };
    struct Transition {
        bool valid = false;
        Cost cost = 0;
        int word = WordPool::kEmpty; ///< in m_crossings
    };

    const Transition& transition(int v0, int v1);
    Cost graph_distance(int v0, int v1, Cost bound);
    int extend_sig(int sig, int crossing_word);

    const UnionGraph* m_graph;
    const World* m_world;
    FootstepParams m_params;
    HeuristicSet* m_heur;
    FootstepGoal m_goal;
    bool m_tracking;
    std::vector<Record> m_states;
    std::unordered_map<FootstepState, int, FootstepStateHash> m_ids;
    WordPool m_words;
    WordPool m_crossings;
    std::unordered_map<std::uint64_t, Transition> m_transitions;
    std::unordered_map<std::uint64_t, int> m_sig_steps;
    std::vector<Cost> m_scratch;
};

class AnchorHeuristic : public Heuristic
{
public:
    explicit AnchorHeuristic(FootstepSpace& space) : m_space(space) {}
    Cost value(int state) override;

private:
    FootstepSpace& m_space;
};

class HomotopyHeuristic : public Heuristic
{
public:
    HomotopyHeuristic(FootstepSpace& space, std::size_t index) : m_space(space), m_index(index) {}
    Cost value(int state) override;

private:
    FootstepSpace& m_space;
    std::size_t m_index;
};

} // namespace hplan

#endif
