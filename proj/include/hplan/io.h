#ifndef HPLAN_IO_H
#define HPLAN_IO_H

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include <hplan/footstep.h>
#include <hplan/heuristics.h>
#include <hplan/smha.h>
#include <hplan/union_graph.h>
#include <hplan/world.h>

namespace hplan {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

// world files

WorldSpec world_spec_from_json(const json& j);
json to_json(const WorldSpec& spec);
WorldSpec load_world_spec(const std::string& path);

/// Rendering payload: surfaces, inflated obstacle cells, beams and gates.
json world_geometry_json(const World& world, const WorldSpec& spec);

// reference paths

struct ReferencePath {
    std::string id;
    std::vector<SurfacePoint> points;
    Word word;   ///< un-reduced
    Word h_word; ///< reduced
};

/// Computes both words; throws InvalidSegment for paths through obstacles.
ReferencePath make_reference_path(std::string id, std::vector<SurfacePoint> points, const World& world);

std::vector<SurfacePoint> polyline_from_json(const json& j);
json polyline_to_json(const std::vector<SurfacePoint>& points);

/// {paths: [{id, points}]}; words are recomputed on load.
std::vector<ReferencePath> refpaths_from_json(const json& j, const World& world);
json to_json(const std::vector<ReferencePath>& paths);
json to_json(const ReferencePath& path);

// queries

enum class HeuristicChoice { Auto, AnchorOnly, Homotopy };

struct QuerySpec {
    std::string id;
    FootstepState start;
    FootstepGoal goal;
    FootstepParams params;
    HeuristicChoice heuristic_set = HeuristicChoice::Auto;
    double w1 = 3.0;
    double w2 = 2.0;
    std::size_t expansion_cap = 200000;
    std::vector<std::string> refpaths; ///< service only: ids of registered paths
};

QuerySpec query_from_json(const json& j, const World& world);
json to_json(const QuerySpec& q, const World& world);

FootPose foot_pose_from_json(const json& j, const World& world);
json to_json(const FootPose& p, const World& world);

// plan records

struct PlanStep {
    FootPose left;
    FootPose right;
    Foot moving = Foot::Left;
    std::string sig; ///< "off" for states outside every reference class
};

struct PlanRecord {
    std::string id;
    std::string query_id;
    std::string heuristic_set;
    std::vector<std::string> references;
    std::string status;
    Cost cost_mm = kInfiniteCost;
    std::vector<PlanStep> path;
    std::vector<std::size_t> expansions;
    std::vector<std::size_t> heuristic_evaluations;
    std::size_t settled_states = 0;
    std::size_t generated_states = 0;
    std::size_t hbsp_settled = 0;
    double heuristic_build_ms = 0.0;
    double search_ms = 0.0;
};

/// `timing` and `id` are left out when include_volatile is false, which is
/// the form compared between CLI and service runs.
json to_json(const PlanRecord& r, const World& world, bool include_volatile = true);
PlanRecord plan_record_from_json(const json& j, const World& world);

/// A finished plan together with the heuristics that produced it (kept for
/// heatmap export).
struct PlanOutcome {
    PlanRecord record;
    std::unique_ptr<HeuristicSet> heuristics;
};

/// world -> H_Dijk -> HBSP session (when references are used) -> SMHA*.
PlanOutcome run_plan(const UnionGraph& graph, const QuerySpec& query, const std::vector<ReferencePath>& refs);

/// Heatmap CSV: index 0 is the anchor, i > 0 the i-th homotopy heuristic.
std::string heatmap_csv(const HeuristicSet& heuristics, std::size_t index);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace hplan

#endif
