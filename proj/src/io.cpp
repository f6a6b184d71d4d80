#include <hplan/io.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hplan {

namespace {

// trims binary noise such as 0.30000000000000004
double clean(double v) { return std::round(v * 1e9) / 1e9; }

void require_version(const json& j, const char* what)
{
    if (!j.is_object()) {
        throw FormatError(std::string(what) + ": expected a JSON object");
    }
    if (!j.contains("format_version") || j["format_version"] != kFormatVersion) {
        throw FormatError(std::string(what) + ": missing or unsupported format_version");
    }
}

template <typename T>
T get(const json& j, const char* key, const char* what)
{
    if (!j.contains(key)) {
        throw FormatError(std::string(what) + ": missing '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string(what) + ": bad '" + key + "': " + e.what());
    }
}

Point3 point3(const json& j, const char* what)
{
    if (!j.is_array() || j.size() != 3) {
        throw FormatError(std::string(what) + ": expected [x, y, z]");
    }
    return { j[0].get<double>(), j[1].get<double>(), j[2].get<double>() };
}

json point3_json(const Point3& p) { return json::array({ clean(p[0]), clean(p[1]), clean(p[2]) }); }

json cell_list(const std::vector<Cell>& cells)
{
    json a = json::array();
    for (const Cell& c : cells) {
        a.push_back({ c.x, c.y });
    }
    return a;
}

double theta_of(int bin) { return clean(bin * (2.0 * M_PI / kThetaBins)); }

int bin_of(double theta)
{
    const double step = 2.0 * M_PI / kThetaBins;
    const int b = static_cast<int>(std::lround(theta / step));
    return ((b % kThetaBins) + kThetaBins) % kThetaBins;
}

} // namespace

WorldSpec world_spec_from_json(const json& j)
{
    require_version(j, "world");
    WorldSpec spec;
    try {
        for (const json& s : get<json>(j, "surfaces", "world")) {
            Surface surf;
            surf.id = get<int>(s, "id", "surface");
            const auto h = get<std::vector<double>>(s, "height", "surface");
            const auto b = get<std::vector<double>>(s, "bounds", "surface");
            if (h.size() != 3 || b.size() != 4) {
                throw FormatError("surface " + std::to_string(surf.id) + ": height needs 3 and bounds 4 numbers");
            }
            surf.a = h[0];
            surf.b = h[1];
            surf.c = h[2];
            surf.bounds = { b[0], b[1], b[2], b[3] };
            surf.resolution = s.value("resolution", 0.1);
            spec.surfaces.push_back(surf);
        }
        if (j.contains("obstacles_3d")) {
            for (const json& o : j["obstacles_3d"]) {
                ObstacleSpec ob;
                if (o.contains("box")) {
                    ob.kind = ObstacleSpec::Kind::Box;
                    ob.min = point3(get<json>(o["box"], "min", "box"), "box min");
                    ob.max = point3(get<json>(o["box"], "max", "box"), "box max");
                } else if (o.contains("voxels")) {
                    ob.kind = ObstacleSpec::Kind::Voxels;
                    for (const json& v : o["voxels"]) {
                        ob.voxels.push_back(point3(v, "voxel"));
                    }
                } else {
                    throw FormatError("obstacle: expected 'box' or 'voxels'");
                }
                if (o.contains("labels")) {
                    ob.labels = o["labels"].get<std::vector<int>>();
                }
                spec.obstacles.push_back(std::move(ob));
            }
        }
        if (j.contains("gates")) {
            for (const json& g : j["gates"]) {
                const auto s = get<std::vector<int>>(g, "surfaces", "gate");
                if (s.size() != 2) {
                    throw FormatError("gate: 'surfaces' needs two ids");
                }
                spec.gate_labels.push_back({ s[0], s[1], get<int>(g, "letter", "gate") });
            }
        }
        spec.inflation_radius_m = j.value("inflation_radius_m", 0.0);
    } catch (const json::exception& e) {
        throw FormatError(std::string("world: ") + e.what());
    }
    return spec;
}

json to_json(const WorldSpec& spec)
{
    json j;
    j["format_version"] = kFormatVersion;
    json surfaces = json::array();
    for (const Surface& s : spec.surfaces) {
        surfaces.push_back({ { "id", s.id },
                             { "height", { clean(s.a), clean(s.b), clean(s.c) } },
                             { "bounds", { clean(s.bounds.xmin), clean(s.bounds.ymin), clean(s.bounds.xmax),
                                           clean(s.bounds.ymax) } },
                             { "resolution", clean(s.resolution) } });
    }
    j["surfaces"] = surfaces;
    json obstacles = json::array();
    for (const ObstacleSpec& o : spec.obstacles) {
        json oj;
        if (o.kind == ObstacleSpec::Kind::Box) {
            oj["box"] = { { "min", point3_json(o.min) }, { "max", point3_json(o.max) } };
        } else {
            json v = json::array();
            for (const Point3& p : o.voxels) {
                v.push_back(point3_json(p));
            }
            oj["voxels"] = v;
        }
        if (!o.labels.empty()) {
            oj["labels"] = o.labels;
        }
        obstacles.push_back(oj);
    }
    j["obstacles_3d"] = obstacles;
    json gates = json::array();
    for (const GateLabel& g : spec.gate_labels) {
        gates.push_back({ { "surfaces", { g.surface_a, g.surface_b } }, { "letter", g.letter } });
    }
    j["gates"] = gates;
    j["inflation_radius_m"] = clean(spec.inflation_radius_m);
    return j;
}

WorldSpec load_world_spec(const std::string& path) { return world_spec_from_json(read_json_file(path)); }

json world_geometry_json(const World& world, const WorldSpec& spec)
{
    const double r = world.resolution();
    json j;
    j["format_version"] = kFormatVersion;
    j["resolution"] = clean(r);
    j["inflation_radius_m"] = clean(world.inflation_radius());
    j["obstacles_3d_count"] = spec.obstacles.size();

    json surfaces = json::array();
    for (const Workspace2D& ws : world.workspaces()) {
        const Surface& s = *world.surface(ws.surface_id());
        std::vector<Cell> blocked;
        for (int i = 0; i < ws.size(); ++i) {
            if (ws.blocked(ws.cell(i))) {
                blocked.push_back(ws.cell(i));
            }
        }
        surfaces.push_back({ { "id", s.id },
                             { "height", { clean(s.a), clean(s.b), clean(s.c) } },
                             { "bounds", { clean(s.bounds.xmin), clean(s.bounds.ymin), clean(s.bounds.xmax),
                                           clean(s.bounds.ymax) } },
                             { "cells", { { "x0", ws.x0() }, { "y0", ws.y0() }, { "nx", ws.nx() }, { "ny", ws.ny() } } },
                             { "blocked", cell_list(blocked) } });
    }
    j["surfaces"] = surfaces;

    json obstacles = json::array();
    for (const Obstacle& o : world.obstacles()) {
        obstacles.push_back({ { "id", o.id },
                              { "surface", o.surface_id },
                              { "rep", { clean(o.rep_x * r), clean(o.rep_y * r) } },
                              { "cells", cell_list(o.cells) } });
    }
    j["obstacles"] = obstacles;

    json beams = json::array();
    for (const Beam& b : world.beams()) {
        json spans = json::array();
        for (const BeamSpan& s : b.spans) {
            spans.push_back({ { "surface", s.surface_id }, { "y_start", clean(s.y_start * r) } });
        }
        beams.push_back({ { "letter", b.letter },
                          { "obstacle", b.obstacle_id },
                          { "surface", b.surface_id },
                          { "x", clean(b.x * r) },
                          { "y", clean(b.y * r) },
                          { "spans", spans } });
    }
    j["beams"] = beams;

    json gates = json::array();
    for (const Gate& g : world.gates()) {
        gates.push_back({ { "letter", g.letter },
                          { "surfaces", { g.lower_surface, g.upper_surface } },
                          { "cells", cell_list(g.free_points) } });
    }
    j["gates"] = gates;
    return j;
}

ReferencePath make_reference_path(std::string id, std::vector<SurfacePoint> points, const World& world)
{
    if (points.empty()) {
        throw FormatError("reference path '" + id + "' has no points");
    }
    ReferencePath p;
    p.id = std::move(id);
    p.points = std::move(points);
    p.word = path_signature(p.points, world);
    p.h_word = reduce(p.word, world);
    return p;
}

std::vector<SurfacePoint> polyline_from_json(const json& j)
{
    if (!j.is_array()) {
        throw FormatError("points: expected an array of [x, y, surface]");
    }
    std::vector<SurfacePoint> pts;
    for (const json& p : j) {
        if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number_integer()) {
            throw FormatError("points: expected [x, y, surface]");
        }
        pts.push_back({ p[0].get<double>(), p[1].get<double>(), p[2].get<int>() });
    }
    return pts;
}

json polyline_to_json(const std::vector<SurfacePoint>& points)
{
    json a = json::array();
    for (const SurfacePoint& p : points) {
        a.push_back({ clean(p.x), clean(p.y), p.surface });
    }
    return a;
}

std::vector<ReferencePath> refpaths_from_json(const json& j, const World& world)
{
    require_version(j, "refpaths");
    std::vector<ReferencePath> out;
    for (const json& p : get<json>(j, "paths", "refpaths")) {
        const std::string id = get<std::string>(p, "id", "refpath");
        for (const auto& existing : out) {
            if (existing.id == id) {
                throw FormatError("refpaths: duplicate id '" + id + "'");
            }
        }
        out.push_back(make_reference_path(id, polyline_from_json(get<json>(p, "points", "refpath")), world));
    }
    return out;
}

json to_json(const ReferencePath& path)
{
    return { { "id", path.id },
             { "points", polyline_to_json(path.points) },
             { "word", to_string(path.word) },
             { "h_word", to_string(path.h_word) } };
}

json to_json(const std::vector<ReferencePath>& paths)
{
    json a = json::array();
    for (const auto& p : paths) {
        a.push_back(to_json(p));
    }
    return { { "format_version", kFormatVersion }, { "paths", a } };
}

FootPose foot_pose_from_json(const json& j, const World& world)
{
    const double x = get<double>(j, "x", "foot");
    const double y = get<double>(j, "y", "foot");
    const Cell c = world.cell_at(x, y);
    FootPose p;
    p.x = c.x;
    p.y = c.y;
    p.theta = bin_of(j.value("theta", 0.0));
    p.surface = get<int>(j, "surface", "foot");
    return p;
}

json to_json(const FootPose& p, const World& world)
{
    const Point2 c = world.center({ p.x, p.y });
    return { { "x", clean(c.x) },
             { "y", clean(c.y) },
             { "z", clean(foot_z(p, world)) },
             { "theta", theta_of(p.theta) },
             { "surface", p.surface } };
}

namespace {

Foot foot_from(const json& j)
{
    const std::string s = j.get<std::string>();
    if (s == "left") {
        return Foot::Left;
    }
    if (s == "right") {
        return Foot::Right;
    }
    throw FormatError("moving foot must be 'left' or 'right'");
}

const char* foot_name(Foot f) { return f == Foot::Left ? "left" : "right"; }

const char* choice_name(HeuristicChoice c)
{
    switch (c) {
    case HeuristicChoice::AnchorOnly:
        return "anchor_only";
    case HeuristicChoice::Homotopy:
        return "homotopy";
    default:
        return "auto";
    }
}

} // namespace

QuerySpec query_from_json(const json& j, const World& world)
{
    require_version(j, "query");
    QuerySpec q;
    try {
        q.id = j.value("id", std::string());
        const json& start = get<json>(j, "start", "query");
        q.start.left = foot_pose_from_json(get<json>(start, "left", "start"), world);
        q.start.right = foot_pose_from_json(get<json>(start, "right", "start"), world);
        q.start.moving = start.contains("moving") ? foot_from(start["moving"]) : Foot::Left;

        const json& goal = get<json>(j, "goal", "query");
        if (goal.contains("center")) {
            const auto c = polyline_from_json(json::array({ goal["center"] }));
            q.goal.kind = FootstepGoal::Kind::Region;
            q.goal.center = c[0];
            q.goal.radius_m = goal.value("radius_m", 0.0);
            if (q.goal.radius_m < 0.0) {
                throw FormatError("goal radius must be non-negative");
            }
        } else {
            q.goal.kind = FootstepGoal::Kind::Poses;
            q.goal.left = foot_pose_from_json(get<json>(goal, "left", "goal"), world);
            q.goal.right = foot_pose_from_json(get<json>(goal, "right", "goal"), world);
        }

        if (j.contains("primitives")) {
            q.params.primitives.clear();
            for (const json& p : j["primitives"]) {
                if (!p.is_array() || p.size() != 3) {
                    throw FormatError("primitive: expected [dx, dy, dtheta_bins]");
                }
                q.params.primitives.push_back({ p[0].get<double>(), p[1].get<double>(), p[2].get<int>() });
            }
        }
        if (j.contains("step_cost_m")) {
            q.params.step_cost = meters_to_mm(j["step_cost_m"].get<double>());
        }
        const std::string hs = j.value("heuristic_set", std::string("auto"));
        if (hs == "auto") {
            q.heuristic_set = HeuristicChoice::Auto;
        } else if (hs == "anchor_only") {
            q.heuristic_set = HeuristicChoice::AnchorOnly;
        } else if (hs == "homotopy") {
            q.heuristic_set = HeuristicChoice::Homotopy;
        } else {
            throw FormatError("heuristic_set must be auto, anchor_only or homotopy");
        }
        q.w1 = j.value("w1", 3.0);
        q.w2 = j.value("w2", 2.0);
        q.expansion_cap = j.value("expansion_cap", std::size_t(200000));
        if (j.contains("refpaths")) {
            q.refpaths = j["refpaths"].get<std::vector<std::string>>();
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("query: ") + e.what());
    }
    if (q.w1 < 1.0 || q.w2 < 1.0) {
        throw FormatError("query: w1 and w2 must be at least 1");
    }
    return q;
}

json to_json(const QuerySpec& q, const World& world)
{
    json j;
    j["format_version"] = kFormatVersion;
    if (!q.id.empty()) {
        j["id"] = q.id;
    }
    j["start"] = { { "left", to_json(q.start.left, world) },
                   { "right", to_json(q.start.right, world) },
                   { "moving", foot_name(q.start.moving) } };
    if (q.goal.kind == FootstepGoal::Kind::Region) {
        j["goal"] = { { "center", { clean(q.goal.center.x), clean(q.goal.center.y), q.goal.center.surface } },
                      { "radius_m", clean(q.goal.radius_m) } };
    } else {
        j["goal"] = { { "left", to_json(q.goal.left, world) }, { "right", to_json(q.goal.right, world) } };
    }
    json prims = json::array();
    for (const Primitive& p : q.params.primitives) {
        prims.push_back({ clean(p.dx), clean(p.dy), p.dtheta });
    }
    j["primitives"] = prims;
    j["step_cost_m"] = clean(q.params.step_cost / 1000.0);
    j["heuristic_set"] = choice_name(q.heuristic_set);
    j["w1"] = q.w1;
    j["w2"] = q.w2;
    j["expansion_cap"] = q.expansion_cap;
    if (!q.refpaths.empty()) {
        j["refpaths"] = q.refpaths;
    }
    return j;
}

json to_json(const PlanRecord& r, const World& world, bool include_volatile)
{
    json j;
    j["format_version"] = kFormatVersion;
    if (include_volatile) {
        j["id"] = r.id;
    }
    j["query_id"] = r.query_id;
    j["heuristic_set"] = r.heuristic_set;
    j["references"] = r.references;
    j["queues"] = r.expansions.size();
    j["status"] = r.status;
    j["cost_mm"] = is_finite(r.cost_mm) ? json(r.cost_mm) : json(nullptr);
    json path = json::array();
    for (const PlanStep& s : r.path) {
        path.push_back({ { "left", to_json(s.left, world) },
                         { "right", to_json(s.right, world) },
                         { "moving", foot_name(s.moving) },
                         { "sig", s.sig } });
    }
    j["path"] = path;
    j["expansions"] = r.expansions;
    j["heuristic_evaluations"] = r.heuristic_evaluations;
    j["settled_states"] = r.settled_states;
    j["generated_states"] = r.generated_states;
    j["hbsp_settled"] = r.hbsp_settled;
    if (include_volatile) {
        j["timing"] = { { "heuristic_build_ms", r.heuristic_build_ms }, { "search_ms", r.search_ms } };
    }
    return j;
}

PlanRecord plan_record_from_json(const json& j, const World& world)
{
    require_version(j, "plan record");
    PlanRecord r;
    try {
        r.id = j.value("id", std::string());
        r.query_id = j.value("query_id", std::string());
        r.heuristic_set = get<std::string>(j, "heuristic_set", "plan record");
        r.references = j.value("references", std::vector<std::string>());
        r.status = get<std::string>(j, "status", "plan record");
        r.cost_mm = j["cost_mm"].is_null() ? kInfiniteCost : j["cost_mm"].get<Cost>();
        for (const json& s : get<json>(j, "path", "plan record")) {
            PlanStep step;
            step.left = foot_pose_from_json(s["left"], world);
            step.right = foot_pose_from_json(s["right"], world);
            step.moving = foot_from(s["moving"]);
            step.sig = s.value("sig", std::string("^"));
            r.path.push_back(step);
        }
        r.expansions = get<std::vector<std::size_t>>(j, "expansions", "plan record");
        r.heuristic_evaluations = get<std::vector<std::size_t>>(j, "heuristic_evaluations", "plan record");
        r.settled_states = j.value("settled_states", std::size_t(0));
        r.generated_states = j.value("generated_states", std::size_t(0));
        r.hbsp_settled = j.value("hbsp_settled", std::size_t(0));
        if (j.contains("timing")) {
            r.heuristic_build_ms = j["timing"].value("heuristic_build_ms", 0.0);
            r.search_ms = j["timing"].value("search_ms", 0.0);
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("plan record: ") + e.what());
    }
    return r;
}

PlanOutcome run_plan(const UnionGraph& graph, const QuerySpec& query, const std::vector<ReferencePath>& refs)
{
    using clock = std::chrono::steady_clock;
    PlanOutcome out;
    PlanRecord& rec = out.record;
    rec.query_id = query.id;

    const bool homotopy = query.heuristic_set == HeuristicChoice::Homotopy ||
                          (query.heuristic_set == HeuristicChoice::Auto && !refs.empty());
    if (query.heuristic_set == HeuristicChoice::Homotopy && refs.empty()) {
        throw InvalidQuery("homotopy heuristics requested without reference paths");
    }
    std::vector<Word> words;
    if (homotopy) {
        for (const auto& r : refs) {
            words.push_back(r.word);
            rec.references.push_back(r.id);
        }
    }
    rec.heuristic_set = homotopy ? "homotopy" : "anchor_only";

    const auto t0 = clock::now();
    const int goal = goal_vertex(query.goal, graph);
    out.heuristics =
        std::make_unique<HeuristicSet>(graph, goal, words, query.w2, meters_to_mm(query.goal.radius_m));
    const auto t1 = clock::now();
    rec.heuristic_build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    FootstepSpace space(graph, query.params, *out.heuristics, query.goal);
    FootstepState start = query.start;
    start.sig = WordPool::kEmpty;
    const int start_id = space.intern(start);

    AnchorHeuristic anchor(space);
    std::vector<std::unique_ptr<HomotopyHeuristic>> hs;
    std::vector<Heuristic*> inad;
    for (std::size_t i = 0; i < words.size(); ++i) {
        hs.push_back(std::make_unique<HomotopyHeuristic>(space, i));
        inad.push_back(hs.back().get());
    }
    SmhaConfig cfg;
    cfg.w1 = query.w1;
    cfg.w2 = query.w2;
    cfg.expansion_cap = query.expansion_cap;
    const PlanResult res = smha_plan(space, anchor, inad, start_id, cfg);
    rec.search_ms = std::chrono::duration<double, std::milli>(clock::now() - t1).count();

    rec.status = to_string(res.status);
    rec.cost_mm = res.cost;
    for (int id : res.path) {
        const FootstepState& s = space.state(id);
        const auto w = space.sig_word(id);
        rec.path.push_back({ s.left, s.right, s.moving, w ? to_string(*w) : std::string("off") });
    }
    rec.expansions = res.stats.expansions;
    rec.heuristic_evaluations = res.stats.evaluations;
    rec.settled_states = res.stats.settled;
    rec.generated_states = res.stats.generated;
    rec.hbsp_settled = out.heuristics->session() ? out.heuristics->session()->expansions() : 0;
    return out;
}

std::string heatmap_csv(const HeuristicSet& heuristics, std::size_t index)
{
    std::ostringstream os;
    if (index == 0) {
        heuristics.write_anchor_csv(os);
    } else {
        heuristics.write_homotopy_csv(index - 1, os);
    }
    return os.str();
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw FormatError("cannot write " + path);
    }
    out << text;
}

} // namespace hplan
