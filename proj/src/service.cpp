#include <hplan/service.h>

#include <cstdlib>
#include <sstream>

#include <httplib.h>

namespace hplan {

namespace {

HttpResponse error(int status, const std::string& message)
{
    return { status, json{ { "error", message } }.dump(), "application/json" };
}

HttpResponse ok(const json& j, int status = 200) { return { status, j.dump(), "application/json" }; }

json csv_to_json(const std::string& csv)
{
    json rows = json::array();
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string f[4];
        for (auto& s : f) {
            std::getline(ls, s, ',');
        }
        rows.push_back({ { "surface", std::stoi(f[0]) },
                         { "x", std::stod(f[1]) },
                         { "y", std::stod(f[2]) },
                         { "value_mm", std::stoll(f[3]) } });
    }
    return rows;
}

} // namespace

Service::Service(WorldSpec spec) : m_spec(std::move(spec)), m_world(build_world(m_spec))
{
    m_graph = std::make_unique<UnionGraph>(m_world);
    m_world_body = world_geometry_json(m_world, m_spec).dump();
}

HttpResponse Service::get_world() const { return { 200, m_world_body, "application/json" }; }

HttpResponse Service::post_refpath(const std::string& body)
{
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        return error(400, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("points")) {
        return error(400, "expected {\"points\": [[x, y, surface], ...]}");
    }
    std::string id;
    if (j.contains("id")) {
        if (!j["id"].is_string() || j["id"].get<std::string>().empty()) {
            return error(400, "id must be a non-empty string");
        }
        id = j["id"].get<std::string>();
    }
    ReferencePath path;
    try {
        path = make_reference_path(id, polyline_from_json(j["points"]), m_world);
    } catch (const std::exception& e) {
        return error(400, e.what());
    }
    std::lock_guard lock(m_state);
    if (path.id.empty()) {
        do {
            path.id = "r" + std::to_string(m_next_ref++);
        } while (m_refs.count(path.id));
    } else if (m_refs.count(path.id)) {
        return error(409, "reference path '" + path.id + "' already exists");
    }
    const json out = to_json(path);
    m_refs.emplace(path.id, std::move(path));
    return ok(out, 201);
}

HttpResponse Service::delete_refpath(const std::string& id)
{
    std::lock_guard lock(m_state);
    if (!m_refs.count(id)) {
        return error(404, "unknown reference path '" + id + "'");
    }
    if (m_refs_in_use.count(id)) {
        return error(409, "reference path '" + id + "' is used by a running plan");
    }
    m_refs.erase(id);
    return ok({ { "deleted", id } });
}

HttpResponse Service::post_plan(const std::string& body)
{
    QuerySpec query;
    try {
        query = query_from_json(json::parse(body), m_world);
    } catch (const json::parse_error& e) {
        return error(400, std::string("malformed JSON: ") + e.what());
    } catch (const std::exception& e) {
        return error(400, e.what());
    }

    std::lock_guard planning(m_planning);
    std::vector<ReferencePath> refs;
    {
        std::lock_guard lock(m_state);
        for (const auto& id : query.refpaths) {
            auto it = m_refs.find(id);
            if (it == m_refs.end()) {
                return error(404, "unknown reference path '" + id + "'");
            }
            refs.push_back(it->second);
        }
        for (const auto& id : query.refpaths) {
            ++m_refs_in_use[id];
        }
    }
    const auto release = [&]() {
        std::lock_guard lock(m_state);
        for (const auto& id : query.refpaths) {
            if (--m_refs_in_use[id] == 0) {
                m_refs_in_use.erase(id);
            }
        }
    };

    PlanOutcome outcome;
    try {
        outcome = run_plan(*m_graph, query, refs);
    } catch (const std::exception& e) {
        release();
        return error(400, e.what());
    }
    release();

    std::lock_guard lock(m_state);
    outcome.record.id = "p" + std::to_string(m_next_plan++);
    const json out = to_json(outcome.record, m_world);
    const std::string id = outcome.record.id;
    m_plans.emplace(id, StoredPlan{ std::move(outcome.record), std::move(outcome.heuristics) });
    return ok(out);
}

HttpResponse Service::get_plan(const std::string& id) const
{
    std::lock_guard lock(m_state);
    auto it = m_plans.find(id);
    if (it == m_plans.end()) {
        return error(404, "unknown plan '" + id + "'");
    }
    return ok(to_json(it->second.record, m_world));
}

HttpResponse Service::get_heuristic(const std::string& plan_id, const std::string& index,
                                    const std::string& format) const
{
    std::lock_guard lock(m_state);
    auto it = m_plans.find(plan_id);
    if (it == m_plans.end()) {
        return error(404, "unknown plan '" + plan_id + "'");
    }
    std::size_t i = 0;
    try {
        std::size_t used = 0;
        const long v = std::stol(index, &used);
        if (used != index.size() || v < 0) {
            throw std::invalid_argument(index);
        }
        i = std::size_t(v);
    } catch (const std::exception&) {
        return error(400, "heuristic index must be a non-negative integer");
    }
    const HeuristicSet& h = *it->second.heuristics;
    if (i > h.num_homotopy()) {
        return error(404, "plan '" + plan_id + "' has no heuristic " + index);
    }
    const std::string csv = heatmap_csv(h, i);
    if (format == "json") {
        return ok({ { "plan_id", plan_id }, { "index", i }, { "cells", csv_to_json(csv) } });
    }
    if (format != "csv") {
        return error(400, "format must be csv or json");
    }
    return { 200, csv, "text/csv" };
}

void Service::mount(httplib::Server& server)
{
    const auto reply = [](httplib::Response& res, const HttpResponse& r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    server.Get("/world", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, get_world()); });
    server.Post("/refpaths", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, post_refpath(req.body));
    });
    server.Delete(R"(/refpaths/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, delete_refpath(req.matches[1]));
    });
    server.Post("/plan", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, post_plan(req.body));
    });
    server.Get(R"(/plan/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, get_plan(req.matches[1]));
    });
    server.Get(R"(/heuristic/([^/]+)/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
        const std::string format = req.has_param("format") ? req.get_param_value("format") : "csv";
        reply(res, get_heuristic(req.matches[1], req.matches[2], format));
    });
}

bool serve(Service& service, const std::string& host, int port)
{
    httplib::Server server;
    service.mount(server);
    return server.listen(host, port);
}

int default_port()
{
    if (const char* p = std::getenv("HPLAN_PORT")) {
        try {
            return std::stoi(p);
        } catch (const std::exception&) {
        }
    }
    return 8080;
}

} // namespace hplan
