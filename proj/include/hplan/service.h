#ifndef HPLAN_SERVICE_H
#define HPLAN_SERVICE_H

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <hplan/io.h>

namespace httplib {
class Server;
}

namespace hplan {

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// HTTP/JSON front end over one loaded world. Handlers are plain methods so
/// they can be exercised without a socket; mount() wires them to a server.
class Service
{
public:
    explicit Service(WorldSpec spec);
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    const World& world() const { return m_world; }
    const UnionGraph& graph() const { return *m_graph; }

    HttpResponse get_world() const;
    HttpResponse post_refpath(const std::string& body);
    HttpResponse delete_refpath(const std::string& id);
    /// Plans run one at a time; concurrent calls wait their turn.
    HttpResponse post_plan(const std::string& body);
    HttpResponse get_plan(const std::string& id) const;
    /// index 0 is the anchor heuristic; format is "csv" or "json".
    HttpResponse get_heuristic(const std::string& plan_id, const std::string& index,
                               const std::string& format = "csv") const;

    void mount(httplib::Server& server);

private:
    struct StoredPlan {
        PlanRecord record;
        std::unique_ptr<HeuristicSet> heuristics;
    };

    WorldSpec m_spec;
    World m_world;
    std::unique_ptr<UnionGraph> m_graph;
    std::string m_world_body;

    mutable std::mutex m_state;
    std::mutex m_planning;
    std::map<std::string, ReferencePath> m_refs;
    std::map<std::string, int> m_refs_in_use;
    std::map<std::string, StoredPlan> m_plans;
    int m_next_ref = 1;
    int m_next_plan = 1;
};

/// Blocks serving on host:port.
bool serve(Service& service, const std::string& host, int port);

/// Port from HPLAN_PORT, else 8080.
int default_port();

} // namespace hplan

#endif
