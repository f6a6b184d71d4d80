// JSON-in, JSON-out bindings; the Python package decodes the strings.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <hplan/io.h>
#include <hplan/service.h>

namespace py = pybind11;
using namespace hplan;

namespace {

World world_of(const std::string& world_json) { return build_world(world_spec_from_json(json::parse(world_json))); }

std::vector<SurfacePoint> points_of(const std::string& points_json)
{
    return polyline_from_json(json::parse(points_json));
}

std::pair<std::string, std::string> signature(const std::string& world_json, const std::string& points_json)
{
    const World world = world_of(world_json);
    const ReferencePath p = make_reference_path("path", points_of(points_json), world);
    return { to_string(p.word), to_string(p.h_word) };
}

std::string reduce_word(const std::string& world_json, const std::string& word)
{
    return to_string(reduce(parse_word(word), world_of(world_json)));
}

std::vector<std::string> suffix_set(const std::string& world_json, const std::vector<std::string>& words)
{
    std::vector<Word> parsed;
    for (const auto& w : words) {
        parsed.push_back(parse_word(w));
    }
    std::vector<std::string> out;
    for (const auto& w : suffixes(parsed, world_of(world_json)).members) {
        out.push_back(to_string(w));
    }
    return out;
}

std::string plan(const std::string& world_json, const std::string& query_json, const std::string& refs_json)
{
    const World world = world_of(world_json);
    const UnionGraph graph(world);
    const QuerySpec query = query_from_json(json::parse(query_json), world);
    std::vector<ReferencePath> refs;
    if (!refs_json.empty()) {
        refs = refpaths_from_json(json::parse(refs_json), world);
    }
    PlanRecord record;
    {
        py::gil_scoped_release release;
        record = run_plan(graph, query, refs).record;
    }
    record.id = query.id.empty() ? "p1" : query.id;
    return to_json(record, world).dump();
}

py::tuple response(const HttpResponse& r) { return py::make_tuple(r.status, r.body, r.content_type); }

} // namespace

PYBIND11_MODULE(_hplan, m)
{
    m.doc() = "Footstep planning with homotopy-class heuristics";

    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<InvalidQuery>(m, "InvalidQuery", PyExc_ValueError);
    py::register_exception<InvalidSegment>(m, "InvalidSegment", PyExc_ValueError);

    m.def("signature", &signature, py::arg("world_json"), py::arg("points_json"),
          "(word, reduced word) of a surface polyline");
    m.def("reduce", &reduce_word, py::arg("world_json"), py::arg("word"));
    m.def("suffix_set", &suffix_set, py::arg("world_json"), py::arg("words"));
    m.def("plan", &plan, py::arg("world_json"), py::arg("query_json"), py::arg("refs_json") = std::string());

    py::class_<Service>(m, "Service")
        .def(py::init([](const std::string& world_json) {
                 return std::make_unique<Service>(world_spec_from_json(json::parse(world_json)));
             }),
             py::arg("world_json"))
        .def("get_world", [](const Service& s) { return response(s.get_world()); })
        .def("post_refpath", [](Service& s, const std::string& body) { return response(s.post_refpath(body)); })
        .def("delete_refpath", [](Service& s, const std::string& id) { return response(s.delete_refpath(id)); })
        .def("post_plan",
             [](Service& s, const std::string& body) {
                 HttpResponse r;
                 {
                     py::gil_scoped_release release;
                     r = s.post_plan(body);
                 }
                 return response(r);
             })
        .def("get_plan", [](const Service& s, const std::string& id) { return response(s.get_plan(id)); })
        .def(
            "get_heuristic",
            [](const Service& s, const std::string& plan_id, const std::string& index, const std::string& format) {
                return response(s.get_heuristic(plan_id, index, format));
            },
            py::arg("plan_id"), py::arg("index"), py::arg("format") = "csv");
}
