#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <hplan/io.h>
#include <hplan/service.h>

using namespace hplan;

namespace {

std::vector<ReferencePath> load_paths(const std::string& file, const World& world)
{
    const json j = read_json_file(file);
    if (j.contains("paths")) {
        return refpaths_from_json(j, world);
    }
    if (j.contains("points")) {
        return { make_reference_path(j.value("id", std::string("path")), polyline_from_json(j["points"]), world) };
    }
    throw FormatError(file + ": expected 'paths' or 'points'");
}

int cmd_signature(const std::string& world_file, const std::string& path_file)
{
    const World world = build_world(load_world_spec(world_file));
    for (const auto& p : load_paths(path_file, world)) {
        std::cout << to_string(p.word) << '\n' << to_string(p.h_word) << '\n';
    }
    return 0;
}

int cmd_plan(const std::string& world_file, const std::string& query_file, const std::string& refs_file,
             const std::string& out_file, const std::string& heatmap_dir, const std::string& hbsp_dump,
             double drain_m)
{
    const World world = build_world(load_world_spec(world_file));
    const UnionGraph graph(world);
    const QuerySpec query = query_from_json(read_json_file(query_file), world);
    std::vector<ReferencePath> refs;
    if (!refs_file.empty()) {
        refs = load_paths(refs_file, world);
    }
    PlanOutcome outcome = run_plan(graph, query, refs);
    outcome.record.id = query.id.empty() ? "p1" : query.id;

    if (drain_m > 0.0 && outcome.heuristics->session()) {
        outcome.heuristics->session()->drain(meters_to_mm(drain_m));
    }
    const std::string text = to_json(outcome.record, world).dump(2) + "\n";
    if (out_file.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_file, text);
    }
    if (!heatmap_dir.empty()) {
        std::filesystem::create_directories(heatmap_dir);
        for (std::size_t i = 0; i <= outcome.heuristics->num_homotopy(); ++i) {
            write_text_file((std::filesystem::path(heatmap_dir) / ("heuristic_" + std::to_string(i) + ".csv")).string(),
                            heatmap_csv(*outcome.heuristics, i));
        }
    }
    if (!hbsp_dump.empty() && outcome.heuristics->session()) {
        std::ofstream os(hbsp_dump);
        outcome.heuristics->session()->write_csv(os);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{ "Footstep planning with homotopy-class heuristics" };
    app.require_subcommand(1);

    std::string world_file, path_file, query_file, refs_file, out_file, heatmap_dir, hbsp_dump, host = "0.0.0.0";
    double drain_m = 0.0;
    int port = default_port();

    auto* sig = app.add_subcommand("signature", "Print the crossing word and h-signature of reference paths");
    sig->add_option("-w,--world", world_file, "World JSON file")->required()->check(CLI::ExistingFile);
    sig->add_option("-p,--path", path_file, "Polyline or refpaths JSON file")->required()->check(CLI::ExistingFile);

    auto* plan = app.add_subcommand("plan", "Plan footsteps and write a plan record");
    plan->add_option("-w,--world", world_file, "World JSON file")->required()->check(CLI::ExistingFile);
    plan->add_option("-q,--query", query_file, "Query JSON file")->required()->check(CLI::ExistingFile);
    plan->add_option("-r,--refpaths", refs_file, "Reference paths JSON file")->check(CLI::ExistingFile);
    plan->add_option("-o,--out", out_file, "Output plan record (default: stdout)");
    plan->add_option("--heatmaps", heatmap_dir, "Directory for heuristic heatmap CSVs");
    plan->add_option("--hbsp-dump", hbsp_dump, "CSV dump of settled HBSP vertices");
    plan->add_option("--drain", drain_m, "Settle HBSP up to this distance (m) before exporting");

    auto* srv = app.add_subcommand("serve", "Run the HTTP/JSON service");
    srv->add_option("-w,--world", world_file, "World JSON file")->required()->check(CLI::ExistingFile);
    srv->add_option("--host", host, "Listen address");
    srv->add_option("--port", port, "Listen port (default from HPLAN_PORT, else 8080)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sig) {
            return cmd_signature(world_file, path_file);
        }
        if (*plan) {
            return cmd_plan(world_file, query_file, refs_file, out_file, heatmap_dir, hbsp_dump, drain_m);
        }
        if (*srv) {
            Service service(load_world_spec(world_file));
            std::cerr << "listening on " << host << ':' << port << '\n';
            return serve(service, host, port) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
