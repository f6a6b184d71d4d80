#include <hplan/world.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace hplan {

namespace {

int to_lattice(double v, double res) { return static_cast<int>(std::floor(v / res + 0.5)); }

struct CellRange {
    int x0, y0, x1, y1;
    bool empty() const { return x0 >= x1 || y0 >= y1; }
};

CellRange overlap(const Surface& a, const Surface& b)
{
    return { std::max(a.cell_x0(), b.cell_x0()), std::max(a.cell_y0(), b.cell_y0()),
             std::min(a.cell_x1(), b.cell_x1()), std::min(a.cell_y1(), b.cell_y1()) };
}

bool rects_overlap(const Rect& a, const Rect& b)
{
    return a.xmin <= b.xmax && b.xmin <= a.xmax && a.ymin <= b.ymax && b.ymin <= a.ymax;
}

// Pessimistic projection of a point cloud onto one surface's lattice.
std::vector<Cell> project_points(const std::vector<Point3>& points, const Surface& s)
{
    if (points.empty()) {
        return {};
    }
    const double res = s.resolution;
    int xmin = std::numeric_limits<int>::max(), ymin = xmin;
    int xmax = std::numeric_limits<int>::min(), ymax = xmax;
    double zmin = points.front()[2], zmax = zmin;
    for (const auto& p : points) {
        const int x = to_lattice(p[0], res), y = to_lattice(p[1], res);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
        zmin = std::min(zmin, p[2]);
        zmax = std::max(zmax, p[2]);
    }
    const int nz = static_cast<int>(std::floor((zmax - zmin) / res)) + 1;
    VoxelGrid vox(xmin, ymin, xmax - xmin + 1, ymax - ymin + 1, nz, zmin, res);
    for (const auto& p : points) {
        const int k = std::min(nz - 1, static_cast<int>(std::floor((p[2] - zmin) / res)));
        vox.set(to_lattice(p[0], res) - xmin, to_lattice(p[1], res) - ymin, k);
    }

    // clip to the surface; an empty intersection means the piece projects to nothing
    Rect clip{ std::max(s.bounds.xmin, xmin * res), std::max(s.bounds.ymin, ymin * res),
               std::min(s.bounds.xmax, (xmax + 1) * res), std::min(s.bounds.ymax, (ymax + 1) * res) };
    if (clip.xmax <= clip.xmin || clip.ymax <= clip.ymin) {
        return {};
    }
    const Workspace2D ws = pessimistic_project(vox, clip, res);
    std::vector<Cell> cells;
    for (int i = 0; i < ws.size(); ++i) {
        const Cell c = ws.cell(i);
        if (ws.blocked(c) && s.contains(c)) {
            cells.push_back(c);
        }
    }
    return cells;
}

} // namespace

int Surface::cell_x0() const { return to_lattice(bounds.xmin, resolution); }
int Surface::cell_y0() const { return to_lattice(bounds.ymin, resolution); }
int Surface::cell_x1() const { return to_lattice(bounds.xmax, resolution); }
int Surface::cell_y1() const { return to_lattice(bounds.ymax, resolution); }

Workspace2D::Workspace2D(int surface_id, int x0, int y0, int nx, int ny, double resolution)
    : m_surface_id(surface_id), m_x0(x0), m_y0(y0), m_nx(nx), m_ny(ny), m_resolution(resolution),
      m_occ(std::size_t(nx) * ny, 0)
{
}

std::size_t Workspace2D::count_blocked() const { return std::count(m_occ.begin(), m_occ.end(), 1); }

VoxelGrid::VoxelGrid(int x0_, int y0_, int nx_, int ny_, int nz_, double z0_, double resolution_)
    : x0(x0_), y0(y0_), nx(nx_), ny(ny_), nz(nz_), z0(z0_), resolution(resolution_),
      occ(std::size_t(nx_) * ny_ * nz_, 0)
{
}

Workspace2D pessimistic_project(const VoxelGrid& voxels, const Rect& bounds, double resolution)
{
    if (!(resolution > 0.0)) {
        throw ShapeError("resolution must be positive");
    }
    const int x0 = to_lattice(bounds.xmin, resolution), x1 = to_lattice(bounds.xmax, resolution);
    const int y0 = to_lattice(bounds.ymin, resolution), y1 = to_lattice(bounds.ymax, resolution);
    if (x1 <= x0 || y1 <= y0) {
        throw ShapeError("projection bounds are empty");
    }
    if (voxels.occ.size() != std::size_t(voxels.nx) * voxels.ny * voxels.nz) {
        throw ShapeError("voxel grid storage does not match its dimensions");
    }
    Workspace2D ws(-1, x0, y0, x1 - x0, y1 - y0, resolution);
    for (int j = 0; j < voxels.ny; ++j) {
        for (int i = 0; i < voxels.nx; ++i) {
            const Cell c{ voxels.x0 + i, voxels.y0 + j };
            if (!ws.contains(c)) {
                continue;
            }
            for (int k = 0; k < voxels.nz; ++k) {
                if (voxels.occupied(i, j, k)) {
                    ws.set_blocked(c);
                    break;
                }
            }
        }
    }
    return ws;
}

std::optional<SeparatingPlane> separating_plane(const Surface& lower, const Surface& upper)
{
    SeparatingPlane p{ lower.a - upper.a, lower.b - upper.b, 0.0, lower.c - upper.c };
    if (std::abs(p.a) < 1e-12 && std::abs(p.b) < 1e-12) {
        return std::nullopt; // parallel surfaces never meet in a line
    }
    return p;
}

std::vector<ObstaclePiece> subdivide_obstacles(const std::vector<Obstacle3D>& obstacles,
                                               const std::vector<Surface>& surfaces)
{
    struct Pending {
        int source;
        std::vector<Point3> points;
    };

    std::vector<ObstaclePiece> out;
    for (int src = 0; src < int(obstacles.size()); ++src) {
        std::deque<Pending> work{ { src, obstacles[src].points } };
        std::vector<Pending> done;
        while (!work.empty()) {
            Pending cur = std::move(work.front());
            work.pop_front();
            bool split = false;
            for (std::size_t i = 0; i < surfaces.size() && !split; ++i) {
                for (std::size_t j = i + 1; j < surfaces.size() && !split; ++j) {
                    const Surface& si = surfaces[i];
                    const Surface& sj = surfaces[j];
                    if (!rects_overlap(si.bounds, sj.bounds)) {
                        continue;
                    }
                    const auto plane = separating_plane(si, sj);
                    if (!plane) {
                        continue;
                    }
                    bool touches = false;
                    std::vector<Point3> neg, pos;
                    for (const auto& p : cur.points) {
                        touches |= si.bounds.contains(p[0], p[1]) && sj.bounds.contains(p[0], p[1]);
                        (plane->eval(p) <= 0.0 ? neg : pos).push_back(p);
                    }
                    if (touches && !neg.empty() && !pos.empty()) {
                        work.push_back({ cur.source, std::move(neg) });
                        work.push_back({ cur.source, std::move(pos) });
                        split = true;
                    }
                }
            }
            if (!split) {
                done.push_back(std::move(cur));
            }
        }

        std::vector<ObstaclePiece> pieces;
        for (auto& d : done) {
            std::vector<Point3> order = d.points;
            std::sort(order.begin(), order.end(), [](const Point3& a, const Point3& b) {
                return std::tie(a[2], a[0], a[1]) < std::tie(b[2], b[0], b[1]);
            });
            int best = -1;
            for (const auto& p : order) {
                double best_gap = std::numeric_limits<double>::infinity();
                for (const auto& s : surfaces) {
                    if (!s.bounds.contains(p[0], p[1])) {
                        continue;
                    }
                    const double gap = std::abs(p[2] - s.height(p[0], p[1]));
                    if (gap < best_gap) {
                        best_gap = gap;
                        best = s.id;
                    }
                }
                if (best >= 0) {
                    break;
                }
            }
            if (best < 0) {
                std::ostringstream msg;
                msg << "obstacle " << src << " lies outside every surface";
                throw WorldError(msg.str());
            }
            pieces.push_back({ best, src, std::move(d.points) });
        }
        std::stable_sort(pieces.begin(), pieces.end(),
                         [](const ObstaclePiece& a, const ObstaclePiece& b) { return a.surface_id < b.surface_id; });
        for (auto& p : pieces) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

const BeamSpan* Beam::span_on(int sid) const
{
    for (const auto& s : spans) {
        if (s.surface_id == sid) {
            return &s;
        }
    }
    return nullptr;
}

std::vector<Beam> build_beams(std::vector<Obstacle>& obstacles, int& next_letter, std::set<int>& used_letters)
{
    std::vector<Beam> beams;
    const int n = int(obstacles.size());
    std::vector<double> taken;
    for (int k = 0; k < n; ++k) {
        Obstacle& o = obstacles[k];
        if (o.cells.empty()) {
            throw WorldError("obstacle without cells");
        }
        double cx = 0.0, cy = 0.0;
        for (const Cell& c : o.cells) {
            cx += c.x;
            cy += c.y;
        }
        cx /= double(o.cells.size());
        cy /= double(o.cells.size());
        Cell rep = o.cells.front();
        double best = std::numeric_limits<double>::infinity();
        for (const Cell& c : o.cells) {
            const double d = (c.x - cx) * (c.x - cx) + (c.y - cy) * (c.y - cy);
            if (d < best || (d == best && c < rep)) {
                best = d;
                rep = c;
            }
        }
        double x = rep.x;
        if (std::find(taken.begin(), taken.end(), x) != taken.end()) {
            x += double(o.id) / (2.0 * n);
            if (std::find(taken.begin(), taken.end(), x) != taken.end() || x - rep.x >= 0.5) {
                throw WorldError("cannot give obstacle " + std::to_string(o.id) + " a distinct beam x");
            }
        }
        taken.push_back(x);
        o.rep_x = x;
        o.rep_y = rep.y;

        int letter = o.label;
        if (letter == 0) {
            while (used_letters.count(next_letter)) {
                ++next_letter;
            }
            letter = next_letter++;
        }
        used_letters.insert(letter);

        Beam b;
        b.obstacle_id = o.id;
        b.letter = letter;
        b.surface_id = o.surface_id;
        b.x = x;
        b.y = rep.y;
        b.spans.push_back({ o.surface_id, double(rep.y) });
        beams.push_back(std::move(b));
    }
    return beams;
}

std::vector<Gate> build_gates(const std::vector<Surface>& surfaces, const std::vector<Workspace2D>& workspaces)
{
    std::vector<Gate> gates;
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
        for (std::size_t j = i + 1; j < surfaces.size(); ++j) {
            const CellRange r = overlap(surfaces[i], surfaces[j]);
            if (r.empty()) {
                continue;
            }
            Gate g;
            g.lower_surface = std::min(surfaces[i].id, surfaces[j].id);
            g.upper_surface = std::max(surfaces[i].id, surfaces[j].id);
            for (int y = r.y0; y < r.y1; ++y) {
                for (int x = r.x0; x < r.x1; ++x) {
                    const Cell c{ x, y };
                    if (workspaces[i].free(c) && workspaces[j].free(c)) {
                        g.free_points.push_back(c);
                    }
                }
            }
            if (!g.free_points.empty()) {
                gates.push_back(std::move(g));
            }
        }
    }
    return gates;
}

const Surface* World::surface(int id) const
{
    const int i = surface_index(id);
    return i < 0 ? nullptr : &m_surfaces[i];
}

int World::surface_index(int id) const
{
    for (std::size_t i = 0; i < m_surfaces.size(); ++i) {
        if (m_surfaces[i].id == id) {
            return int(i);
        }
    }
    return -1;
}

const Workspace2D& World::workspace(int surface_id) const
{
    const int i = surface_index(surface_id);
    if (i < 0) {
        throw WorldError("unknown surface " + std::to_string(surface_id));
    }
    return m_workspaces[i];
}

const Gate* World::gate_between(int s1, int s2) const
{
    auto it = m_gate_by_pair.find({ std::min(s1, s2), std::max(s1, s2) });
    return it == m_gate_by_pair.end() ? nullptr : &m_gates[it->second];
}

bool World::is_gate_cell(const Gate& g, Cell c) const
{
    const auto idx = &g - m_gates.data();
    return m_gate_cells[idx].count(c) != 0;
}

const LetterInfo& World::letter(int letter) const
{
    auto it = m_letters.find(letter);
    if (it == m_letters.end()) {
        throw WorldError("unknown letter t" + std::to_string(letter));
    }
    return it->second;
}

bool World::commutes(int l1, int l2) const
{
    return m_commuting.count({ std::min(l1, l2), std::max(l1, l2) }) != 0;
}

const std::vector<int>& World::beams_on(int surface_id) const
{
    static const std::vector<int> none;
    auto it = m_beams_on.find(surface_id);
    return it == m_beams_on.end() ? none : it->second;
}

bool World::free(int surface_id, Cell c) const
{
    const int i = surface_index(surface_id);
    return i >= 0 && m_workspaces[i].free(c);
}

std::vector<int> World::surfaces_containing(Cell c) const
{
    std::vector<int> ids;
    for (const auto& s : m_surfaces) {
        if (s.contains(c)) {
            ids.push_back(s.id);
        }
    }
    return ids;
}

Cell World::cell_at(double x, double y) const { return { to_lattice(x, m_resolution), to_lattice(y, m_resolution) }; }

World build_world(const std::vector<Surface>& surfaces_in, std::vector<ObstacleCells> obstacles,
                  const std::vector<GateLabel>& gate_labels, double inflation_radius_m)
{
    if (surfaces_in.empty()) {
        throw WorldError("world has no surfaces");
    }
    World w;
    w.m_surfaces = surfaces_in;
    std::sort(w.m_surfaces.begin(), w.m_surfaces.end(), [](const Surface& a, const Surface& b) { return a.id < b.id; });
    w.m_resolution = w.m_surfaces.front().resolution;
    w.m_inflation = inflation_radius_m;
    for (std::size_t i = 0; i < w.m_surfaces.size(); ++i) {
        const Surface& s = w.m_surfaces[i];
        if (i > 0 && s.id == w.m_surfaces[i - 1].id) {
            throw WorldError("duplicate surface id " + std::to_string(s.id));
        }
        if (!(s.resolution > 0.0) || std::abs(s.resolution - w.m_resolution) > 1e-12) {
            throw WorldError("all surfaces must share one positive resolution");
        }
        if (s.cell_x1() <= s.cell_x0() || s.cell_y1() <= s.cell_y0()) {
            throw WorldError("surface " + std::to_string(s.id) + " has degenerate bounds");
        }
        w.m_workspaces.emplace_back(s.id, s.cell_x0(), s.cell_y0(), s.cell_x1() - s.cell_x0(),
                                    s.cell_y1() - s.cell_y0(), s.resolution);
    }

    // clip, inflate, rasterize
    const double r = inflation_radius_m / w.m_resolution;
    const int ri = static_cast<int>(std::floor(r));
    for (auto& o : obstacles) {
        const Surface* s = w.surface(o.surface_id);
        if (!s) {
            throw WorldError("obstacle on unknown surface " + std::to_string(o.surface_id));
        }
        std::set<Cell> cells;
        for (const Cell& c : o.cells) {
            for (int dy = -ri; dy <= ri; ++dy) {
                for (int dx = -ri; dx <= ri; ++dx) {
                    if (dx * dx + dy * dy > r * r + 1e-9) {
                        continue;
                    }
                    const Cell n{ c.x + dx, c.y + dy };
                    if (s->contains(n)) {
                        cells.insert(n);
                    }
                }
            }
        }
        o.cells.assign(cells.begin(), cells.end());
    }
    std::erase_if(obstacles, [](const ObstacleCells& o) { return o.cells.empty(); });
    for (const auto& o : obstacles) {
        auto& ws = w.m_workspaces[w.surface_index(o.surface_id)];
        for (const Cell& c : o.cells) {
            ws.set_blocked(c);
        }
    }

    // overlap cells blocked on one surface are blocked on both
    for (std::size_t i = 0; i < w.m_surfaces.size(); ++i) {
        for (std::size_t j = i + 1; j < w.m_surfaces.size(); ++j) {
            const CellRange rg = overlap(w.m_surfaces[i], w.m_surfaces[j]);
            for (int y = rg.y0; y < rg.y1; ++y) {
                for (int x = rg.x0; x < rg.x1; ++x) {
                    const Cell c{ x, y };
                    if (w.m_workspaces[i].blocked(c) || w.m_workspaces[j].blocked(c)) {
                        w.m_workspaces[i].set_blocked(c);
                        w.m_workspaces[j].set_blocked(c);
                    }
                }
            }
        }
    }

    std::set<int> used;
    auto claim = [&](int label) {
        if (label == 0) {
            return;
        }
        if (label < 0 || !used.insert(label).second) {
            throw WorldError("letter label t" + std::to_string(label) + " is invalid or used twice");
        }
    };
    for (const auto& o : obstacles) {
        claim(o.label);
    }
    for (const auto& g : gate_labels) {
        claim(g.letter);
    }

    for (std::size_t k = 0; k < obstacles.size(); ++k) {
        Obstacle ob;
        ob.id = int(k);
        ob.surface_id = obstacles[k].surface_id;
        ob.cells = std::move(obstacles[k].cells);
        ob.label = obstacles[k].label;
        w.m_obstacles.push_back(std::move(ob));
    }
    int next = 1;
    w.m_beams = build_beams(w.m_obstacles, next, used);

    w.m_gates = build_gates(w.m_surfaces, w.m_workspaces);
    for (auto& g : w.m_gates) {
        for (const auto& gl : gate_labels) {
            if (std::min(gl.surface_a, gl.surface_b) == g.lower_surface &&
                std::max(gl.surface_a, gl.surface_b) == g.upper_surface) {
                g.letter = gl.letter;
            }
        }
        if (g.letter == 0) {
            while (used.count(next)) {
                ++next;
            }
            g.letter = next++;
            used.insert(g.letter);
        }
    }

    for (std::size_t i = 0; i < w.m_beams.size(); ++i) {
        w.m_letters[w.m_beams[i].letter] = { LetterKind::Beam, int(i) };
    }
    for (std::size_t i = 0; i < w.m_gates.size(); ++i) {
        const Gate& g = w.m_gates[i];
        w.m_letters[g.letter] = { LetterKind::Gate, int(i) };
        w.m_gate_by_pair[{ g.lower_surface, g.upper_surface }] = int(i);
        w.m_gate_cells.emplace_back(g.free_points.begin(), g.free_points.end());
    }

    // carry each beam through gate overlaps it reaches
    for (auto& b : w.m_beams) {
        std::deque<int> frontier{ b.surface_id };
        while (!frontier.empty()) {
            const int sid = frontier.front();
            frontier.pop_front();
            const BeamSpan from = *b.span_on(sid);
            for (const auto& g : w.m_gates) {
                int other;
                if (g.lower_surface == sid) {
                    other = g.upper_surface;
                } else if (g.upper_surface == sid) {
                    other = g.lower_surface;
                } else {
                    continue;
                }
                if (b.span_on(other)) {
                    continue;
                }
                const Surface& t = *w.surface(other);
                const CellRange rg = overlap(*w.surface(sid), t);
                if (b.x < rg.x0 - 0.5 || b.x >= rg.x1 - 0.5 || from.y_start > rg.y1 - 0.5) {
                    continue;
                }
                b.spans.push_back({ other, std::max(from.y_start, t.cell_y0() - 0.5) });
                frontier.push_back(other);
            }
        }
        for (const auto& s : b.spans) {
            w.m_beams_on[s.surface_id].push_back(int(&b - w.m_beams.data()));
        }
    }

    for (const auto& g : w.m_gates) {
        for (const auto& b : w.m_beams) {
            if (b.span_on(g.lower_surface) && b.span_on(g.upper_surface)) {
                w.m_commuting.insert({ std::min(g.letter, b.letter), std::max(g.letter, b.letter) });
            }
        }
    }
    return w;
}

std::vector<Point3> obstacle_points(const ObstacleSpec& spec, double res)
{
    if (spec.kind == ObstacleSpec::Kind::Voxels) {
        return spec.voxels;
    }
    std::vector<Point3> pts;
    const int x0 = to_lattice(spec.min[0], res), x1 = to_lattice(spec.max[0], res);
    const int y0 = to_lattice(spec.min[1], res), y1 = to_lattice(spec.max[1], res);
    const int z0 = to_lattice(spec.min[2], res), z1 = to_lattice(spec.max[2], res);
    for (int z = z0; z < std::max(z1, z0 + 1); ++z) {
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                pts.push_back({ x * res, y * res, z * res });
            }
        }
    }
    return pts;
}

World build_world(const WorldSpec& spec)
{
    if (spec.surfaces.empty()) {
        throw WorldError("world has no surfaces");
    }
    const double res = spec.surfaces.front().resolution;
    std::vector<Obstacle3D> obs3;
    for (const auto& o : spec.obstacles) {
        obs3.push_back({ obstacle_points(o, res), o.labels });
    }
    const auto pieces = subdivide_obstacles(obs3, spec.surfaces);

    std::vector<ObstacleCells> cells;
    std::map<int, int> piece_index;
    for (const auto& p : pieces) {
        const Surface* s = nullptr;
        for (const auto& cand : spec.surfaces) {
            if (cand.id == p.surface_id) {
                s = &cand;
            }
        }
        const int nth = piece_index[p.source]++;
        const auto& labels = obs3[p.source].labels;
        int label = 0;
        if (!labels.empty()) {
            if (nth >= int(labels.size())) {
                throw WorldError("obstacle " + std::to_string(p.source) + " has fewer labels than pieces");
            }
            label = labels[nth];
        }
        cells.push_back({ p.surface_id, project_points(p.points, *s), label });
    }
    for (const auto& [src, count] : piece_index) {
        if (!obs3[src].labels.empty() && int(obs3[src].labels.size()) != count) {
            throw WorldError("obstacle " + std::to_string(src) + " label count does not match its pieces");
        }
    }
    return build_world(spec.surfaces, std::move(cells), spec.gate_labels, spec.inflation_radius_m);
}

} // namespace hplan
