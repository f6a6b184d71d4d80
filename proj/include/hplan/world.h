#ifndef HPLAN_WORLD_H
#define HPLAN_WORLD_H

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <hplan/common.h>

namespace hplan {

using Point3 = std::array<double, 3>;

/// A bounded plane z = a*x + b*y + c.
struct Surface {
    int id = 0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    Rect bounds;
    double resolution = 0.1;

    double height(double x, double y) const { return a * x + b * y + c; }

    /// Lattice cells covered by this surface: [x0, x1) x [y0, y1).
    int cell_x0() const;
    int cell_y0() const;
    int cell_x1() const;
    int cell_y1() const;
    bool contains(Cell c) const
    {
        return c.x >= cell_x0() && c.x < cell_x1() && c.y >= cell_y0() && c.y < cell_y1();
    }
};

/// Occupancy bitmap over a rectangular block of lattice cells.
class Workspace2D
{
public:
    Workspace2D() = default;
    Workspace2D(int surface_id, int x0, int y0, int nx, int ny, double resolution);

    int surface_id() const { return m_surface_id; }
    int x0() const { return m_x0; }
    int y0() const { return m_y0; }
    int nx() const { return m_nx; }
    int ny() const { return m_ny; }
    double resolution() const { return m_resolution; }
    Point2 origin() const { return { m_x0 * m_resolution, m_y0 * m_resolution }; }

    bool contains(Cell c) const
    {
        return c.x >= m_x0 && c.x < m_x0 + m_nx && c.y >= m_y0 && c.y < m_y0 + m_ny;
    }

    /// Cells outside the workspace count as blocked.
    bool blocked(Cell c) const { return !contains(c) || m_occ[index(c)] != 0; }
    bool free(Cell c) const { return !blocked(c); }
    void set_blocked(Cell c, bool b = true) { m_occ[index(c)] = b ? 1 : 0; }

    int index(Cell c) const { return (c.y - m_y0) * m_nx + (c.x - m_x0); }
    Cell cell(int index) const { return { m_x0 + index % m_nx, m_y0 + index / m_nx }; }
    int size() const { return m_nx * m_ny; }
    std::size_t count_blocked() const;

private:
    int m_surface_id = -1;
    int m_x0 = 0;
    int m_y0 = 0;
    int m_nx = 0;
    int m_ny = 0;
    double m_resolution = 0.1;
    std::vector<std::uint8_t> m_occ;
};

/// Dense 3D occupancy over lattice cells; voxel (i, j, k) sits at lattice
/// column (x0 + i, y0 + j) and height z0 + k * resolution.
struct VoxelGrid {
    int x0 = 0;
    int y0 = 0;
    int nx = 0;
    int ny = 0;
    int nz = 0;
    double z0 = 0.0;
    double resolution = 0.1;
    std::vector<std::uint8_t> occ;

    VoxelGrid() = default;
    VoxelGrid(int x0, int y0, int nx, int ny, int nz, double z0, double resolution);

    std::size_t index(int i, int j, int k) const { return (std::size_t(k) * ny + j) * nx + i; }
    bool occupied(int i, int j, int k) const { return occ[index(i, j, k)] != 0; }
    void set(int i, int j, int k, bool v = true) { occ[index(i, j, k)] = v ? 1 : 0; }
};

/// Column-wise projection: a 2D cell is blocked iff any voxel above it is.
/// Voxels outside `bounds` are ignored.
Workspace2D pessimistic_project(const VoxelGrid& voxels, const Rect& bounds, double resolution);

/// Vertical plane a*x + b*y + c*z + d = 0 (c is always 0) through the line
/// where two surfaces meet.
struct SeparatingPlane {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    double eval(const Point3& p) const { return a * p[0] + b * p[1] + c * p[2] + d; }
};

std::optional<SeparatingPlane> separating_plane(const Surface& lower, const Surface& upper);

struct Obstacle3D {
    std::vector<Point3> points;
    /// Optional letter ids, one per piece after subdivision (ordered by
    /// surface id of the piece).
    std::vector<int> labels;
};

struct ObstaclePiece {
    int surface_id = 0;
    int source = 0;
    std::vector<Point3> points;
};

/// Splits obstacles along every separating plane they straddle and assigns
/// each piece to a surface. Output order: by source obstacle, then by
/// surface id.
std::vector<ObstaclePiece> subdivide_obstacles(const std::vector<Obstacle3D>& obstacles,
                                               const std::vector<Surface>& surfaces);

struct Obstacle {
    int id = 0;
    int surface_id = 0;
    std::vector<Cell> cells;
    /// Representative point p_k in lattice units (x may carry a sub-cell
    /// perturbation).
    double rep_x = 0.0;
    double rep_y = 0.0;
    int label = 0; ///< requested letter id, 0 = auto
};

struct BeamSpan {
    int surface_id = 0;
    double y_start = 0.0; ///< lattice units
};

/// Vertical ray x = rep_x, y >= rep_y toward +y, present on its native
/// surface and on every surface it reaches through a gate overlap.
struct Beam {
    int obstacle_id = 0;
    int letter = 0;
    int surface_id = 0;
    double x = 0.0; ///< lattice units
    double y = 0.0; ///< lattice units
    std::vector<BeamSpan> spans;

    const BeamSpan* span_on(int surface_id) const;
};

struct Gate {
    int letter = 0;
    int lower_surface = 0;
    int upper_surface = 0;
    std::vector<Cell> free_points;
};

struct ObstacleCells {
    int surface_id = 0;
    std::vector<Cell> cells;
    int label = 0;
};

struct GateLabel {
    int surface_a = 0;
    int surface_b = 0;
    int letter = 0;
};

struct ObstacleSpec {
    enum class Kind { Box, Voxels };
    Kind kind = Kind::Box;
    Point3 min{};
    Point3 max{};
    std::vector<Point3> voxels;
    std::vector<int> labels;
};

/// Input description of a world, as stored in world files.
struct WorldSpec {
    std::vector<Surface> surfaces;
    std::vector<ObstacleSpec> obstacles;
    std::vector<GateLabel> gate_labels;
    double inflation_radius_m = 0.0;
};

/// Representative points (centroid snapped to a cell, de-duplicated in x)
/// and one beam per obstacle. Letters are taken from obstacle labels or
/// assigned from `next_letter` upward.
std::vector<Beam> build_beams(std::vector<Obstacle>& obstacles, int& next_letter, std::set<int>& used_letters);

/// One gate per overlapping surface pair with at least one cell free on both.
std::vector<Gate> build_gates(const std::vector<Surface>& surfaces, const std::vector<Workspace2D>& workspaces);

enum class LetterKind { Beam, Gate };

struct LetterInfo {
    LetterKind kind = LetterKind::Beam;
    int index = 0; ///< into beams() or gates()
};

class World
{
public:
    double resolution() const { return m_resolution; }

    const std::vector<Surface>& surfaces() const { return m_surfaces; }
    const Surface* surface(int id) const;
    int surface_index(int id) const;

    const std::vector<Workspace2D>& workspaces() const { return m_workspaces; }
    const Workspace2D& workspace(int surface_id) const;

    const std::vector<Obstacle>& obstacles() const { return m_obstacles; }
    const std::vector<Beam>& beams() const { return m_beams; }
    const std::vector<Gate>& gates() const { return m_gates; }

    const Gate* gate_between(int s1, int s2) const;
    bool is_gate_cell(const Gate& g, Cell c) const;

    bool has_letter(int letter) const { return m_letters.count(letter) != 0; }
    const LetterInfo& letter(int letter) const;
    const std::map<int, LetterInfo>& letters() const { return m_letters; }

    /// Gate/beam letter pairs that commute (beam present on both sides).
    bool commutes(int l1, int l2) const;

    /// Beams with a span on the given surface.
    const std::vector<int>& beams_on(int surface_id) const;

    bool free(int surface_id, Cell c) const;
    std::vector<int> surfaces_containing(Cell c) const;

    Cell cell_at(double x, double y) const;
    Point2 center(Cell c) const { return { c.x * m_resolution, c.y * m_resolution }; }

    double inflation_radius() const { return m_inflation; }

    friend World build_world(const std::vector<Surface>&, std::vector<ObstacleCells>, const std::vector<GateLabel>&,
                             double);

private:
    double m_resolution = 0.1;
    double m_inflation = 0.0;
    std::vector<Surface> m_surfaces;
    std::vector<Workspace2D> m_workspaces;
    std::vector<Obstacle> m_obstacles;
    std::vector<Beam> m_beams;
    std::vector<Gate> m_gates;
    std::vector<std::unordered_set<Cell, CellHash>> m_gate_cells;
    std::map<std::pair<int, int>, int> m_gate_by_pair;
    std::map<int, LetterInfo> m_letters;
    std::set<std::pair<int, int>> m_commuting;
    std::map<int, std::vector<int>> m_beams_on;
};

/// Builds a world from obstacles already rasterized to surface cells.
World build_world(const std::vector<Surface>& surfaces, std::vector<ObstacleCells> obstacles,
                  const std::vector<GateLabel>& gate_labels = {}, double inflation_radius_m = 0.0);

/// Full pipeline: voxelize, subdivide, project, inflate, beams, gates.
World build_world(const WorldSpec& spec);

/// Voxel centers covered by an obstacle spec.
std::vector<Point3> obstacle_points(const ObstacleSpec& spec, double resolution);

} // namespace hplan

#endif
