#ifndef HPLAN_COMMON_H
#define HPLAN_COMMON_H

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace hplan {

/// Distances and costs are integer millimeters throughout.
using Cost = std::int64_t;

inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max() / 4;

inline bool is_finite(Cost c) { return c < kInfiniteCost; }

inline Cost meters_to_mm(double m) { return static_cast<Cost>(m * 1000.0 + (m >= 0 ? 0.5 : -0.5)); }

// error types

struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inconsistent world description: unattributable obstacles, bad letters,
/// ambiguous gate crossings.
struct WorldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidSegment : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidQuery : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Global lattice cell. Cell (gx, gy) is centered at (gx * res, gy * res).
struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct CellHash {
    std::size_t operator()(const Cell& c) const noexcept
    {
        return std::hash<std::uint64_t>()((std::uint64_t(std::uint32_t(c.x)) << 32) | std::uint32_t(c.y));
    }
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned rectangle in meters.
struct Rect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    bool contains(double x, double y) const { return x >= xmin && x <= xmax && y >= ymin && y <= ymax; }
    double area() const { return (xmax - xmin) * (ymax - ymin); }
};

} // namespace hplan

#endif
