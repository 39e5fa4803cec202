#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "inav/scene.hpp"

namespace inav {

class PlannerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridIndex {
  int ix = 0;
  int iy = 0;
  bool operator==(const GridIndex& o) const { return ix == o.ix && iy == o.iy; }
};

struct GridOptions {
  double resolution = 0.05;       // m per cell
  bool include_movables = false;  // current object footprints + door leaves
  bool doors_block_static = false;  // closed leaves as static obstacles
};

class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(Vec2 origin, int nx, int ny, double resolution, double inflation_radius);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double resolution() const { return resolution_; }
  double inflation_radius() const { return inflation_radius_; }
  Vec2 origin() const { return origin_; }

  bool in_bounds(GridIndex c) const {
    return c.ix >= 0 && c.ix < nx_ && c.iy >= 0 && c.iy < ny_;
  }
  bool occupied(GridIndex c) const { return cells_[index(c)]; }
  bool free(GridIndex c) const { return in_bounds(c) && !occupied(c); }
  void set_occupied(GridIndex c, bool v) { cells_[index(c)] = v; }

  Vec2 cell_center(GridIndex c) const {
    return {origin_.x + (c.ix + 0.5) * resolution_, origin_.y + (c.iy + 0.5) * resolution_};
  }
  GridIndex cell_at(const Vec2& p) const {
    return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
            static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
  }
  int free_cell_count() const;
  size_t index(GridIndex c) const { return static_cast<size_t>(c.iy) * nx_ + c.ix; }

 private:
  Vec2 origin_;
  int nx_ = 0, ny_ = 0;
  double resolution_ = 0.05;
  double inflation_radius_ = 0.0;
  std::vector<uint8_t> cells_;
};

OccupancyGrid build_grid(const Scene& scene, double inflation_radius,
                         const GridOptions& options = {});

// Occupancy from the movable bodies only, merged onto a copy of `base`.
OccupancyGrid overlay_movables(const OccupancyGrid& base, const Scene& scene,
                               const std::vector<Pose>& object_poses,
                               const std::vector<double>& door_angles);

constexpr double kUnreachable = std::numeric_limits<double>::infinity();

class GeodesicField {
 public:
  GeodesicField() = default;
  GeodesicField(const OccupancyGrid& grid, GridIndex goal, std::vector<double> dist);

  const OccupancyGrid& grid() const { return *grid_; }
  GridIndex goal() const { return goal_; }
  double at(GridIndex c) const {
    return grid_->in_bounds(c) ? dist_[grid_->index(c)] : kUnreachable;
  }
  double at(const Vec2& p) const { return at(grid_->cell_at(p)); }
  const std::vector<double>& values() const { return dist_; }

 private:
  const OccupancyGrid* grid_ = nullptr;
  GridIndex goal_;
  std::vector<double> dist_;
};

// Exact Dijkstra over 8-connected free cells; straight edges cost one
// resolution, diagonals resolution * sqrt(2). The goal point snaps to the
// nearest free cell within 0.3 m.
GeodesicField geodesic_field(const OccupancyGrid& grid, const Vec2& goal);

struct PathPolyline {
  std::vector<Vec2> points;  // cell centers
  double length = 0.0;
  bool reachable = true;
};

// Greedy descent of the field from `start`, deterministic tie-breaking in the
// neighbor order E, N, W, S, NE, NW, SW, SE.
PathPolyline shortest_path(const GeodesicField& field, const Vec2& start);

// Resamples the path by arc length and returns `count` points ahead of the
// path point nearest to `from_point`, padding with the goal near the end.
std::vector<Vec2> waypoints(const PathPolyline& path, double spacing, int count,
                            const Vec2& from_point);

// Weighted Dijkstra for planning with per-cell traversal penalties (used by
// cost-aware agents). `cell_penalty[i] == infinity` marks forbidden cells.
struct WeightedPlanResult {
  PathPolyline path;
  std::vector<GridIndex> cells;
  double cost = kUnreachable;
};

WeightedPlanResult weighted_plan(const OccupancyGrid& grid, const std::vector<double>& cell_penalty,
                                 const Vec2& start, const Vec2& goal);

}  // namespace inav
