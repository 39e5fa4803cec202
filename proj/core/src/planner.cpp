#include "inav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace inav {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Fixed neighbor order: E, N, W, S, NE, NW, SW, SE. Straight moves first so
// ties prefer axis steps.
constexpr int kDx[8] = {1, 0, -1, 0, 1, -1, -1, 1};
constexpr int kDy[8] = {0, 1, 0, -1, 1, 1, -1, -1};

double step_cost(int k, double resolution) {
  return k < 4 ? resolution : resolution * kSqrt2;
}

}  // namespace

OccupancyGrid::OccupancyGrid(Vec2 origin, int nx, int ny, double resolution,
                             double inflation_radius)
    : origin_(origin),
      nx_(nx),
      ny_(ny),
      resolution_(resolution),
      inflation_radius_(inflation_radius),
      cells_(static_cast<size_t>(nx) * ny, 0) {}

int OccupancyGrid::free_cell_count() const {
  int n = 0;
  for (uint8_t c : cells_) n += c == 0;
  return n;
}

OccupancyGrid build_grid(const Scene& scene, double inflation_radius, const GridOptions& options) {
  if (!(options.resolution > 0.0)) throw PlannerError("grid resolution must be > 0");
  int nx = std::max(1, static_cast<int>(std::ceil(scene.floor_bounds.width() / options.resolution)));
  int ny = std::max(1, static_cast<int>(std::ceil(scene.floor_bounds.height() / options.resolution)));
  OccupancyGrid grid(scene.floor_bounds.min, nx, ny, options.resolution, inflation_radius);

  std::vector<PlacedShape> movables;
  if (options.include_movables) {
    for (const MovableObject& o : scene.objects) movables.push_back(o.placed());
  }
  std::vector<PlacedShape> leaves;
  if (options.include_movables || options.doors_block_static) {
    for (const Door& d : scene.doors) leaves.push_back(d.leaf_shape(d.rest_angle));
  }

  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      Vec2 p = grid.cell_center({ix, iy});
      bool occ = false;
      for (const Wall& w : scene.walls) {
        if (distance_point_segment(p, w.segment) <= inflation_radius) {
          occ = true;
          break;
        }
      }
      for (size_t i = 0; !occ && i < movables.size(); ++i) {
        if (distance_point_shape(p, movables[i]) <= inflation_radius) occ = true;
      }
      for (size_t i = 0; !occ && i < leaves.size(); ++i) {
        if (distance_point_shape(p, leaves[i]) <= inflation_radius) occ = true;
      }
      if (occ) grid.set_occupied({ix, iy}, true);
    }
  }
  return grid;
}

OccupancyGrid overlay_movables(const OccupancyGrid& base, const Scene& scene,
                               const std::vector<Pose>& object_poses,
                               const std::vector<double>& door_angles) {
  OccupancyGrid grid = base;
  double r = grid.inflation_radius();
  std::vector<PlacedShape> shapes;
  for (size_t i = 0; i < scene.objects.size(); ++i) {
    const Pose& pose = i < object_poses.size() ? object_poses[i] : scene.objects[i].pose;
    shapes.push_back(place_shape(scene.objects[i].footprint, pose));
  }
  for (size_t i = 0; i < scene.doors.size(); ++i) {
    double angle = i < door_angles.size() ? door_angles[i] : scene.doors[i].rest_angle;
    shapes.push_back(scene.doors[i].leaf_shape(angle));
  }
  for (const PlacedShape& s : shapes) {
    AABB box = s.bounds();
    GridIndex lo = grid.cell_at({box.min.x - r, box.min.y - r});
    GridIndex hi = grid.cell_at({box.max.x + r, box.max.y + r});
    for (int iy = std::max(0, lo.iy); iy <= std::min(grid.ny() - 1, hi.iy); ++iy) {
      for (int ix = std::max(0, lo.ix); ix <= std::min(grid.nx() - 1, hi.ix); ++ix) {
        if (grid.occupied({ix, iy})) continue;
        if (distance_point_shape(grid.cell_center({ix, iy}), s) <= r) {
          grid.set_occupied({ix, iy}, true);
        }
      }
    }
  }
  return grid;
}

GeodesicField::GeodesicField(const OccupancyGrid& grid, GridIndex goal, std::vector<double> dist)
    : grid_(&grid), goal_(goal), dist_(std::move(dist)) {}

namespace {

GridIndex snap_to_free(const OccupancyGrid& grid, const Vec2& goal, double max_snap) {
  GridIndex c = grid.cell_at(goal);
  if (grid.free(c)) return c;
  GridIndex best{-1, -1};
  double best_d = max_snap;
  int reach = static_cast<int>(std::ceil(max_snap / grid.resolution())) + 1;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      GridIndex n{c.ix + dx, c.iy + dy};
      if (!grid.free(n)) continue;
      double d = (grid.cell_center(n) - goal).norm();
      if (d < best_d) {
        best_d = d;
        best = n;
      }
    }
  }
  if (best.ix < 0) throw PlannerError("goal is occupied with no free cell within 0.3 m");
  return best;
}

}  // namespace

GeodesicField geodesic_field(const OccupancyGrid& grid, const Vec2& goal) {
  if (!grid.in_bounds(grid.cell_at(goal))) throw PlannerError("goal outside grid bounds");
  GridIndex goal_cell = snap_to_free(grid, goal, 0.3);

  std::vector<double> dist(static_cast<size_t>(grid.nx()) * grid.ny(), kUnreachable);
  using Entry = std::pair<double, int>;  // (distance, flat index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  size_t goal_flat = grid.index(goal_cell);
  dist[goal_flat] = 0.0;
  open.emplace(0.0, static_cast<int>(goal_flat));

  while (!open.empty()) {
    auto [d, flat] = open.top();
    open.pop();
    if (d > dist[flat]) continue;
    GridIndex c{flat % grid.nx(), flat / grid.nx()};
    for (int k = 0; k < 8; ++k) {
      GridIndex n{c.ix + kDx[k], c.iy + kDy[k]};
      if (!grid.free(n)) continue;
      double nd = d + step_cost(k, grid.resolution());
      size_t nflat = grid.index(n);
      if (nd < dist[nflat]) {
        dist[nflat] = nd;
        open.emplace(nd, static_cast<int>(nflat));
      }
    }
  }
  return GeodesicField(grid, goal_cell, std::move(dist));
}

PathPolyline shortest_path(const GeodesicField& field, const Vec2& start) {
  const OccupancyGrid& grid = field.grid();
  GridIndex c = grid.cell_at(start);
  PathPolyline path;
  if (!grid.free(c) || field.at(c) == kUnreachable) {
    path.reachable = false;
    return path;
  }
  path.points.push_back(grid.cell_center(c));
  while (!(c == field.goal())) {
    double here = field.at(c);
    int best_k = -1;
    double best = kUnreachable;
    for (int k = 0; k < 8; ++k) {
      GridIndex n{c.ix + kDx[k], c.iy + kDy[k]};
      double d = field.at(n);
      if (d == kUnreachable) continue;
      double through = d + step_cost(k, grid.resolution());
      if (through < best) {
        best = through;
        best_k = k;
      }
    }
    if (best_k < 0 || best >= here + 1e-12) break;  // stuck; should not happen on exact fields
    c = {c.ix + kDx[best_k], c.iy + kDy[best_k]};
    path.length += step_cost(best_k, grid.resolution());
    path.points.push_back(grid.cell_center(c));
  }
  return path;
}

std::vector<Vec2> waypoints(const PathPolyline& path, double spacing, int count,
                            const Vec2& from_point) {
  std::vector<Vec2> out;
  if (path.points.empty() || count <= 0) return out;
  const std::vector<Vec2>& pts = path.points;

  // Arc position of the polyline point nearest to from_point.
  double nearest_arc = 0.0, nearest_d = std::numeric_limits<double>::infinity();
  double arc = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) arc += (pts[i] - pts[i - 1]).norm();
    double d = (pts[i] - from_point).norm_sq();
    if (d < nearest_d) {
      nearest_d = d;
      nearest_arc = arc;
    }
  }

  auto point_at_arc = [&](double s) -> Vec2 {
    double acc = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) {
      double seg = (pts[i] - pts[i - 1]).norm();
      if (acc + seg >= s) {
        double t = seg > 0.0 ? (s - acc) / seg : 0.0;
        return pts[i - 1] + (pts[i] - pts[i - 1]) * t;
      }
      acc += seg;
    }
    return pts.back();
  };

  int k = static_cast<int>(std::floor(nearest_arc / spacing + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) {
    double s = (k + i) * spacing;
    out.push_back(s <= path.length ? point_at_arc(s) : pts.back());
  }
  return out;
}

WeightedPlanResult weighted_plan(const OccupancyGrid& grid, const std::vector<double>& cell_penalty,
                                 const Vec2& start, const Vec2& goal) {
  WeightedPlanResult result;
  result.path.reachable = false;
  GridIndex start_cell = grid.cell_at(start);
  GridIndex goal_cell;
  try {
    goal_cell = snap_to_free(grid, goal, 0.3);
  } catch (const PlannerError&) {
    return result;
  }
  if (!grid.in_bounds(start_cell)) return result;
  if (!grid.free(start_cell)) {
    // A robot mid-push can sit on a penalized cell; allow starting there.
    start_cell = snap_to_free(grid, start, 0.3);
  }

  size_t total = static_cast<size_t>(grid.nx()) * grid.ny();
  std::vector<double> cost(total, kUnreachable);
  std::vector<int> parent(total, -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  size_t s0 = grid.index(start_cell);
  cost[s0] = 0.0;
  open.emplace(0.0, static_cast<int>(s0));
  size_t goal_flat = grid.index(goal_cell);

  while (!open.empty()) {
    auto [d, flat] = open.top();
    open.pop();
    if (d > cost[flat]) continue;
    if (static_cast<size_t>(flat) == goal_flat) break;
    GridIndex c{flat % grid.nx(), flat / grid.nx()};
    for (int k = 0; k < 8; ++k) {
      GridIndex n{c.ix + kDx[k], c.iy + kDy[k]};
      if (!grid.free(n)) continue;
      size_t nflat = grid.index(n);
      double penalty = nflat < cell_penalty.size() ? cell_penalty[nflat] : 0.0;
      if (penalty == kUnreachable) continue;
      double nd = d + step_cost(k, grid.resolution()) + penalty;
      if (nd < cost[nflat]) {
        cost[nflat] = nd;
        parent[nflat] = flat;
        open.emplace(nd, static_cast<int>(nflat));
      }
    }
  }
  if (cost[goal_flat] == kUnreachable) return result;

  std::vector<GridIndex> cells;
  for (int flat = static_cast<int>(goal_flat); flat >= 0; flat = parent[flat]) {
    cells.push_back({flat % grid.nx(), flat / grid.nx()});
    if (static_cast<size_t>(flat) == s0) break;
  }
  std::reverse(cells.begin(), cells.end());
  result.cells = cells;
  result.cost = cost[goal_flat];
  result.path.reachable = true;
  for (size_t i = 0; i < cells.size(); ++i) {
    result.path.points.push_back(grid.cell_center(cells[i]));
    if (i > 0) result.path.length += (result.path.points[i] - result.path.points[i - 1]).norm();
  }
  return result;
}

}  // namespace inav
