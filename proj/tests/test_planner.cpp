#include <doctest.h>

#include "inav/planner.hpp"
#include "inav/rng.hpp"
#include "oracles.hpp"

using namespace inav;

namespace {

Scene empty_bounds(double w, double h) {
  Scene scene;
  scene.id = "empty";
  scene.floor_bounds = {{0, 0}, {w, h}};
  return scene;
}

Scene box_room(double w, double h) {
  Scene scene = empty_bounds(w, h);
  scene.walls = {{{{0, 0}, {w, 0}}}, {{{w, 0}, {w, h}}}, {{{w, h}, {0, h}}}, {{{0, h}, {0, 0}}}};
  return scene;
}

OccupancyGrid random_grid(Rng& rng, int nx, int ny, double fill) {
  OccupancyGrid grid({0, 0}, nx, ny, 0.05, 0.0);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (rng.uniform() < fill) grid.set_occupied({ix, iy}, true);
    }
  }
  return grid;
}

}  // namespace

TEST_CASE("build_grid: empty bounds give all-free cells") {
  OccupancyGrid grid = build_grid(empty_bounds(2.0, 1.0), 0.2);
  CHECK(grid.free_cell_count() == grid.nx() * grid.ny());
}

TEST_CASE("build_grid: occupancy band around a wall matches per-cell distance") {
  Scene scene = empty_bounds(4.0, 4.0);
  scene.walls.push_back({{{1.0, 1.0}, {3.0, 2.5}}});
  double inflation = 0.18;
  OccupancyGrid grid = build_grid(scene, inflation);
  for (int iy = 0; iy < grid.ny(); ++iy) {
    for (int ix = 0; ix < grid.nx(); ++ix) {
      Vec2 p = grid.cell_center({ix, iy});
      bool expect = distance_point_segment(p, scene.walls[0].segment) <= inflation;
      CHECK(grid.occupied({ix, iy}) == expect);
    }
  }
}

TEST_CASE("build_grid: include_movables strictly adds occupancy") {
  Scene scene = box_room(5, 4);
  MovableObject sofa;
  sofa.id = 1;
  sofa.cls = ObjectClass::sofa;
  sofa.footprint = make_rectangle(1.8, 0.85);
  sofa.pose = {2.5, 2.0, 0.3};
  sofa.mass = 45;
  scene.objects.push_back(sofa);
  GridOptions with;
  with.include_movables = true;
  OccupancyGrid plain = build_grid(scene, 0.15);
  OccupancyGrid full = build_grid(scene, 0.15, with);
  CHECK(full.free_cell_count() < plain.free_cell_count());
}

TEST_CASE("geodesic distances: straight and diagonal offsets") {
  OccupancyGrid grid = build_grid(empty_bounds(2.0, 2.0), 0.0);
  Vec2 goal{1.025, 1.025};  // a cell center
  GeodesicField field = geodesic_field(grid, goal);
  CHECK(field.at(goal) == 0.0);
  CHECK(field.at(Vec2{1.025 - 0.8, 1.025}) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(field.at(Vec2{1.025 + 0.4, 1.025 + 0.4}) == doctest::Approx(0.4 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("geodesic field equals brute-force relaxation exactly") {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    int nx = 8 + static_cast<int>(rng.uniform_int(43));
    int ny = 8 + static_cast<int>(rng.uniform_int(43));
    OccupancyGrid grid = random_grid(rng, nx, ny, 0.25);
    GridIndex goal{static_cast<int>(rng.uniform_int(nx)), static_cast<int>(rng.uniform_int(ny))};
    if (!grid.free(goal)) continue;
    GeodesicField field = geodesic_field(grid, grid.cell_center(goal));
    std::vector<double> expected = oracle::brute_force_distances(grid, goal);
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        GridIndex c{ix, iy};
        if (!grid.free(c)) continue;
        REQUIRE(field.at(c) == expected[grid.index(c)]);
      }
    }
  }
}

TEST_CASE("geodesic monotonicity: adding occupancy never shortens distances") {
  Rng rng(5);
  OccupancyGrid grid = random_grid(rng, 30, 30, 0.15);
  GridIndex goal{15, 15};
  if (!grid.free(goal)) grid.set_occupied(goal, false);
  GeodesicField before = geodesic_field(grid, grid.cell_center(goal));
  OccupancyGrid denser = grid;
  for (int k = 0; k < 40; ++k) {
    GridIndex c{static_cast<int>(rng.uniform_int(30)), static_cast<int>(rng.uniform_int(30))};
    if (!(c == goal)) denser.set_occupied(c, true);
  }
  GeodesicField after = geodesic_field(denser, denser.cell_center(goal));
  for (int iy = 0; iy < 30; ++iy) {
    for (int ix = 0; ix < 30; ++ix) {
      GridIndex c{ix, iy};
      if (!denser.free(c)) continue;
      if (after.at(c) == kUnreachable) continue;
      CHECK(after.at(c) >= before.at(c) - 1e-12);
    }
  }
}

TEST_CASE("goal snapping and the 0.3 m limit") {
  Scene scene = empty_bounds(3.0, 3.0);
  scene.walls.push_back({{{1.5, 0.0}, {1.5, 3.0}}});
  OccupancyGrid grid = build_grid(scene, 0.1);
  // Goal on the wall: snaps to a nearby free cell.
  GeodesicField field = geodesic_field(grid, {1.5, 1.5});
  CHECK(field.at(field.goal()) == 0.0);
  // Goal deep inside a fat occupied region: beyond snapping reach.
  Scene blocked = empty_bounds(3.0, 3.0);
  for (double y = 0.0; y <= 3.0; y += 0.05) {
    blocked.walls.push_back({{{1.0, y}, {2.0, y}}});
  }
  OccupancyGrid bgrid = build_grid(blocked, 0.1);
  CHECK_THROWS_AS(geodesic_field(bgrid, {1.5, 1.5}), PlannerError);
}

TEST_CASE("shortest_path: start at goal cell is a single point") {
  OccupancyGrid grid = build_grid(empty_bounds(2.0, 2.0), 0.0);
  GeodesicField field = geodesic_field(grid, {1.0, 1.0});
  PathPolyline path = shortest_path(field, {1.0, 1.0});
  CHECK(path.points.size() == 1);
  CHECK(path.length == 0.0);
  CHECK(path.reachable);
}

TEST_CASE("shortest_path: straight corridor length within resolution") {
  Scene scene = empty_bounds(4.0, 1.0);
  OccupancyGrid grid = build_grid(scene, 0.0);
  GeodesicField field = geodesic_field(grid, {3.5, 0.5});
  PathPolyline path = shortest_path(field, {0.5, 0.5});
  CHECK(path.reachable);
  CHECK(path.length == doctest::Approx(3.0).epsilon(0.02));
  CHECK(std::abs(path.length - field.at(Vec2{0.5, 0.5})) <= grid.resolution() * std::sqrt(2.0));
}

TEST_CASE("shortest_path around a block: both routes equal, tie-break fixed") {
  Scene scene = empty_bounds(5.0, 5.0);
  // Block centered between start and goal.
  for (double y = 2.0; y <= 3.0; y += 0.05) {
    scene.walls.push_back({{{2.0, y}, {3.0, y}}});
  }
  OccupancyGrid grid = build_grid(scene, 0.05);
  Vec2 start{1.0, 2.5}, goal{4.0, 2.5};
  GeodesicField field = geodesic_field(grid, goal);
  PathPolyline path = shortest_path(field, start);
  CHECK(path.reachable);
  // Both detours have the same field distance; enumerate by reflecting.
  CHECK(std::abs(path.length - field.at(start)) <= grid.resolution() * std::sqrt(2.0) + 1e-9);
  PathPolyline again = shortest_path(field, start);
  REQUIRE(again.points.size() == path.points.size());
  for (size_t i = 0; i < path.points.size(); ++i) {
    CHECK(again.points[i] == path.points[i]);  // deterministic tie-breaks
  }
  CHECK(path.points.back() == grid.cell_center(field.goal()));
}

TEST_CASE("shortest_path: unreachable start is reported") {
  Scene scene = empty_bounds(4.0, 2.0);
  for (double y = 0.0; y <= 2.0; y += 0.05) {
    scene.walls.push_back({{{2.0 - 0.02, y}, {2.0 + 0.02, y}}});
  }
  OccupancyGrid grid = build_grid(scene, 0.1);
  GeodesicField field = geodesic_field(grid, {3.5, 1.0});
  PathPolyline path = shortest_path(field, {0.5, 1.0});
  CHECK_FALSE(path.reachable);
}

TEST_CASE("shortest path length never beats the static optimum when movables load the grid") {
  Scene scene = box_room(6, 5);
  MovableObject table;
  table.id = 1;
  table.cls = ObjectClass::table;
  table.footprint = make_rectangle(0.9, 0.9);
  table.pose = {3.0, 2.5, 0.0};
  table.mass = 20;
  scene.objects.push_back(table);
  OccupancyGrid static_grid = build_grid(scene, 0.15);
  GridOptions with;
  with.include_movables = true;
  OccupancyGrid full_grid = build_grid(scene, 0.15, with);
  Vec2 start{1.0, 2.5}, goal{5.0, 2.5};
  double l_static = geodesic_field(static_grid, goal).at(start);
  double l_full = geodesic_field(full_grid, goal).at(start);
  REQUIRE(l_full != kUnreachable);
  CHECK(l_static <= l_full + 1e-12);
}

TEST_CASE("waypoints: resampling, padding, and the at-goal case") {
  PathPolyline path;
  for (double x = 0.0; x <= 3.0 + 1e-9; x += 0.05) {
    path.points.push_back({x, 0.0});
  }
  path.length = 3.0;

  SUBCASE("from the start: ten points 0.2 m apart") {
    auto wps = waypoints(path, 0.2, 10, {0.0, 0.0});
    REQUIRE(wps.size() == 10);
    for (int i = 0; i < 10; ++i) {
      CHECK(wps[i].x == doctest::Approx(0.2 * (i + 1)).epsilon(1e-9));
      CHECK(wps[i].y == 0.0);
    }
  }
  SUBCASE("short path pads with the goal") {
    PathPolyline stub;
    for (double x = 0.0; x <= 0.5 + 1e-9; x += 0.05) stub.points.push_back({x, 0.0});
    stub.length = 0.5;
    auto wps = waypoints(stub, 0.2, 10, {0.0, 0.0});
    REQUIRE(wps.size() == 10);
    CHECK(wps[0].x == doctest::Approx(0.2));
    CHECK(wps[1].x == doctest::Approx(0.4));
    for (int i = 2; i < 10; ++i) CHECK(wps[i].x == doctest::Approx(0.5));
  }
  SUBCASE("from the goal: the goal repeated") {
    auto wps = waypoints(path, 0.2, 10, {3.0, 0.0});
    REQUIRE(wps.size() == 10);
    for (const Vec2& w : wps) CHECK(w.x == doctest::Approx(3.0));
  }
  SUBCASE("consecutive non-padded points are spacing apart") {
    auto wps = waypoints(path, 0.2, 10, {0.83, 0.4});
    REQUIRE(wps.size() == 10);
    for (size_t i = 1; i < wps.size(); ++i) {
      double gap = (wps[i] - wps[i - 1]).norm();
      if (wps[i].x < 3.0 - 1e-9) CHECK(gap == doctest::Approx(0.2).epsilon(0.05));
    }
  }
}
