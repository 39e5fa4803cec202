#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include "inav/planner.hpp"
#include "inav/rng.hpp"
#include "inav/scene.hpp"

using namespace inav;

namespace {

std::string minimal_room(const std::string& objects = "[]") {
  return R"({
    "bounds": {"min": [0, 0], "max": [6, 5]},
    "walls": [
      {"from": [0, 0], "to": [6, 0]},
      {"from": [6, 0], "to": [6, 5]},
      {"from": [6, 5], "to": [0, 5]},
      {"from": [0, 5], "to": [0, 0]}
    ],
    "objects": )" + objects + "}";
}

}  // namespace

TEST_CASE("minimal document: one 4-wall room, no objects") {
  Scene scene = load_scene(minimal_room());
  CHECK(scene.walls.size() == 4);
  CHECK(scene.object_count() == 0);
  CHECK(scene.doors.empty());
}

TEST_CASE("object overlapping a wall is relaxed outward by the overlap") {
  // Chair half-width 0.225; center 0.205 from the wall -> 0.02 overlap.
  Scene scene = load_scene(minimal_room(R"([{"class": "chair", "pose": [3.0, 0.205, 0]}])"));
  REQUIRE(scene.object_count() == 1);
  const MovableObject& chair = scene.objects[0];
  CHECK(chair.pose.y == doctest::Approx(0.225).epsilon(1e-9));
  CHECK(chair.pose.x == doctest::Approx(3.0));
  // Geometric separation oracle: no wall penetration remains.
  for (const Wall& w : scene.walls) {
    CHECK_FALSE(shape_vs_segment(chair.placed(), w.segment));
  }
}

TEST_CASE("unknown class is rejected") {
  CHECK_THROWS_WITH_AS(load_scene(minimal_room(R"([{"class": "lamp", "pose": [3, 3, 0]}])")),
                       doctest::Contains("unknown class"), SceneError);
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    load_scene("{\n  \"bounds\": }");
    FAIL("expected parse error");
  } catch (const SceneError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("invariant violations are rejected") {
  CHECK_THROWS_AS(load_scene(minimal_room(R"([{"class": "pot", "pose": [3, 3, 0], "mass": -1}])")),
                  SceneError);
  CHECK_THROWS_AS(load_scene(minimal_room(R"([{"class": "pot", "pose": [3, 3, 0], "friction": 3.0}])")),
                  SceneError);
  CHECK_THROWS_AS(load_scene(minimal_room(R"([{"class": "pot", "pose": [30, 3, 0]}])")),
                  SceneError);  // outside bounds
}

TEST_CASE("class defaults and overrides") {
  Scene scene = load_scene(R"({
    "bounds": {"min": [0, 0], "max": [6, 5]},
    "walls": [],
    "class_defaults": {"chair": {"mass": 9.5}},
    "objects": [{"class": "chair", "pose": [3, 3, 0]}, {"class": "basket", "pose": [1, 1, 0]}]
  })");
  CHECK(scene.objects[0].mass == 9.5);
  CHECK(scene.objects[0].friction == 0.5);
  CHECK(scene.objects[1].mass == 0.5);
  CHECK(std::get<Circle>(scene.objects[1].footprint).radius == doctest::Approx(0.15));
}

TEST_CASE("scene save/load round trip is stable") {
  Scene scene = generate_scene({3, 9.0, 7.0, 0.4, 0.5, 0.9}, 99);
  std::string a = save_scene(scene);
  Scene reloaded = load_scene(a);
  std::string b = save_scene(reloaded);
  CHECK(a == b);
}

TEST_CASE("generate_scene: zero density two rooms") {
  Scene scene = generate_scene({2, 8.0, 6.0, 0.0, 0.0, 0.9}, 7);
  CHECK(scene.object_count() == 0);
  CHECK(scene.doorways.size() == 1);
  CHECK(scene.doors.empty());
  CHECK(scene.walls.size() >= 5);  // 4 outer + split remnants
}

TEST_CASE("generate_scene is deterministic") {
  SceneGenConfig config{4, 10.0, 8.0, 0.5, 0.5, 0.9};
  CHECK(save_scene(generate_scene(config, 42)) == save_scene(generate_scene(config, 42)));
  CHECK(save_scene(generate_scene(config, 42)) != save_scene(generate_scene(config, 43)));
}

TEST_CASE("generate_scene rooms stay mutually reachable") {
  // Independent flood fill over the static grid.
  for (uint64_t seed : {42ULL, 1ULL, 2ULL}) {
    Scene scene = generate_scene({4, 10.0, 8.0, 0.5, 0.5, 0.9}, seed);
    OccupancyGrid grid = build_grid(scene, 0.15);
    GridIndex first{-1, -1};
    for (int iy = 0; iy < grid.ny() && first.ix < 0; ++iy) {
      for (int ix = 0; ix < grid.nx() && first.ix < 0; ++ix) {
        if (grid.free({ix, iy})) first = {ix, iy};
      }
    }
    REQUIRE(first.ix >= 0);
    std::vector<uint8_t> seen(static_cast<size_t>(grid.nx()) * grid.ny(), 0);
    std::vector<GridIndex> stack{first};
    seen[grid.index(first)] = 1;
    while (!stack.empty()) {
      GridIndex c = stack.back();
      stack.pop_back();
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          GridIndex n{c.ix + dx, c.iy + dy};
          if (!grid.free(n) || seen[grid.index(n)]) continue;
          seen[grid.index(n)] = 1;
          stack.push_back(n);
        }
      }
    }
    int free_total = grid.free_cell_count();
    int reached = 0;
    for (uint8_t s : seen) reached += s;
    // A single connected component of free space.
    CHECK(reached == free_total);
  }
}

TEST_CASE("place_clutter: count zero leaves the scene unchanged") {
  Scene scene = load_scene(minimal_room());
  Scene out = place_clutter(scene, 0, 5);
  CHECK(save_scene(out) == save_scene(scene));
}

TEST_CASE("place_clutter: ten objects in free space, deterministic") {
  Scene scene = generate_scene({2, 8.0, 6.0, 0.2, 0.5, 0.9}, 3);
  Scene a = place_clutter(scene, 10, 11);
  CHECK(a.object_count() == scene.object_count() + 10);
  for (int i = scene.object_count(); i < a.object_count(); ++i) {
    const MovableObject& o = a.objects[i];
    bool is_clutter = false;
    for (ObjectClass c : kClutterClasses) is_clutter |= o.cls == c;
    CHECK(is_clutter);
    CHECK(distance_to_static(a, o.pose.position()) >= shape_bounding_radius(o.footprint));
  }
  // pairwise clutter separation
  for (int i = scene.object_count(); i < a.object_count(); ++i) {
    for (int k = i + 1; k < a.object_count(); ++k) {
      CHECK_FALSE(shapes_overlap(a.objects[i].placed(), a.objects[k].placed()));
    }
  }
  Scene b = place_clutter(scene, 10, 11);
  CHECK(save_scene(a) == save_scene(b));
}

TEST_CASE("place_clutter never edits the static grid") {
  Scene scene = generate_scene({3, 9.0, 7.0, 0.3, 1.0, 0.9}, 17);
  Scene cluttered = place_clutter(scene, 10, 23);
  OccupancyGrid before = build_grid(scene, 0.15);
  OccupancyGrid after = build_grid(cluttered, 0.15);
  REQUIRE(before.nx() == after.nx());
  for (int iy = 0; iy < before.ny(); ++iy) {
    for (int ix = 0; ix < before.nx(); ++ix) {
      CHECK(before.occupied({ix, iy}) == after.occupied({ix, iy}));
    }
  }
}

TEST_CASE("sample_episode: infeasible when the free pocket is under a meter across") {
  Scene scene = load_scene(R"({
    "bounds": {"min": [0, 0], "max": [1.0, 1.0]},
    "walls": [
      {"from": [0, 0], "to": [1.0, 0]},
      {"from": [1.0, 0], "to": [1.0, 1.0]},
      {"from": [1.0, 1.0], "to": [0, 1.0]},
      {"from": [0, 1.0], "to": [0, 0]}
    ],
    "objects": []
  })");
  CHECK_THROWS_AS(sample_episode(scene, 1, 0.3), SceneError);
}

TEST_CASE("sample_episode: start and goal at least 1 m apart and reachable") {
  Scene scene = load_scene(minimal_room());
  for (uint64_t seed = 0; seed < 20; ++seed) {
    EpisodeSpec spec = sample_episode(scene, seed, 0.177);
    CHECK((spec.goal - spec.start.position()).norm() >= 1.0);
    CHECK(spec.start.theta >= 0.0);
    CHECK(spec.start.theta < 2.0 * M_PI);
    OccupancyGrid grid = build_grid(scene, 0.177);
    GeodesicField field = geodesic_field(grid, spec.goal);
    CHECK(field.at(spec.start.position()) != kUnreachable);
  }
}

TEST_CASE("sample_episode start positions are uniform (chi-square, 4x4 bins)") {
  Scene scene = load_scene(minimal_room());
  const double inflation = 0.1;
  double x0 = inflation, x1 = 6.0 - inflation, y0 = inflation, y1 = 5.0 - inflation;
  std::array<int, 16> bins{};
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    EpisodeSpec spec = sample_episode(scene, 1000 + i, inflation);
    int bx = std::min(3, static_cast<int>((spec.start.x - x0) / (x1 - x0) * 4));
    int by = std::min(3, static_cast<int>((spec.start.y - y0) / (y1 - y0) * 4));
    ++bins[by * 4 + bx];
  }
  double expected = n / 16.0;
  double chi2 = 0.0;
  for (int b : bins) chi2 += (b - expected) * (b - expected) / expected;
  boost::math::chi_squared dist(15);
  double p = 1.0 - boost::math::cdf(dist, chi2);
  CHECK(p > 0.01);
}
