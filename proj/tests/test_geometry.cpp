#include <doctest.h>

#include <cmath>

#include "inav/geometry.hpp"
#include "inav/rng.hpp"

using namespace inav;

TEST_CASE("closest point and distance to segment") {
  Segment seg{{0, 0}, {4, 0}};
  CHECK(distance_point_segment({2, 3}, seg) == doctest::Approx(3.0));
  CHECK(distance_point_segment({-3, 4}, seg) == doctest::Approx(5.0));
  CHECK(distance_point_segment({6, 0}, seg) == doctest::Approx(2.0));
  Vec2 q = closest_point_on_segment(seg, {2.5, -7});
  CHECK(q.x == doctest::Approx(2.5));
  CHECK(q.y == doctest::Approx(0.0));
}

TEST_CASE("pose frame round trip") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Pose pose{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-4, 4)};
    Vec2 p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    Vec2 back = pose.to_world(pose.to_local(p));
    CHECK(std::abs(back.x - p.x) < 1e-12);
    CHECK(std::abs(back.y - p.y) < 1e-12);
  }
}

TEST_CASE("disc vs segment penetration") {
  Segment wall{{0, 0}, {10, 0}};
  auto hit = disc_vs_segment({5.0, 0.2}, 0.3, wall);
  REQUIRE(hit);
  CHECK(hit->depth == doctest::Approx(0.1));
  CHECK(hit->normal.x == doctest::Approx(0.0));
  CHECK(hit->normal.y == doctest::Approx(1.0));
  CHECK_FALSE(disc_vs_segment({5.0, 0.4}, 0.3, wall));
}

TEST_CASE("disc vs polygon penetration matches sampled oracle") {
  ConvexPolygon rect = make_rectangle(2.0, 1.0);
  PlacedShape s = place_shape(rect, {0, 0, 0});
  auto hit = disc_vs_shape({1.2, 0.0}, 0.3, s);
  REQUIRE(hit);
  CHECK(hit->depth == doctest::Approx(0.1));  // face at x=1, center 0.2 away
  CHECK(hit->normal.x == doctest::Approx(1.0));
  // after moving the disc out by depth * normal the contact vanishes
  Vec2 moved{1.2 + hit->normal.x * hit->depth, hit->normal.y * hit->depth};
  CHECK_FALSE(disc_vs_shape(moved, 0.3 - 1e-9, s));
}

TEST_CASE("polygon vs polygon SAT agrees with point-sampling oracle") {
  Rng rng(42);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    PlacedShape a = place_shape(make_rectangle(rng.uniform(0.4, 2.0), rng.uniform(0.4, 2.0)),
                                {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, 6.28)});
    PlacedShape b = place_shape(make_rectangle(rng.uniform(0.4, 2.0), rng.uniform(0.4, 2.0)),
                                {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, 6.28)});
    bool sat = shapes_overlap(a, b);
    // Oracle: dense point sampling of polygon a membership in b.
    bool sampled = false;
    for (double u = 0.02; u < 1.0 && !sampled; u += 0.04) {
      for (double v = 0.02; v < 1.0 && !sampled; v += 0.04) {
        Vec2 p = a.vertices[0] + (a.vertices[1] - a.vertices[0]) * u +
                 (a.vertices[3] - a.vertices[0]) * v;
        if (point_in_polygon(p, b.vertices)) sampled = true;
      }
    }
    if (sampled) {
      CHECK(sat);
      ++checked;
    }
    if (sat) {
      // MTV separates the pair.
      auto c = shape_vs_shape(a, b);
      REQUIRE(c);
      PlacedShape moved = a;
      for (Vec2& vv : moved.vertices) vv += c->normal * (c->depth + 1e-9);
      moved.center += c->normal * (c->depth + 1e-9);
      CHECK_FALSE(shapes_overlap(moved, b));
    }
  }
  CHECK(checked > 20);  // the sweep actually exercised overlaps
}

TEST_CASE("ray casting against primitives") {
  CHECK(*ray_vs_segment({0, 0}, {1, 0}, {{2, -1}, {2, 1}}) == doctest::Approx(2.0));
  CHECK_FALSE(ray_vs_segment({0, 0}, {1, 0}, {{-2, -1}, {-2, 1}}));
  CHECK(*ray_vs_circle({0, 0}, {1, 0}, {3, 0}, 1.0) == doctest::Approx(2.0));
  CHECK_FALSE(ray_vs_circle({0, 0}, {0, 1}, {3, 0}, 1.0));

  PlacedShape box = place_shape(make_rectangle(1.0, 1.0), {3, 0, 0});
  auto t = ray_vs_shape({0, 0}, {1, 0}, box);
  REQUIRE(t);
  CHECK(*t == doctest::Approx(2.5));
}

TEST_CASE("ray vs rotated polygon matches circle-sampled oracle") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    PlacedShape box = place_shape(make_rectangle(rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5)),
                                  {rng.uniform(1.5, 4.0), rng.uniform(-2, 2), rng.uniform(0, 6.28)});
    double angle = rng.uniform(-0.8, 0.8);
    Vec2 dir{std::cos(angle), std::sin(angle)};
    auto t = ray_vs_shape({0, 0}, dir, box);
    // Oracle: march along the ray and look for polygon membership.
    double t_march = -1.0;
    for (double s = 0.0; s < 8.0; s += 0.002) {
      if (point_in_polygon({dir.x * s, dir.y * s}, box.vertices)) {
        t_march = s;
        break;
      }
    }
    if (t_march >= 0.0) {
      REQUIRE(t);
      CHECK(std::abs(*t - t_march) < 0.005);
    } else if (t) {
      CHECK(*t >= 7.9);  // grazing hits beyond the march are fine
    }
  }
}

TEST_CASE("wrap angle") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(3 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-3 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(2 * M_PI) == doctest::Approx(0.0));
}
