#include <algorithm>
#include <cmath>

#include "inav/planner.hpp"
#include "inav/rng.hpp"
#include "inav/scene.hpp"

namespace inav {

namespace {

constexpr double kMinRoomSide = 1.8;
constexpr double kWallMargin = 0.25;  // doorway distance from room corners

struct Room {
  AABB box;
  Vec2 center() const { return (box.min + box.max) * 0.5; }
};

// Binary-split the floor into exactly `count` axis-aligned rooms.
std::vector<Room> split_rooms(const AABB& bounds, int count, Rng& rng) {
  std::vector<Room> rooms{{bounds}};
  while (static_cast<int>(rooms.size()) < count) {
    // Split the largest splittable room.
    int best = -1;
    double best_area = 0.0;
    for (size_t i = 0; i < rooms.size(); ++i) {
      const AABB& b = rooms[i].box;
      if (std::max(b.width(), b.height()) < 2.0 * kMinRoomSide) continue;
      if (b.area() > best_area) {
        best_area = b.area();
        best = static_cast<int>(i);
      }
    }
    if (best < 0) throw SceneError("floor extent too small for requested room count");
    AABB b = rooms[best].box;
    bool split_x = b.width() >= b.height();
    double lo = (split_x ? b.min.x : b.min.y) + kMinRoomSide;
    double hi = (split_x ? b.max.x : b.max.y) - kMinRoomSide;
    double at = rng.uniform(lo, hi);
    Room left = rooms[best], right = rooms[best];
    if (split_x) {
      left.box.max.x = at;
      right.box.min.x = at;
    } else {
      left.box.max.y = at;
      right.box.min.y = at;
    }
    rooms[best] = left;
    rooms.push_back(right);
  }
  return rooms;
}

// Shared boundary between two room boxes, or zero-length if not adjacent.
Segment shared_edge(const AABB& a, const AABB& b) {
  const double eps = 1e-9;
  if (std::abs(a.max.x - b.min.x) < eps || std::abs(b.max.x - a.min.x) < eps) {
    double x = std::abs(a.max.x - b.min.x) < eps ? a.max.x : b.max.x;
    double lo = std::max(a.min.y, b.min.y), hi = std::min(a.max.y, b.max.y);
    if (hi > lo) return {{x, lo}, {x, hi}};
  }
  if (std::abs(a.max.y - b.min.y) < eps || std::abs(b.max.y - a.min.y) < eps) {
    double y = std::abs(a.max.y - b.min.y) < eps ? a.max.y : b.max.y;
    double lo = std::max(a.min.x, b.min.x), hi = std::min(a.max.x, b.max.x);
    if (hi > lo) return {{lo, y}, {hi, y}};
  }
  return {{0, 0}, {0, 0}};
}

void add_wall_with_opening(Scene& scene, const Segment& edge, double doorway_width,
                           bool with_leaf, Rng& rng) {
  Vec2 dir = edge.direction();
  double len = edge.length();
  double lo = kWallMargin;
  double hi = len - kWallMargin - doorway_width;
  double at = hi > lo ? rng.uniform(lo, hi) : std::max(0.0, (len - doorway_width) * 0.5);
  Vec2 open_a = edge.a + dir * at;
  Vec2 open_b = open_a + dir * doorway_width;
  if (at > 1e-9) scene.walls.push_back({{edge.a, open_a}});
  if (at + doorway_width < len - 1e-9) scene.walls.push_back({{open_b, edge.b}});
  scene.doorways.push_back({{open_a, open_b}});
  if (with_leaf) {
    Door door;
    bool hinge_at_a = rng.bernoulli(0.5);
    Vec2 hinge = hinge_at_a ? open_a : open_b;
    Vec2 toward = hinge_at_a ? open_b - open_a : open_a - open_b;
    door.hinge = hinge;
    door.leaf_length = doorway_width;
    door.rest_angle = std::atan2(toward.y, toward.x);
    if (rng.bernoulli(0.5)) {
      door.swing_min = door.rest_angle;
      door.swing_max = door.rest_angle + M_PI / 2.0;
    } else {
      door.swing_min = door.rest_angle - M_PI / 2.0;
      door.swing_max = door.rest_angle;
    }
    ClassDefaults def = class_defaults(ObjectClass::door);
    door.leaf_mass = def.mass;
    scene.doors.push_back(door);
  }
}

bool near_any_doorway(const Scene& scene, const PlacedShape& s, double clearance) {
  for (const Doorway& dw : scene.doorways) {
    AABB box = s.bounds();
    Vec2 q = closest_point_on_segment(dw.span, s.center);
    double d = distance_point_shape(q, s);
    if (d < clearance) return true;
    (void)box;
  }
  return false;
}

void place_furniture(Scene& scene, const std::vector<Room>& rooms, double density, Rng& rng) {
  int next_id = scene.object_count() + 1;
  for (const Room& room : rooms) {
    int want = static_cast<int>(std::floor(density * room.box.area() / 4.0 + 0.5));
    for (int k = 0; k < want; ++k) {
      ObjectClass cls = kFurnitureClasses[rng.uniform_int(kFurnitureClasses.size())];
      ClassDefaults def = class_defaults(cls);
      double half_w = std::get<ConvexPolygon>(def.footprint).vertices[2].y;
      double half_l = std::get<ConvexPolygon>(def.footprint).vertices[2].x;
      bool placed = false;
      for (int attempt = 0; attempt < 50 && !placed; ++attempt) {
        // Long side parallel to a random wall of the room, backed against it.
        int side = static_cast<int>(rng.uniform_int(4));
        const AABB& b = room.box;
        Pose pose;
        double gap = 0.05;
        switch (side) {
          case 0:  // south wall, facing +y
            pose = {rng.uniform(b.min.x + half_l, b.max.x - half_l), b.min.y + half_w + gap, 0.0};
            break;
          case 1:  // north
            pose = {rng.uniform(b.min.x + half_l, b.max.x - half_l), b.max.y - half_w - gap, 0.0};
            break;
          case 2:  // west, long side vertical
            pose = {b.min.x + half_w + gap, rng.uniform(b.min.y + half_l, b.max.y - half_l), M_PI / 2.0};
            break;
          default:  // east
            pose = {b.max.x - half_w - gap, rng.uniform(b.min.y + half_l, b.max.y - half_l), M_PI / 2.0};
            break;
        }
        MovableObject obj;
        obj.id = next_id;
        obj.cls = cls;
        obj.footprint = def.footprint;
        obj.pose = pose;
        obj.mass = def.mass;
        obj.friction = def.friction;
        PlacedShape s = obj.placed();
        if (near_any_doorway(scene, s, 0.55)) continue;
        bool overlaps = false;
        for (const MovableObject& other : scene.objects) {
          if (shapes_overlap(s, other.placed())) {
            overlaps = true;
            break;
          }
        }
        if (overlaps) continue;
        bool wall_hit = false;
        for (const Wall& w : scene.walls) {
          if (shape_vs_segment(s, w.segment)) {
            wall_hit = true;
            break;
          }
        }
        if (wall_hit) continue;
        scene.objects.push_back(obj);
        ++next_id;
        placed = true;
      }
    }
  }
}

// Longest clear interval of a doorway span given circle coverage from nearby
// clutter plus a candidate.
double doorway_clear_width(const Doorway& dw, const std::vector<const MovableObject*>& objs) {
  Vec2 dir = dw.span.direction();
  double len = dw.span.length();
  std::vector<std::pair<double, double>> covered;
  for (const MovableObject* o : objs) {
    double r = shape_bounding_radius(o->footprint);
    Vec2 c = o->pose.position();
    double d = distance_point_segment(c, dw.span);
    if (d >= r) continue;
    double along = (c - dw.span.a).dot(dir);
    double half = std::sqrt(std::max(0.0, r * r - d * d));
    covered.emplace_back(std::max(0.0, along - half), std::min(len, along + half));
  }
  std::sort(covered.begin(), covered.end());
  double clear = 0.0, cursor = 0.0;
  for (const auto& [lo, hi] : covered) {
    if (lo > cursor) clear = std::max(clear, lo - cursor);
    cursor = std::max(cursor, hi);
  }
  clear = std::max(clear, len - cursor);
  return clear;
}

}  // namespace

Scene generate_scene(const SceneGenConfig& config, uint64_t seed) {
  if (config.rooms < 1) throw SceneError("room count must be >= 1");
  if (config.extent_x < kMinRoomSide || config.extent_y < kMinRoomSide) {
    throw SceneError("floor extent too small");
  }

  for (int attempt = 0; attempt < 10; ++attempt) {
    Rng rng(mix_seed(seed, static_cast<uint64_t>(attempt)));
    Scene scene;
    scene.id = "generated_" + std::to_string(seed);
    scene.floor_bounds = {{0.0, 0.0}, {config.extent_x, config.extent_y}};

    const Vec2 bmin = scene.floor_bounds.min, bmax = scene.floor_bounds.max;
    scene.walls.push_back({{{bmin.x, bmin.y}, {bmax.x, bmin.y}}});
    scene.walls.push_back({{{bmax.x, bmin.y}, {bmax.x, bmax.y}}});
    scene.walls.push_back({{{bmax.x, bmax.y}, {bmin.x, bmax.y}}});
    scene.walls.push_back({{{bmin.x, bmax.y}, {bmin.x, bmin.y}}});

    std::vector<Room> rooms = split_rooms(scene.floor_bounds, config.rooms, rng);
    for (size_t i = 0; i < rooms.size(); ++i) {
      for (size_t k = i + 1; k < rooms.size(); ++k) {
        Segment edge = shared_edge(rooms[i].box, rooms[k].box);
        if (edge.length() < config.doorway_width + 2.0 * kWallMargin) continue;
        add_wall_with_opening(scene, edge, config.doorway_width, rng.bernoulli(config.door_fraction), rng);
      }
    }

    place_furniture(scene, rooms, config.furniture_density, rng);

    // All rooms must see each other on the static grid.
    OccupancyGrid grid = build_grid(scene, 0.15);
    GeodesicField field = geodesic_field(grid, rooms.front().center());
    bool connected = true;
    for (const Room& r : rooms) {
      if (field.at(r.center()) == kUnreachable) {
        connected = false;
        break;
      }
    }
    if (connected) return scene;
  }
  throw SceneError("scene generation failed for seed " + std::to_string(seed));
}

Scene place_clutter(const Scene& scene, int count, uint64_t seed) {
  if (count < 0) throw SceneError("clutter count must be >= 0");
  Scene out = scene;
  if (count == 0) return out;

  Rng rng(seed);
  int next_id = out.object_count() + 1;
  std::vector<const MovableObject*> placed_clutter;
  for (int k = 0; k < count; ++k) {
    ObjectClass cls = kClutterClasses[rng.uniform_int(kClutterClasses.size())];
    ClassDefaults def = class_defaults(cls);
    double radius = std::get<Circle>(def.footprint).radius;
    bool done = false;
    for (int attempt = 0; attempt < 400 && !done; ++attempt) {
      Vec2 p{rng.uniform(out.floor_bounds.min.x, out.floor_bounds.max.x),
             rng.uniform(out.floor_bounds.min.y, out.floor_bounds.max.y)};
      if (distance_to_static(out, p) < radius) continue;
      MovableObject obj;
      obj.id = next_id;
      obj.cls = cls;
      obj.footprint = def.footprint;
      obj.pose = {p.x, p.y, 0.0};
      obj.mass = def.mass;
      obj.friction = def.friction;
      PlacedShape s = obj.placed();
      bool overlaps = false;
      for (const MovableObject* other : placed_clutter) {
        if (shapes_overlap(s, other->placed())) {
          overlaps = true;
          break;
        }
      }
      if (overlaps) continue;
      bool blocks = false;
      for (const Doorway& dw : out.doorways) {
        std::vector<const MovableObject*> check = placed_clutter;
        check.push_back(&obj);
        if (doorway_clear_width(dw, check) < 0.45) {
          blocks = true;
          break;
        }
      }
      if (blocks) continue;
      out.objects.push_back(obj);
      placed_clutter.push_back(&out.objects.back());
      ++next_id;
      done = true;
    }
    if (!done) {
      throw SceneError("clutter placement failed for seed " + std::to_string(seed));
    }
  }
  return out;
}

EpisodeSpec sample_episode(const Scene& scene, uint64_t seed, double inflation_radius,
                           const std::string& robot_preset) {
  Rng rng(seed);
  OccupancyGrid grid = build_grid(scene, inflation_radius);
  if (grid.free_cell_count() == 0) throw SceneError("scene has no static free space");

  auto sample_point = [&](Vec2& p) -> bool {
    p = {rng.uniform(scene.floor_bounds.min.x, scene.floor_bounds.max.x),
         rng.uniform(scene.floor_bounds.min.y, scene.floor_bounds.max.y)};
    return grid.free(grid.cell_at(p)) && distance_to_static(scene, p) > inflation_radius;
  };

  for (int attempt = 0; attempt < 2000; ++attempt) {
    Vec2 start, goal;
    if (!sample_point(start) || !sample_point(goal)) continue;
    if ((goal - start).norm() < 1.0) continue;
    GeodesicField field = geodesic_field(grid, goal);
    if (field.at(start) == kUnreachable) continue;
    EpisodeSpec spec;
    spec.scene_id = scene.id;
    spec.start = {start.x, start.y, rng.uniform(0.0, 2.0 * M_PI)};
    spec.goal = goal;
    spec.clutter_seed = seed;
    spec.robot_preset = robot_preset;
    return spec;
  }
  throw SceneError("episode sampling failed (degenerate scene) for seed " + std::to_string(seed));
}

}  // namespace inav
