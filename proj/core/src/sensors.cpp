#include "inav/sensors.hpp"

#include <cmath>

namespace inav {

std::string to_string(SemanticLabel label) {
  switch (label) {
    case SemanticLabel::none: return "none";
    case SemanticLabel::wall: return "wall";
    case SemanticLabel::chair: return "chair";
    case SemanticLabel::desk: return "desk";
    case SemanticLabel::door: return "door";
    case SemanticLabel::sofa: return "sofa";
    case SemanticLabel::table: return "table";
    case SemanticLabel::basket: return "basket";
    case SemanticLabel::shoe: return "shoe";
    case SemanticLabel::pot: return "pot";
    case SemanticLabel::toy: return "toy";
  }
  return "?";
}

SemanticLabel semantic_from_class(ObjectClass c) {
  switch (c) {
    case ObjectClass::chair: return SemanticLabel::chair;
    case ObjectClass::desk: return SemanticLabel::desk;
    case ObjectClass::door: return SemanticLabel::door;
    case ObjectClass::sofa: return SemanticLabel::sofa;
    case ObjectClass::table: return SemanticLabel::table;
    case ObjectClass::basket: return SemanticLabel::basket;
    case ObjectClass::shoe: return SemanticLabel::shoe;
    case ObjectClass::pot: return SemanticLabel::pot;
    case ObjectClass::toy: return SemanticLabel::toy;
  }
  return SemanticLabel::none;
}

ScanResult raycast(const Scene& scene, const WorldState& world, const Pose& pose,
                   int n_rays, double fov, double max_range) {
  ScanResult scan;
  scan.depth.resize(n_rays, max_range);
  scan.semantic.resize(n_rays, SemanticLabel::none);

  std::vector<PlacedShape> objects;
  objects.reserve(scene.objects.size());
  for (size_t i = 0; i < scene.objects.size(); ++i) {
    objects.push_back(place_shape(scene.objects[i].footprint, world.object_poses[i]));
  }
  std::vector<PlacedShape> leaves;
  leaves.reserve(scene.doors.size());
  for (size_t i = 0; i < scene.doors.size(); ++i) {
    leaves.push_back(scene.doors[i].leaf_shape(world.door_angles[i]));
  }

  Vec2 origin = pose.position();
  for (int i = 0; i < n_rays; ++i) {
    double angle = n_rays == 1 ? pose.theta
                               : pose.theta - fov / 2.0 + fov * i / (n_rays - 1);
    Vec2 dir{std::cos(angle), std::sin(angle)};
    double best = max_range;
    SemanticLabel label = SemanticLabel::none;
    for (const Wall& w : scene.walls) {
      auto t = ray_vs_segment(origin, dir, w.segment);
      if (t && *t < best) {
        best = *t;
        label = SemanticLabel::wall;
      }
    }
    for (size_t k = 0; k < objects.size(); ++k) {
      auto t = ray_vs_shape(origin, dir, objects[k]);
      if (t && *t < best) {
        best = *t;
        label = semantic_from_class(scene.objects[k].cls);
      }
    }
    for (const PlacedShape& leaf : leaves) {
      auto t = ray_vs_shape(origin, dir, leaf);
      if (t && *t < best) {
        best = *t;
        label = SemanticLabel::door;
      }
    }
    scan.depth[i] = best;
    scan.semantic[i] = label;
  }
  return scan;
}

Observation make_observation(const Scene& scene, const WorldState& world, const Vec2& goal,
                             const PathPolyline& path, const SensorConfig& config,
                             double waypoint_spacing, int waypoint_count) {
  Observation obs;
  obs.goal_local = world.robot.to_local(goal);
  obs.v = world.v;
  obs.omega = world.omega;
  std::vector<Vec2> wps = waypoints(path, waypoint_spacing, waypoint_count, world.robot.position());
  while (static_cast<int>(wps.size()) < waypoint_count) wps.push_back(goal);  // unreachable path
  obs.waypoints_local.reserve(wps.size());
  for (const Vec2& w : wps) obs.waypoints_local.push_back(world.robot.to_local(w));
  ScanResult scan = raycast(scene, world, world.robot, config.n_rays, config.fov, config.max_range);
  obs.depth = std::move(scan.depth);
  obs.semantic = std::move(scan.semantic);
  return obs;
}

}  // namespace inav
