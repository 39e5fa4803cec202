#pragma once

#include <string>
#include <vector>

#include "inav/physics.hpp"
#include "inav/planner.hpp"
#include "inav/scene.hpp"

namespace inav {

// Per-ray hit label: an object class, a wall, or nothing in range.
enum class SemanticLabel : uint8_t {
  none, wall, chair, desk, door, sofa, table, basket, shoe, pot, toy,
};

std::string to_string(SemanticLabel label);
SemanticLabel semantic_from_class(ObjectClass c);

struct SensorConfig {
  int n_rays = 68;
  double fov = 2.0 * M_PI / 3.0;  // rad
  double max_range = 5.0;         // m
};

struct Observation {
  Vec2 goal_local;                   // robot frame, x forward / y left
  double v = 0.0;
  double omega = 0.0;
  std::vector<Vec2> waypoints_local; // exactly 10
  std::vector<double> depth;         // (0, max_range]
  std::vector<SemanticLabel> semantic;
};

struct ScanResult {
  std::vector<double> depth;
  std::vector<SemanticLabel> semantic;
};

ScanResult raycast(const Scene& scene, const WorldState& world, const Pose& pose,
                   int n_rays, double fov, double max_range);

Observation make_observation(const Scene& scene, const WorldState& world, const Vec2& goal,
                             const PathPolyline& path, const SensorConfig& config = {},
                             double waypoint_spacing = 0.2, int waypoint_count = 10);

}  // namespace inav
