#pragma once

#include <string>
#include <utility>
#include <vector>

#include "inav/robot.hpp"
#include "inav/scene.hpp"

namespace inav {

class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Body indexing: 0 is the robot, 1..K the scene objects in order, then one
// body per door leaf.
struct WorldState {
  Pose robot;
  double v = 0.0;      // m/s, forward
  double omega = 0.0;  // rad/s, CCW
  std::vector<Pose> object_poses;
  std::vector<double> door_angles;
  int step_index = 0;
};

WorldState make_world(const Scene& scene, const Pose& robot_start);

inline int body_count(const Scene& scene) {
  return 1 + static_cast<int>(scene.objects.size() + scene.doors.size());
}

enum class ContactKind { wall, object, door };

struct ContactRecord {
  ContactKind kind = ContactKind::wall;
  int index = -1;      // wall/object/door index within the scene
  int body = -1;       // body id for objects/doors, -1 for walls
  double force = 0.0;  // N
};

struct StepOutcome {
  WorldState world;
  std::vector<ContactRecord> contacts;
  std::vector<double> displacement;  // per body, path length this step
  bool interacted = false;

  double total_force() const {
    double f = 0.0;
    for (const ContactRecord& c : contacts) f += c.force;
    return f;
  }
};

struct PhysicsConfig {
  double dt = 0.1;              // s
  int substeps = 10;
  double wall_stiffness = 1e4;  // N/m, force model for wall scrapes
  int max_push_chain = 3;
};

struct WheelCommand {
  double left = 0.0;   // rad/s
  double right = 0.0;  // rad/s
};

// Forward kinematics of the differential drive; wheel speeds are clamped to
// the preset limit.
std::pair<double, double> diff_drive_twist(double wheel_left, double wheel_right,
                                           const RobotPreset& preset);

// Inverse: wheel speeds realizing (v, omega), clamped preserving curvature.
WheelCommand wheel_speeds_for_twist(double v, double omega, const RobotPreset& preset);

// Advances one control period. Pure function of its inputs.
StepOutcome step(const Scene& scene, const RobotPreset& preset, const WorldState& world,
                 const WheelCommand& action, const PhysicsConfig& config = {});

}  // namespace inav
