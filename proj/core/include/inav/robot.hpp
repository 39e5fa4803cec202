#pragma once

#include <stdexcept>
#include <string>

namespace inav {

constexpr double kGravity = 9.81;  // m/s^2

// Differential-drive base parameters. The benchmark convergence threshold
// equals the body width, 2 * body_radius.
struct RobotPreset {
  std::string name;
  double body_radius = 0.0;      // m
  double mass = 0.0;             // kg, m_0
  double wheel_radius = 0.0;     // m
  double wheel_base = 0.0;       // m
  double max_wheel_speed = 0.0;  // rad/s
  double push_capacity = 0.0;    // N, F_max

  double body_width() const { return 2.0 * body_radius; }
  double weight() const { return mass * kGravity; }  // G = m_0 g
};

inline RobotPreset turtlebot_preset() {
  return RobotPreset{"turtlebot", 0.177, 6.3, 0.038, 0.23, 17.0, 15.0};
}

inline RobotPreset fetch_preset() {
  return RobotPreset{"fetch", 0.28, 113.0, 0.0613, 0.375, 16.3, 250.0};
}

inline RobotPreset robot_preset_by_name(const std::string& name) {
  if (name == "turtlebot") return turtlebot_preset();
  if (name == "fetch") return fetch_preset();
  throw std::invalid_argument("unknown robot preset: " + name);
}

}  // namespace inav
