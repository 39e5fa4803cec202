#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "inav/geometry.hpp"

namespace inav {

class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ObjectClass : uint8_t {
  chair, desk, door, sofa, table,  // furniture annotated in scenes
  basket, shoe, pot, toy,          // per-episode clutter
};

constexpr std::array<ObjectClass, 9> kAllObjectClasses = {
    ObjectClass::chair, ObjectClass::desk,  ObjectClass::door,
    ObjectClass::sofa,  ObjectClass::table, ObjectClass::basket,
    ObjectClass::shoe,  ObjectClass::pot,   ObjectClass::toy};

constexpr std::array<ObjectClass, 4> kClutterClasses = {
    ObjectClass::basket, ObjectClass::shoe, ObjectClass::pot, ObjectClass::toy};

constexpr std::array<ObjectClass, 4> kFurnitureClasses = {
    ObjectClass::chair, ObjectClass::desk, ObjectClass::sofa, ObjectClass::table};

std::string to_string(ObjectClass c);
std::optional<ObjectClass> object_class_from_string(const std::string& name);

struct ClassDefaults {
  double mass = 0.0;      // kg
  double friction = 0.5;  // Coulomb coefficient, in (0, 2]
  Shape footprint;        // circles for clutter, rectangles for furniture
};

ClassDefaults class_defaults(ObjectClass c);

struct Wall {
  Segment segment;
};

// Frame-mounted leaf on a revolute hinge. `rest_angle` is the closed pose;
// angles are absolute world headings of the leaf direction.
struct Door {
  Vec2 hinge;
  double leaf_length = 0.9;
  double leaf_thickness = 0.04;
  double rest_angle = 0.0;
  double swing_min = 0.0;
  double swing_max = 0.0;
  double leaf_mass = 25.0;
  double hinge_static_torque = 3.0;   // N*m to break free
  double hinge_kinetic_torque = 1.5;  // N*m while swinging

  // Leaf centerline for a given hinge angle.
  Segment leaf_segment(double angle) const {
    Vec2 dir{std::cos(angle), std::sin(angle)};
    return {hinge, hinge + dir * leaf_length};
  }
  PlacedShape leaf_shape(double angle) const;
};

struct MovableObject {
  int id = 0;  // 1..K, assigned at load/placement
  ObjectClass cls = ObjectClass::chair;
  Shape footprint;
  Pose pose;
  double mass = 0.0;
  double friction = 0.5;

  PlacedShape placed() const { return place_shape(footprint, pose); }
  double static_friction_force() const;  // F_s = mu * m * g
};

// A doorway opening in a wall; kept so clutter placement can guarantee the
// opening stays passable.
struct Doorway {
  Segment span;  // across the opening
};

struct Scene {
  std::string id;
  AABB floor_bounds;
  std::vector<Wall> walls;
  std::vector<Door> doors;
  std::vector<MovableObject> objects;
  std::vector<Doorway> doorways;

  int object_count() const { return static_cast<int>(objects.size()); }
};

struct EpisodeSpec {
  std::string scene_id;
  Pose start;
  Vec2 goal;
  uint64_t clutter_seed = 0;
  std::string robot_preset;
};

// --- Scene file format (JSON; lengths m, angles rad, masses kg) ---
Scene load_scene(const std::string& text);
Scene load_scene_file(const std::string& path);
std::string save_scene(const Scene& scene);

struct SceneGenConfig {
  int rooms = 4;
  double extent_x = 10.0;  // floor width
  double extent_y = 8.0;
  double furniture_density = 0.3;  // expected furniture pieces per m2 of wall band
  double door_fraction = 0.5;      // fraction of openings that get a leaf
  double doorway_width = 0.9;
};

Scene generate_scene(const SceneGenConfig& config, uint64_t seed);

// Adds `count` clutter objects sampled from {basket, shoe, pot, toy}.
Scene place_clutter(const Scene& scene, int count, uint64_t seed);

// Start/goal sampling. `inflation_radius` is the robot body radius used for
// the reachability check.
EpisodeSpec sample_episode(const Scene& scene, uint64_t seed, double inflation_radius,
                           const std::string& robot_preset = "");

// Static obstacle distance (walls only; door leaves are not static geometry).
double distance_to_static(const Scene& scene, const Vec2& p);

}  // namespace inav
