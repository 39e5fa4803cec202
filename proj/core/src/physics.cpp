#include "inav/physics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace inav {

namespace {

constexpr double kDepthTol = 1e-9;

struct PushChainLink {
  int object = -1;
  Vec2 translation;
};

struct PushChain {
  bool blocked = false;
  double threshold_force = 0.0;  // sum of F_s over members
  std::vector<PushChainLink> links;
};

struct Bodies {
  const Scene* scene;
  std::vector<PlacedShape> objects;  // current poses
  std::vector<PlacedShape> doors;

  void refresh_object(size_t i, const Pose& pose) {
    objects[i] = place_shape(scene->objects[i].footprint, pose);
  }
  void refresh_door(size_t i, double angle) {
    doors[i] = scene->doors[i].leaf_shape(angle);
  }
};

PlacedShape translated(const PlacedShape& s, const Vec2& t) {
  PlacedShape out = s;
  out.center += t;
  for (Vec2& v : out.vertices) v += t;
  return out;
}

bool hits_static(const Scene& scene, const PlacedShape& s, const Bodies& bodies) {
  for (const Wall& w : scene.walls) {
    if (shape_vs_segment(s, w.segment)) return true;
  }
  for (const PlacedShape& leaf : bodies.doors) {
    if (shapes_overlap(s, leaf)) return true;
  }
  return false;
}

// Quasi-static push propagation: each link is translated along the contact
// normal; the threshold force is the sum of member friction limits. A link
// driven into a wall, a door leaf, or past the chain depth blocks the push.
PushChain build_chain(const Scene& scene, const Bodies& bodies, int first, const Vec2& translation,
                      int max_depth) {
  PushChain chain;
  int current = first;
  Vec2 t = translation;
  for (int depth = 0; depth < max_depth; ++depth) {
    chain.links.push_back({current, t});
    chain.threshold_force += scene.objects[current].static_friction_force();
    PlacedShape moved = translated(bodies.objects[current], t);
    if (hits_static(scene, moved, bodies)) {
      chain.blocked = true;
      return chain;
    }
    int next = -1;
    Contact deepest;
    for (size_t j = 0; j < bodies.objects.size(); ++j) {
      bool in_chain = false;
      for (const PushChainLink& l : chain.links) in_chain |= l.object == static_cast<int>(j);
      if (in_chain) continue;
      auto c = shape_vs_shape(moved, bodies.objects[j]);
      if (c && c->depth > deepest.depth) {
        deepest = *c;
        next = static_cast<int>(j);
      }
    }
    if (next < 0) return chain;  // resolved
    current = next;
    t = -deepest.normal * deepest.depth;  // push the next link away
  }
  chain.blocked = true;  // unresolved beyond max depth
  return chain;
}

struct ForceKey {
  ContactKind kind;
  int index;
  bool operator<(const ForceKey& o) const {
    return kind != o.kind ? kind < o.kind : index < o.index;
  }
};

}  // namespace

WorldState make_world(const Scene& scene, const Pose& robot_start) {
  WorldState w;
  w.robot = robot_start;
  w.object_poses.reserve(scene.objects.size());
  for (const MovableObject& o : scene.objects) w.object_poses.push_back(o.pose);
  w.door_angles.reserve(scene.doors.size());
  for (const Door& d : scene.doors) w.door_angles.push_back(d.rest_angle);
  return w;
}

std::pair<double, double> diff_drive_twist(double wheel_left, double wheel_right,
                                           const RobotPreset& preset) {
  double wl = std::clamp(wheel_left, -preset.max_wheel_speed, preset.max_wheel_speed);
  double wr = std::clamp(wheel_right, -preset.max_wheel_speed, preset.max_wheel_speed);
  double v = preset.wheel_radius * (wl + wr) / 2.0;
  double omega = preset.wheel_radius * (wr - wl) / preset.wheel_base;
  return {v, omega};
}

WheelCommand wheel_speeds_for_twist(double v, double omega, const RobotPreset& preset) {
  double wl = (2.0 * v - omega * preset.wheel_base) / (2.0 * preset.wheel_radius);
  double wr = (2.0 * v + omega * preset.wheel_base) / (2.0 * preset.wheel_radius);
  double peak = std::max(std::abs(wl), std::abs(wr));
  if (peak > preset.max_wheel_speed) {
    double scale = preset.max_wheel_speed / peak;
    wl *= scale;
    wr *= scale;
  }
  return {wl, wr};
}

StepOutcome step(const Scene& scene, const RobotPreset& preset, const WorldState& world,
                 const WheelCommand& action, const PhysicsConfig& config) {
  if (!std::isfinite(action.left) || !std::isfinite(action.right)) {
    throw PhysicsError("non-finite wheel command");
  }
  if (!(config.dt > 0.0) || config.substeps < 1) throw PhysicsError("invalid physics config");

  StepOutcome out;
  out.world = world;
  out.displacement.assign(body_count(scene), 0.0);
  auto [v, omega] = diff_drive_twist(action.left, action.right, preset);
  out.world.v = v;
  out.world.omega = omega;

  Bodies bodies{&scene, {}, {}};
  bodies.objects.reserve(scene.objects.size());
  for (size_t i = 0; i < scene.objects.size(); ++i) {
    bodies.objects.push_back(place_shape(scene.objects[i].footprint, out.world.object_poses[i]));
  }
  bodies.doors.reserve(scene.doors.size());
  for (size_t i = 0; i < scene.doors.size(); ++i) {
    bodies.doors.push_back(scene.doors[i].leaf_shape(out.world.door_angles[i]));
  }

  std::map<ForceKey, double> forces;  // per-manifold max over substeps
  const double sub_dt = config.dt / config.substeps;
  const int door_body_base = 1 + static_cast<int>(scene.objects.size());

  for (int sub = 0; sub < config.substeps; ++sub) {
    Pose& robot = out.world.robot;
    Vec2 before = robot.position();
    if (std::abs(omega) < 1e-9) {
      robot.x += v * std::cos(robot.theta) * sub_dt;
      robot.y += v * std::sin(robot.theta) * sub_dt;
    } else {
      double radius = v / omega;
      double theta2 = robot.theta + omega * sub_dt;
      robot.x += radius * (std::sin(theta2) - std::sin(robot.theta));
      robot.y += radius * (-std::cos(theta2) + std::cos(robot.theta));
      robot.theta = theta2;
    }
    if ((robot.position() - before).norm() > preset.body_radius) {
      throw PhysicsError("tunneling: substep displacement exceeds body radius; reduce dt");
    }

    for (int iter = 0; iter < 16; ++iter) {
      // Deepest penetration wins; ties go to the lowest-indexed body.
      Contact best;
      ContactKind best_kind = ContactKind::wall;
      int best_index = -1;
      Vec2 rp = robot.position();
      for (size_t i = 0; i < scene.walls.size(); ++i) {
        auto c = disc_vs_segment(rp, preset.body_radius, scene.walls[i].segment);
        if (c && c->depth > best.depth + kDepthTol) {
          best = *c;
          best_kind = ContactKind::wall;
          best_index = static_cast<int>(i);
        }
      }
      for (size_t i = 0; i < bodies.objects.size(); ++i) {
        auto c = disc_vs_shape(rp, preset.body_radius, bodies.objects[i]);
        if (c && c->depth > best.depth + kDepthTol) {
          best = *c;
          best_kind = ContactKind::object;
          best_index = static_cast<int>(i);
        }
      }
      for (size_t i = 0; i < bodies.doors.size(); ++i) {
        auto c = disc_vs_shape(rp, preset.body_radius, bodies.doors[i]);
        if (c && c->depth > best.depth + kDepthTol) {
          best = *c;
          best_kind = ContactKind::door;
          best_index = static_cast<int>(i);
        }
      }
      if (best_index < 0 || best.depth <= kDepthTol) break;

      if (best_kind == ContactKind::wall) {
        robot.x += best.normal.x * best.depth;
        robot.y += best.normal.y * best.depth;
        double f = std::min(preset.push_capacity, config.wall_stiffness * best.depth);
        double& slot = forces[{ContactKind::wall, best_index}];
        slot = std::max(slot, f);
        continue;
      }

      if (best_kind == ContactKind::object) {
        Vec2 push_dir = -best.normal;
        PushChain chain = build_chain(scene, bodies, best_index, push_dir * best.depth,
                                      config.max_push_chain);
        double& slot = forces[{ContactKind::object, best_index}];
        if (chain.blocked || chain.threshold_force > preset.push_capacity) {
          robot.x += best.normal.x * best.depth;
          robot.y += best.normal.y * best.depth;
          slot = std::max(slot, preset.push_capacity);
        } else {
          for (const PushChainLink& link : chain.links) {
            Pose& pose = out.world.object_poses[link.object];
            pose.x += link.translation.x;
            pose.y += link.translation.y;
            out.displacement[1 + link.object] += link.translation.norm();
            bodies.refresh_object(link.object, pose);
          }
          slot = std::max(slot, chain.threshold_force);
        }
        continue;
      }

      // Door leaf.
      const Door& door = scene.doors[best_index];
      double& angle = out.world.door_angles[best_index];
      Vec2 push_dir = -best.normal;
      Vec2 lever_vec = best.point - door.hinge;
      double torque_arm = lever_vec.cross(push_dir);  // signed, CCW positive
      double lever = std::abs(torque_arm);
      double& slot = forces[{ContactKind::door, best_index}];
      bool can_turn = lever > 1e-6 && preset.push_capacity * lever >= door.hinge_static_torque;
      double dir = torque_arm >= 0.0 ? 1.0 : -1.0;
      if (can_turn) {
        // Swing in small increments until the disc is clear or the stop hits.
        const double inc = 0.005;
        double turned = 0.0;
        bool resolved = false;
        while (turned < 0.35) {
          double next = std::clamp(angle + dir * inc, door.swing_min, door.swing_max);
          if (next == angle) break;  // at the swing stop
          turned += std::abs(next - angle);
          angle = next;
          bodies.refresh_door(best_index, angle);
          if (!disc_vs_shape(robot.position(), preset.body_radius, bodies.doors[best_index])) {
            resolved = true;
            break;
          }
        }
        out.displacement[door_body_base + best_index] += turned * door.leaf_length * 0.5;
        if (resolved) {
          double f = std::min(preset.push_capacity, door.hinge_kinetic_torque / lever);
          slot = std::max(slot, f);
          continue;
        }
        // Fell on the stop: treat the leaf as rigid below.
      }
      auto residual = disc_vs_shape(robot.position(), preset.body_radius, bodies.doors[best_index]);
      if (residual) {
        robot.x += residual->normal.x * residual->depth;
        robot.y += residual->normal.y * residual->depth;
        double f = can_turn ? std::min(preset.push_capacity, config.wall_stiffness * residual->depth)
                            : preset.push_capacity;
        slot = std::max(slot, f);
      }
    }
    out.displacement[0] += (robot.position() - before).norm();
  }

  out.world.robot.theta = wrap_angle(out.world.robot.theta);
  out.world.step_index = world.step_index + 1;

  for (const auto& [key, force] : forces) {
    ContactRecord rec;
    rec.kind = key.kind;
    rec.index = key.index;
    rec.force = force;
    if (key.kind == ContactKind::object) rec.body = 1 + key.index;
    if (key.kind == ContactKind::door) rec.body = door_body_base + key.index;
    out.contacts.push_back(rec);
  }
  out.interacted = !out.contacts.empty();
  return out;
}

}  // namespace inav
