#include "inav/agents.hpp"

#include <algorithm>
#include <cmath>

namespace inav {

WheelCommand pure_pursuit(const Vec2& target_local, double goal_distance,
                          const RobotPreset& preset) {
  const double v_max = preset.wheel_radius * preset.max_wheel_speed;
  if (goal_distance < 0.05) return {0.0, 0.0};

  double heading_error = std::atan2(target_local.y, target_local.x);
  if (std::abs(heading_error) > 1.2) {
    // Target far off-axis: turn in place first.
    double omega = std::copysign(0.8 * v_max / (preset.wheel_base * 0.5), heading_error);
    return wheel_speeds_for_twist(0.0, omega, preset);
  }
  double dist = target_local.norm();
  double v = 0.8 * v_max * std::max(0.25, std::cos(heading_error));
  v = std::min(v, 0.8 * v_max * std::max(goal_distance, 0.15) / 0.5);
  double curvature = dist > 1e-6 ? 2.0 * target_local.y / (dist * dist) : 0.0;
  return wheel_speeds_for_twist(v, v * curvature, preset);
}

namespace {

Vec2 pick_target(const std::vector<Vec2>& waypoints_local, double lookahead) {
  for (const Vec2& w : waypoints_local) {
    if (w.norm() >= lookahead) return w;
  }
  return waypoints_local.empty() ? Vec2{0.0, 0.0} : waypoints_local.back();
}

class PathFollowerAgent : public Agent {
 public:
  explicit PathFollowerAgent(const AgentSpec& spec) : spec_(spec) {}
  std::string name() const override { return "path_follower"; }

  WheelCommand act(const Observation& obs, const AgentContext& ctx) override {
    Vec2 target = pick_target(obs.waypoints_local, spec_.lookahead);
    return pure_pursuit(target, obs.goal_local.norm(), *ctx.preset);
  }

 private:
  AgentSpec spec_;
};

// Shared base for the replanning agents.
class PlanningAgent : public Agent {
 public:
  explicit PlanningAgent(const AgentSpec& spec) : spec_(spec) {}

  void on_reset(const AgentContext& ctx, uint64_t) override {
    steps_since_plan_ = 0;
    have_plan_ = false;
    plan_ = {};
    replan(ctx);
  }

  WheelCommand act(const Observation& obs, const AgentContext& ctx) override {
    if (steps_since_plan_ >= spec_.replan_period) replan(ctx);
    ++steps_since_plan_;
    if (!have_plan_ || !plan_.path.reachable) return {0.0, 0.0};  // blocked: wait out the clock
    Vec2 robot = ctx.world->robot.position();
    std::vector<Vec2> wps = waypoints(plan_.path, 0.2, 10, robot);
    std::vector<Vec2> local;
    local.reserve(wps.size());
    for (const Vec2& w : wps) local.push_back(ctx.world->robot.to_local(w));
    Vec2 target = pick_target(local, spec_.lookahead);
    return pure_pursuit(target, obs.goal_local.norm(), *ctx.preset);
  }

  void set_observer(PlanObserver obs) { observer_ = std::move(obs); }

 protected:
  virtual WeightedPlanResult plan(const AgentContext& ctx) = 0;

  void replan(const AgentContext& ctx) {
    plan_ = plan(ctx);
    have_plan_ = true;
    steps_since_plan_ = 0;
    if (observer_) observer_(plan_);
  }

  AgentSpec spec_;
  WeightedPlanResult plan_;
  bool have_plan_ = false;
  int steps_since_plan_ = 0;
  PlanObserver observer_;
};

// Plans on the movable-aware grid; never pushes, stops when fully blocked.
class AvoiderAgent : public PlanningAgent {
 public:
  using PlanningAgent::PlanningAgent;
  std::string name() const override { return "avoider"; }

 protected:
  WeightedPlanResult plan(const AgentContext& ctx) override {
    OccupancyGrid grid = overlay_movables(*ctx.static_grid, *ctx.scene,
                                          ctx.world->object_poses, ctx.world->door_angles);
    return weighted_plan(grid, {}, ctx.world->robot.position(), ctx.goal);
  }
};

class CostAwareAgentImpl : public PlanningAgent {
 public:
  using PlanningAgent::PlanningAgent;
  std::string name() const override { return "cost_aware"; }

 protected:
  WeightedPlanResult plan(const AgentContext& ctx) override {
    std::vector<double> penalties = cost_aware_penalties(*ctx.scene, *ctx.world, *ctx.preset,
                                                         *ctx.static_grid, spec_.param);
    return weighted_plan(*ctx.static_grid, penalties, ctx.world->robot.position(), ctx.goal);
  }
};

}  // namespace

std::vector<double> cost_aware_penalties(const Scene& scene, const WorldState& world,
                                         const RobotPreset& preset, const OccupancyGrid& grid,
                                         double lambda) {
  std::vector<double> penalties(static_cast<size_t>(grid.nx()) * grid.ny(), 0.0);
  double r = grid.inflation_radius();
  for (size_t i = 0; i < scene.objects.size(); ++i) {
    const MovableObject& obj = scene.objects[i];
    PlacedShape s = place_shape(obj.footprint, world.object_poses[i]);
    double f_s = obj.static_friction_force();
    bool pushable = f_s <= preset.push_capacity;
    double cost = lambda * f_s;  // lambda * mu * m * g
    AABB box = s.bounds();
    GridIndex lo = grid.cell_at({box.min.x - r, box.min.y - r});
    GridIndex hi = grid.cell_at({box.max.x + r, box.max.y + r});
    for (int iy = std::max(0, lo.iy); iy <= std::min(grid.ny() - 1, hi.iy); ++iy) {
      for (int ix = std::max(0, lo.ix); ix <= std::min(grid.nx() - 1, hi.ix); ++ix) {
        if (distance_point_shape(grid.cell_center({ix, iy}), s) > r) continue;
        size_t flat = grid.index({ix, iy});
        if (!pushable) {
          penalties[flat] = kUnreachable;
        } else if (penalties[flat] != kUnreachable) {
          penalties[flat] += cost;
        }
      }
    }
  }
  return penalties;
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec) {
  if (spec.kind == "path_follower") return std::make_unique<PathFollowerAgent>(spec);
  if (spec.kind == "avoider") {
    AgentSpec s = spec;
    s.oracle_grid_access = true;
    return std::make_unique<AvoiderAgent>(s);
  }
  if (spec.kind == "cost_aware") {
    AgentSpec s = spec;
    s.oracle_grid_access = true;
    return std::make_unique<CostAwareAgentImpl>(s);
  }
  throw std::invalid_argument("unknown agent kind: " + spec.kind);
}

void set_plan_observer(Agent& agent, PlanObserver observer) {
  if (auto* p = dynamic_cast<PlanningAgent*>(&agent)) {
    p->set_observer(std::move(observer));
  } else {
    throw std::invalid_argument("agent does not plan");
  }
}

}  // namespace inav
