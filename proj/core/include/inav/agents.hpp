#pragma once

#include <functional>
#include <memory>
#include <string>

#include "inav/physics.hpp"
#include "inav/planner.hpp"
#include "inav/sensors.hpp"

namespace inav {

struct AgentSpec {
  std::string kind = "path_follower";  // path_follower | avoider | cost_aware
  double param = 0.0;                  // lambda for cost_aware
  double lookahead = 0.3;              // m, pure-pursuit
  int replan_period = 10;              // steps
  bool oracle_grid_access = false;     // set for agents that replan on grids
};

// Read-only services the harness grants scripted baselines. The paper's
// learners get oracle waypoints; scripted planners additionally see the grid.
struct AgentContext {
  const Scene* scene = nullptr;
  const RobotPreset* preset = nullptr;
  Vec2 goal;
  const OccupancyGrid* static_grid = nullptr;
  const GeodesicField* static_field = nullptr;
  const WorldState* world = nullptr;  // refreshed every step
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual void on_reset(const AgentContext& ctx, uint64_t seed) { (void)ctx, (void)seed; }
  virtual WheelCommand act(const Observation& obs, const AgentContext& ctx) = 0;
};

using PlanObserver = std::function<void(const WeightedPlanResult&)>;

std::unique_ptr<Agent> make_agent(const AgentSpec& spec);

// Exposed for plan-level assertions in tests and reports.
class CostAwareAgent;
void set_plan_observer(Agent& agent, PlanObserver observer);

// Planning cost used by cost_aware: entering a cell covered by a movable
// object of class c costs lambda * mu_c * m_c * g; classes whose friction
// limit exceeds the robot's push capacity are forbidden outright.
std::vector<double> cost_aware_penalties(const Scene& scene, const WorldState& world,
                                         const RobotPreset& preset, const OccupancyGrid& grid,
                                         double lambda);

// Pure-pursuit step toward a target in the robot frame.
WheelCommand pure_pursuit(const Vec2& target_local, double goal_distance,
                          const RobotPreset& preset);

}  // namespace inav
