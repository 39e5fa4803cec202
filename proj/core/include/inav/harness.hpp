#pragma once

#include <memory>
#include <string>
#include <vector>

#include "inav/agents.hpp"
#include "inav/metrics.hpp"
#include "inav/physics.hpp"
#include "inav/planner.hpp"
#include "inav/robot.hpp"
#include "inav/scene.hpp"
#include "inav/sensors.hpp"

namespace inav {

class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BenchmarkConfig {
  std::vector<std::string> train_scenes;  // scene file paths
  std::vector<std::string> test_scenes;
  std::string robot = "turtlebot";
  std::vector<AgentSpec> agents;
  int seeds_per_cell = 3;
  uint64_t master_seed = 0;
  int max_steps = 1000;
  int clutter_count = 10;
  std::vector<double> alpha_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  double grid_resolution = 0.05;
  SensorConfig sensors;
  PhysicsConfig physics;  // physics.dt is the control period
  int workers = 1;

  double episode_seconds() const { return max_steps * physics.dt; }
};

enum class EpisodeStatus { success, timeout, agent_abort, error };
std::string to_string(EpisodeStatus s);

struct StepTrace {
  WheelCommand action;
  Pose pose;  // robot pose after the step
  double reward = 0.0;
  std::vector<ContactRecord> contacts;
};

struct EpisodeRecord {
  std::string scene_id;
  std::string scene_path;
  std::string agent;
  double param = 0.0;  // k_int for the reward, lambda for cost_aware
  std::string robot;
  bool train_split = true;
  uint64_t seed = 0;  // per-episode master seed
  uint64_t clutter_seed = 0;
  uint64_t start_goal_seed = 0;
  uint64_t agent_seed = 0;
  EpisodeSpec spec;
  EpisodeStatus status = EpisodeStatus::error;
  std::string error_message;
  double l_star = 0.0;
  double gd_final = 0.0;
  bool clutter_doorway_guard = false;  // placement rejected fully blocked doorways
  std::vector<StepTrace> trace;
  WorldState final_world;
  EffortLedger ledger;
  MetricReport metrics;
  double wall_time_s = 0.0;
  double steps_per_second = 0.0;
};

// Precomputed per-episode artifacts: the cluttered scene, the static-only
// grid/field/path oracle, and the derived seed chain.
struct EpisodeSetup {
  Scene scene;  // base scene + clutter
  EpisodeSpec spec;
  RobotPreset preset;
  std::unique_ptr<OccupancyGrid> static_grid;
  GeodesicField static_field;  // to the goal
  PathPolyline oracle_path;    // from the start
  double l_star = 0.0;
  uint64_t clutter_seed = 0, start_goal_seed = 0, agent_seed = 0;
  WorldState initial_world;
  Observation first_observation;

  AgentContext context(const WorldState& world) const {
    return {&scene, &preset, spec.goal, static_grid.get(), &static_field, &world};
  }
};

EpisodeSetup reset(const BenchmarkConfig& config, const Scene& base_scene, uint64_t seed);

// Live environment over a setup; mirrors the reset/step RL contract.
class Environment {
 public:
  Environment(const BenchmarkConfig& config, const Scene& base_scene, uint64_t seed,
              double k_int = 0.0);

  const Observation& observation() const { return obs_; }
  const WorldState& world() const { return world_; }
  const EpisodeSetup& setup() const { return setup_; }
  const EffortLedger& ledger() const { return ledger_; }
  bool done() const { return done_; }
  bool success() const { return success_; }
  int steps() const { return t_; }
  double last_reward() const { return last_reward_; }
  double last_gd() const { return gd_; }
  double distance_to_goal() const;
  const StepOutcome& last_outcome() const { return outcome_; }

  struct StepResult {
    const Observation* observation;
    double reward;
    bool done;
  };
  StepResult step(const WheelCommand& action);

 private:
  BenchmarkConfig config_;
  double k_int_;
  EpisodeSetup setup_;
  WorldState world_;
  EffortLedger ledger_;
  Observation obs_;
  StepOutcome outcome_;
  double gd_ = 0.0;
  double last_reward_ = 0.0;
  int t_ = 0;
  bool done_ = false;
  bool success_ = false;
  bool success_latched_ = false;
};

// `k_int` is the cell parameter: the reward's interaction penalty, and for
// cost_aware agents also the planning penalty scale.
EpisodeRecord run_episode(const BenchmarkConfig& config, const Scene& base_scene, Agent& agent,
                          uint64_t seed, bool train_split = true, double k_int = 0.0);

// Re-simulates the recorded action sequence; returns the final world.
WorldState replay(const BenchmarkConfig& config, const Scene& base_scene,
                  const EpisodeRecord& record);

struct TrainTestReport {
  TTestResult welch;
  TTestResult one_sample;  // per-pair differences of matched train/test means
  double train_mean = 0.0;
  double test_mean = 0.0;
  int train_n = 0;
  int test_n = 0;
};

struct ResultSet {
  std::vector<EpisodeRecord> records;
  std::vector<AggregateRow> summary;
  TrainTestReport train_test;
  bool had_errors = false;
};

ResultSet run_benchmark(const BenchmarkConfig& config);

// --- persistence ---
std::string record_to_json(const EpisodeRecord& record);
EpisodeRecord record_from_json(const std::string& text);
std::string record_filename(const EpisodeRecord& record);
std::string observation_to_json(const Observation& obs);

uint64_t episode_seed(const BenchmarkConfig& config, const std::string& scene_id,
                      const AgentSpec& agent, int rep);

}  // namespace inav
