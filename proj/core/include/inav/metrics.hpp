#pragma once

#include <span>
#include <string>
#include <vector>

#include "inav/physics.hpp"

namespace inav {

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-episode accumulators for the effort metrics. Row 0 is the robot,
// followed by scene objects and door leaves in body order.
struct EffortLedger {
  std::vector<double> path_length;  // l_i, m
  std::vector<double> mass;         // m_i, kg
  double force_sum = 0.0;           // sum over steps of applied force, N
  int steps = 0;                    // T
  double robot_weight = 0.0;        // G = m_0 g
  int interaction_steps = 0;

  // Per-step displacements below this are integration noise, not motion.
  static constexpr double kDisplacementFloor = 1e-4;

  static EffortLedger for_scene(const Scene& scene, const RobotPreset& preset);
  void record(const StepOutcome& outcome);
};

struct MetricReport {
  bool success = false;
  double l_star = 0.0;
  double p_eff = 0.0;
  double e_eff = 0.0;
  double kinematic_term = 0.0;
  double dynamic_term = 0.0;
  std::vector<double> alphas;
  std::vector<double> ins;  // INS at each alpha
};

double path_efficiency(const EffortLedger& ledger, double l_star, bool success);

struct EffortBreakdown {
  double e_eff = 0.0;
  double kinematic = 0.0;
  double dynamic = 0.0;
};
EffortBreakdown effort_efficiency(const EffortLedger& ledger);

double ins(double p_eff, double e_eff, double alpha);

constexpr double kSuccessReward = 10.0;

double reward(double gd_prev, double gd_now, bool interacted, bool success_this_step,
              double k_int);

MetricReport make_metric_report(const EffortLedger& ledger, double l_star, bool success,
                                const std::vector<double>& alphas);

// --- aggregation over episodes ---

struct EpisodeMetrics {
  std::string agent;
  std::string robot;
  double param = 0.0;  // k_int / lambda
  std::string scene_id;
  bool train_split = true;
  bool success = false;
  double p_eff = 0.0;
  double e_eff = 0.0;
  double kinematic_term = 0.0;
  double dynamic_term = 0.0;
};

struct AggregateRow {
  std::string agent;
  std::string robot;
  double param = 0.0;
  double alpha = 0.0;
  double ins_mean = 0.0;
  double ins_std = 0.0;
  double p_eff_mean = 0.0;
  double e_eff_mean = 0.0;
  double success_rate = 0.0;
  int n = 0;
};

std::vector<AggregateRow> aggregate(const std::vector<EpisodeMetrics>& episodes,
                                    const std::vector<double>& alphas);

std::string summary_csv(const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> parse_summary_csv(const std::string& text);

// --- significance testing ---

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
  bool degenerate = false;
};

// Welch two-sample t-test, two-sided p via the Student-t CDF with
// Welch-Satterthwaite degrees of freedom.
TTestResult t_test(std::span<const double> sample_a, std::span<const double> sample_b);

TTestResult one_sample_t_test(std::span<const double> values, double mu0);

}  // namespace inav
