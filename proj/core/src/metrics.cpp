#include "inav/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

namespace inav {

EffortLedger EffortLedger::for_scene(const Scene& scene, const RobotPreset& preset) {
  EffortLedger ledger;
  int n = body_count(scene);
  ledger.path_length.assign(n, 0.0);
  ledger.mass.reserve(n);
  ledger.mass.push_back(preset.mass);
  for (const MovableObject& o : scene.objects) ledger.mass.push_back(o.mass);
  for (const Door& d : scene.doors) ledger.mass.push_back(d.leaf_mass);
  ledger.robot_weight = preset.weight();
  return ledger;
}

void EffortLedger::record(const StepOutcome& outcome) {
  if (outcome.displacement.size() != path_length.size()) {
    throw MetricsError("ledger/world body count mismatch");
  }
  for (size_t i = 0; i < path_length.size(); ++i) {
    if (outcome.displacement[i] >= kDisplacementFloor) path_length[i] += outcome.displacement[i];
  }
  force_sum += outcome.total_force();
  ++steps;
  if (outcome.interacted) ++interaction_steps;
}

double path_efficiency(const EffortLedger& ledger, double l_star, bool success) {
  if (!(l_star > 0.0) || !std::isfinite(l_star)) throw MetricsError("L* must be positive and finite");
  if (!success) return 0.0;
  double l0 = ledger.path_length.empty() ? 0.0 : ledger.path_length[0];
  if (l0 == 0.0) throw MetricsError("successful episode with zero robot path length");
  // L*/l_0, clamped so grid-approximated L* cannot push the score above 1.
  return std::min(1.0, l_star / std::max(l0, l_star));
}

EffortBreakdown effort_efficiency(const EffortLedger& ledger) {
  if (ledger.steps < 1) throw MetricsError("effort efficiency needs at least one step");
  EffortBreakdown out;
  double mass_displacement = 0.0;
  for (size_t i = 0; i < ledger.path_length.size(); ++i) {
    mass_displacement += ledger.mass[i] * ledger.path_length[i];
  }
  double robot_share = ledger.mass.empty() ? 0.0 : ledger.mass[0] * ledger.path_length[0];
  out.kinematic = mass_displacement > 0.0 ? robot_share / mass_displacement : 1.0;
  double tg = ledger.steps * ledger.robot_weight;
  out.dynamic = tg / (tg + ledger.force_sum);
  out.e_eff = 0.5 * (out.kinematic + out.dynamic);
  return out;
}

double ins(double p_eff, double e_eff, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw MetricsError("alpha must be in [0, 1]");
  return alpha * p_eff + (1.0 - alpha) * e_eff;
}

double reward(double gd_prev, double gd_now, bool interacted, bool success_this_step,
              double k_int) {
  if (!std::isfinite(gd_prev) || !std::isfinite(gd_now)) throw MetricsError("non-finite geodesic distance");
  if (k_int < 0.0) throw MetricsError("k_int must be >= 0");
  double r = gd_prev - gd_now;
  if (success_this_step) r += kSuccessReward;
  if (interacted) r -= k_int;
  return r;
}

MetricReport make_metric_report(const EffortLedger& ledger, double l_star, bool success,
                                const std::vector<double>& alphas) {
  MetricReport report;
  report.success = success;
  report.l_star = l_star;
  report.p_eff = path_efficiency(ledger, l_star, success);
  EffortBreakdown effort = effort_efficiency(ledger);
  report.e_eff = effort.e_eff;
  report.kinematic_term = effort.kinematic;
  report.dynamic_term = effort.dynamic;
  report.alphas = alphas;
  for (double a : alphas) report.ins.push_back(ins(report.p_eff, report.e_eff, a));
  return report;
}

namespace {

struct Stats {
  double mean = 0.0;
  double sd = 0.0;  // sample std, 0 when n < 2
};

Stats mean_std(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / xs.size();
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / (xs.size() - 1));
  }
  return s;
}

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

std::vector<AggregateRow> aggregate(const std::vector<EpisodeMetrics>& episodes,
                                    const std::vector<double>& alphas) {
  if (episodes.empty()) throw MetricsError("no episodes to aggregate");
  using Key = std::tuple<std::string, std::string, double>;
  std::map<Key, std::vector<const EpisodeMetrics*>> groups;
  for (const EpisodeMetrics& e : episodes) {
    groups[{e.agent, e.robot, e.param}].push_back(&e);
  }
  std::vector<AggregateRow> rows;
  for (const auto& [key, members] : groups) {
    std::vector<double> p, eff;
    double successes = 0.0;
    for (const EpisodeMetrics* m : members) {
      p.push_back(m->p_eff);
      eff.push_back(m->e_eff);
      successes += m->success ? 1.0 : 0.0;
    }
    Stats ps = mean_std(p), es = mean_std(eff);
    for (double a : alphas) {
      std::vector<double> scores;
      for (const EpisodeMetrics* m : members) scores.push_back(ins(m->p_eff, m->e_eff, a));
      Stats is = mean_std(scores);
      AggregateRow row;
      row.agent = std::get<0>(key);
      row.robot = std::get<1>(key);
      row.param = std::get<2>(key);
      row.alpha = a;
      row.ins_mean = is.mean;
      row.ins_std = is.sd;
      row.p_eff_mean = ps.mean;
      row.e_eff_mean = es.mean;
      row.success_rate = successes / members.size();
      row.n = static_cast<int>(members.size());
      rows.push_back(row);
    }
  }
  return rows;
}

std::string summary_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << "agent,robot,k_param,alpha,ins_mean,ins_std,p_eff_mean,e_eff_mean,success_rate,n\n";
  for (const AggregateRow& r : rows) {
    out << r.agent << ',' << r.robot << ',' << fmt(r.param) << ',' << fmt(r.alpha) << ','
        << fmt(r.ins_mean) << ',' << fmt(r.ins_std) << ',' << fmt(r.p_eff_mean) << ','
        << fmt(r.e_eff_mean) << ',' << fmt(r.success_rate) << ',' << r.n << '\n';
  }
  return out.str();
}

std::vector<AggregateRow> parse_summary_csv(const std::string& text) {
  std::vector<AggregateRow> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 10) throw MetricsError("malformed summary CSV row: " + line);
    AggregateRow r;
    r.agent = fields[0];
    r.robot = fields[1];
    r.param = std::stod(fields[2]);
    r.alpha = std::stod(fields[3]);
    r.ins_mean = std::stod(fields[4]);
    r.ins_std = std::stod(fields[5]);
    r.p_eff_mean = std::stod(fields[6]);
    r.e_eff_mean = std::stod(fields[7]);
    r.success_rate = std::stod(fields[8]);
    r.n = std::stoi(fields[9]);
    rows.push_back(r);
  }
  return rows;
}

namespace {

Stats sample_stats(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  return mean_std(v);
}

double two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  if (df <= 0.0) return 1.0;
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(dist, -std::abs(t));
}

}  // namespace

TTestResult t_test(std::span<const double> sample_a, std::span<const double> sample_b) {
  TTestResult res;
  size_t na = sample_a.size(), nb = sample_b.size();
  if (na < 2 || nb < 2) {
    res.degenerate = true;
    return res;
  }
  Stats a = sample_stats(sample_a), b = sample_stats(sample_b);
  double va = a.sd * a.sd / na, vb = b.sd * b.sd / nb;
  double se2 = va + vb;
  if (se2 == 0.0) {
    res.degenerate = true;
    res.t = a.mean == b.mean ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(),
                                                   a.mean - b.mean);
    res.p = a.mean == b.mean ? 1.0 : 0.0;
    return res;
  }
  res.t = (a.mean - b.mean) / std::sqrt(se2);
  res.df = se2 * se2 / (va * va / (na - 1) + vb * vb / (nb - 1));
  res.p = two_sided_p(res.t, res.df);
  return res;
}

TTestResult one_sample_t_test(std::span<const double> values, double mu0) {
  TTestResult res;
  size_t n = values.size();
  if (n < 2) {
    res.degenerate = true;
    return res;
  }
  Stats s = sample_stats(values);
  if (s.sd == 0.0) {
    res.degenerate = true;
    res.t = s.mean == mu0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(),
                                                s.mean - mu0);
    res.p = s.mean == mu0 ? 1.0 : 0.0;
    return res;
  }
  res.t = (s.mean - mu0) / (s.sd / std::sqrt(static_cast<double>(n)));
  res.df = static_cast<double>(n - 1);
  res.p = two_sided_p(res.t, res.df);
  return res;
}

}  // namespace inav
