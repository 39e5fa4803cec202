#include <doctest.h>

#include "inav/metrics.hpp"
#include "inav/rng.hpp"

using namespace inav;

namespace {

EffortLedger ledger_with(std::vector<double> masses, std::vector<double> lengths, double forces,
                         int steps) {
  EffortLedger ledger;
  ledger.mass = std::move(masses);
  ledger.path_length = std::move(lengths);
  ledger.force_sum = forces;
  ledger.steps = steps;
  ledger.robot_weight = ledger.mass.empty() ? 0.0 : ledger.mass[0] * kGravity;
  return ledger;
}

}  // namespace

TEST_CASE("record_step accumulates displacements and forces") {
  EffortLedger ledger = ledger_with({6.3, 0.5, 45.0}, {0, 0, 0}, 0.0, 0);

  StepOutcome free_step;
  free_step.displacement = {0.05, 0.0, 0.0};
  ledger.record(free_step);
  CHECK(ledger.path_length[0] == doctest::Approx(0.05));
  CHECK(ledger.force_sum == 0.0);
  CHECK(ledger.steps == 1);
  CHECK(ledger.interaction_steps == 0);

  StepOutcome push;
  push.displacement = {0.03, 0.03, 0.0};
  push.contacts.push_back({ContactKind::object, 0, 1, 2.4525});
  push.interacted = true;
  ledger.record(push);
  CHECK(ledger.path_length[1] == doctest::Approx(0.03));
  CHECK(ledger.force_sum == doctest::Approx(2.4525));
  CHECK(ledger.interaction_steps == 1);

  StepOutcome blocked;
  blocked.displacement = {0.0, 0.0, 0.0};
  blocked.contacts.push_back({ContactKind::object, 1, 2, 15.0});
  blocked.interacted = true;
  ledger.record(blocked);
  CHECK(ledger.path_length[2] == 0.0);
  CHECK(ledger.force_sum == doctest::Approx(17.4525));

  StepOutcome jitter;  // below the displacement floor
  jitter.displacement = {5e-5, 5e-5, 0.0};
  ledger.record(jitter);
  CHECK(ledger.path_length[0] == doctest::Approx(0.08));
  CHECK(ledger.path_length[1] == doctest::Approx(0.03));

  StepOutcome mismatched;
  mismatched.displacement = {0.0};
  CHECK_THROWS_AS(ledger.record(mismatched), MetricsError);
}

TEST_CASE("path efficiency") {
  EffortLedger ledger = ledger_with({10.0}, {5.0}, 0.0, 100);
  CHECK(path_efficiency(ledger, 4.0, false) == 0.0);
  CHECK(path_efficiency(ledger, 4.0, true) == doctest::Approx(0.8).epsilon(1e-15));
  EffortLedger exact = ledger_with({10.0}, {4.0}, 0.0, 100);
  CHECK(path_efficiency(exact, 4.0, true) == 1.0);
  EffortLedger shorter = ledger_with({10.0}, {3.5}, 0.0, 100);  // grid slack
  CHECK(path_efficiency(shorter, 4.0, true) == 1.0);
  EffortLedger teleport = ledger_with({10.0}, {0.0}, 0.0, 100);
  CHECK_THROWS_AS(path_efficiency(teleport, 4.0, true), MetricsError);
  CHECK_THROWS_AS(path_efficiency(ledger, 0.0, true), MetricsError);
}

TEST_CASE("effort efficiency") {
  SUBCASE("untouched world scores 1") {
    EffortLedger ledger = ledger_with({10.0, 2.0}, {0.0, 0.0}, 0.0, 50);
    EffortBreakdown e = effort_efficiency(ledger);
    CHECK(e.kinematic == 1.0);
    CHECK(e.dynamic == 1.0);
    CHECK(e.e_eff == 1.0);
  }
  SUBCASE("kinematic example") {
    EffortLedger ledger = ledger_with({10.0, 2.0}, {5.0, 2.5}, 0.0, 50);
    EffortBreakdown e = effort_efficiency(ledger);
    CHECK(e.kinematic == doctest::Approx(50.0 / 55.0).epsilon(1e-15));
    CHECK(e.dynamic == 1.0);
    CHECK(e.e_eff == doctest::Approx(0.5 * (50.0 / 55.0 + 1.0)).epsilon(1e-15));
  }
  SUBCASE("dynamic example: forces match TG") {
    EffortLedger ledger = ledger_with({10.0, 1.0}, {3.0, 0.0}, 98100.0, 1000);
    ledger.robot_weight = 98.1;
    EffortBreakdown e = effort_efficiency(ledger);
    CHECK(e.kinematic == 1.0);
    CHECK(e.dynamic == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e.e_eff == doctest::Approx(0.75).epsilon(1e-15));
  }
  SUBCASE("needs at least one step") {
    EffortLedger ledger = ledger_with({10.0}, {0.0}, 0.0, 0);
    CHECK_THROWS_AS(effort_efficiency(ledger), MetricsError);
  }
}

TEST_CASE("ins endpoints and midpoint") {
  CHECK(ins(0.8, 0.9, 1.0) == 0.8);  // SPL endpoint, exact
  CHECK(ins(0.8, 0.9, 0.0) == 0.9);
  CHECK(ins(0.8, 0.9, 0.5) == doctest::Approx(0.85).epsilon(1e-15));
  CHECK_THROWS_AS(ins(0.5, 0.5, 1.5), MetricsError);
  CHECK_THROWS_AS(ins(0.5, 0.5, -0.1), MetricsError);
}

TEST_CASE("reward function") {
  CHECK(reward(3.0, 2.8, false, false, 0.1) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(reward(1.0, 1.0, true, false, 1.0) == doctest::Approx(-1.0));
  CHECK(reward(0.3, 0.1, false, true, 0.1) == doctest::Approx(10.2).epsilon(1e-12));
  CHECK_THROWS_AS(reward(std::numeric_limits<double>::infinity(), 1.0, false, false, 0.1), MetricsError);
  CHECK_THROWS_AS(reward(1.0, 1.0, false, false, -0.5), MetricsError);
}

TEST_CASE("metric report invariants over random ledgers") {
  Rng rng(314);
  for (int trial = 0; trial < 200; ++trial) {
    int k = 1 + static_cast<int>(rng.uniform_int(6));
    std::vector<double> mass{rng.uniform(5.0, 120.0)};
    std::vector<double> length{rng.uniform(0.1, 30.0)};
    for (int i = 0; i < k; ++i) {
      mass.push_back(rng.uniform(0.1, 50.0));
      length.push_back(rng.bernoulli(0.5) ? rng.uniform(0.0, 5.0) : 0.0);
    }
    EffortLedger ledger = ledger_with(mass, length, rng.uniform(0.0, 5e4),
                                      1 + static_cast<int>(rng.uniform_int(1000)));
    bool success = rng.bernoulli(0.7);
    double l_star = rng.uniform(0.5, 20.0);
    MetricReport report = make_metric_report(ledger, l_star, success,
                                             {0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(report.p_eff >= 0.0);
    CHECK(report.p_eff <= 1.0);
    CHECK(report.e_eff >= 0.0);
    CHECK(report.e_eff <= 1.0);
    for (double v : report.ins) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    // Endpoint identities, exact.
    CHECK(report.ins.front() == report.e_eff);
    CHECK(report.ins.back() == report.p_eff);

    // E_eff strictly decreases when an object moves more or forces grow.
    EffortLedger more = ledger;
    more.path_length[1] += 1.0;
    CHECK(effort_efficiency(more).e_eff < report.e_eff);
    EffortLedger pushier = ledger;
    pushier.force_sum += 100.0;
    CHECK(effort_efficiency(pushier).e_eff < report.e_eff);

    // Kinematic term strictly increases with robot mass when others moved.
    double disturbed = 0.0;
    for (int i = 1; i <= k; ++i) disturbed += mass[i] * length[i];
    if (disturbed > 0.0) {
      EffortLedger heavier = ledger;
      heavier.mass[0] *= 2.0;
      heavier.robot_weight *= 2.0;
      CHECK(effort_efficiency(heavier).kinematic > report.kinematic_term);
    }
  }
}

TEST_CASE("aggregate over episodes") {
  EpisodeMetrics one{"path_follower", "turtlebot", 0.0, "s", true, true, 0.8, 0.9, 0.95, 0.85};
  SUBCASE("single record: means equal the record, std zero") {
    auto rows = aggregate({one}, {0.0, 0.25, 0.5, 0.75, 1.0});
    REQUIRE(rows.size() == 5);
    CHECK(rows[4].alpha == 1.0);
    CHECK(rows[4].ins_mean == doctest::Approx(0.8));
    CHECK(rows[0].ins_mean == doctest::Approx(0.9));
    for (const auto& r : rows) {
      CHECK(r.ins_std == 0.0);
      CHECK(r.n == 1);
      CHECK(r.success_rate == 1.0);
    }
  }
  SUBCASE("two records average") {
    EpisodeMetrics two = one;
    two.p_eff = 0.6;
    two.success = false;
    auto rows = aggregate({one, two}, {1.0});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].ins_mean == doctest::Approx(0.7));
    CHECK(rows[0].success_rate == doctest::Approx(0.5));
    CHECK(rows[0].n == 2);
  }
  SUBCASE("five alphas give five rows per group") {
    EpisodeMetrics other = one;
    other.agent = "avoider";
    auto rows = aggregate({one, other}, {0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(rows.size() == 10);
  }
  SUBCASE("empty input rejected") {
    CHECK_THROWS_AS(aggregate({}, {0.5}), MetricsError);
  }
}

TEST_CASE("summary CSV round trip") {
  EpisodeMetrics a{"cost_aware", "turtlebot", 0.1, "s1", true, true, 0.8123456789, 0.95, 0.9, 0.97};
  EpisodeMetrics b = a;
  b.p_eff = 0.55;
  b.scene_id = "s2";
  auto rows = aggregate({a, b}, {0.0, 0.5, 1.0});
  std::string csv = summary_csv(rows);
  auto parsed = parse_summary_csv(csv);
  REQUIRE(parsed.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(parsed[i].agent == rows[i].agent);
    CHECK(parsed[i].robot == rows[i].robot);
    CHECK(parsed[i].param == rows[i].param);
    CHECK(parsed[i].alpha == rows[i].alpha);
    CHECK(parsed[i].ins_mean == rows[i].ins_mean);  // lossless doubles
    CHECK(parsed[i].ins_std == rows[i].ins_std);
    CHECK(parsed[i].p_eff_mean == rows[i].p_eff_mean);
    CHECK(parsed[i].e_eff_mean == rows[i].e_eff_mean);
    CHECK(parsed[i].success_rate == rows[i].success_rate);
    CHECK(parsed[i].n == rows[i].n);
  }
}

TEST_CASE("welch t-test against reference values") {
  SUBCASE("identical samples") {
    std::vector<double> a{1, 2, 3, 4, 5};
    TTestResult r = t_test(a, a);
    CHECK(r.t == 0.0);
    CHECK(r.p == doctest::Approx(1.0));
    CHECK_FALSE(r.degenerate);
  }
  SUBCASE("shifted samples") {
    std::vector<double> a{1, 2, 3, 4, 5}, b{2, 3, 4, 5, 6};
    TTestResult r = t_test(a, b);
    CHECK(r.t == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.p == doctest::Approx(0.34659350708733416).epsilon(1e-9));
  }
  SUBCASE("unequal sizes and variances") {
    std::vector<double> a{0.61, 0.55, 0.70, 0.64, 0.58, 0.66}, b{0.52, 0.49, 0.58, 0.61};
    TTestResult r = t_test(a, b);
    CHECK(r.t == doctest::Approx(2.076026068874498).epsilon(1e-9));
    CHECK(r.p == doctest::Approx(0.07915915445014407).epsilon(1e-9));
  }
  SUBCASE("degenerate variance, distinct means") {
    std::vector<double> a{0, 0, 0}, b{10, 10, 10};
    TTestResult r = t_test(a, b);
    CHECK(r.degenerate);
    CHECK(r.p < 0.01);
  }
  SUBCASE("tiny samples flagged") {
    std::vector<double> a{1.0}, b{2.0, 3.0};
    CHECK(t_test(a, b).degenerate);
  }
}

TEST_CASE("one-sample t-test against reference values") {
  std::vector<double> d{0.03, -0.01, 0.04, 0.02, 0.00};
  TTestResult r = one_sample_t_test(d, 0.0);
  CHECK(r.t == doctest::Approx(1.7253243712550146).epsilon(1e-9));
  CHECK(r.p == doctest::Approx(0.1595528526983939).epsilon(1e-9));
}
