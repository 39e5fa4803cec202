#include "inav/harness.hpp"

#include <atomic>
#include <chrono>
#include <charconv>
#include <cstring>
#include <thread>

#include <json.hpp>

#include "inav/rng.hpp"

namespace inav {

using ordered_json = nlohmann::ordered_json;

std::string to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::success: return "success";
    case EpisodeStatus::timeout: return "timeout";
    case EpisodeStatus::agent_abort: return "agent_abort";
    case EpisodeStatus::error: return "error";
  }
  return "?";
}

namespace {

EpisodeStatus status_from_string(const std::string& s) {
  if (s == "success") return EpisodeStatus::success;
  if (s == "timeout") return EpisodeStatus::timeout;
  if (s == "agent_abort") return EpisodeStatus::agent_abort;
  return EpisodeStatus::error;
}

std::string fmt_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

uint64_t episode_seed(const BenchmarkConfig& config, const std::string& scene_id,
                      const AgentSpec& agent, int rep) {
  uint64_t tag = hash_str(scene_id);
  tag = tag * 1000003ULL + hash_str(agent.kind);
  uint64_t pbits = 0;
  std::memcpy(&pbits, &agent.param, sizeof(pbits));
  tag = tag * 1000003ULL + pbits;
  tag = tag * 1000003ULL + static_cast<uint64_t>(rep);
  return mix_seed(config.master_seed, tag);
}

EpisodeSetup reset(const BenchmarkConfig& config, const Scene& base_scene, uint64_t seed) {
  EpisodeSetup setup;
  setup.preset = robot_preset_by_name(config.robot);
  setup.clutter_seed = mix_seed(seed, 1);
  setup.start_goal_seed = mix_seed(seed, 2);
  setup.agent_seed = mix_seed(seed, 3);
  setup.scene = place_clutter(base_scene, config.clutter_count, setup.clutter_seed);
  setup.spec = sample_episode(setup.scene, setup.start_goal_seed, setup.preset.body_radius,
                              setup.preset.name);
  GridOptions options;
  options.resolution = config.grid_resolution;
  setup.static_grid = std::make_unique<OccupancyGrid>(
      build_grid(setup.scene, setup.preset.body_radius, options));
  setup.static_field = geodesic_field(*setup.static_grid, setup.spec.goal);
  setup.oracle_path = shortest_path(setup.static_field, setup.spec.start.position());
  setup.l_star = setup.static_field.at(setup.spec.start.position());
  setup.initial_world = make_world(setup.scene, setup.spec.start);
  setup.first_observation = make_observation(setup.scene, setup.initial_world, setup.spec.goal,
                                             setup.oracle_path, config.sensors);
  return setup;
}

Environment::Environment(const BenchmarkConfig& config, const Scene& base_scene, uint64_t seed,
                         double k_int)
    : config_(config),
      k_int_(k_int),
      setup_(reset(config, base_scene, seed)),
      world_(setup_.initial_world),
      ledger_(EffortLedger::for_scene(setup_.scene, setup_.preset)),
      obs_(setup_.first_observation),
      gd_(setup_.l_star) {}

double Environment::distance_to_goal() const {
  return (world_.robot.position() - setup_.spec.goal).norm();
}

Environment::StepResult Environment::step(const WheelCommand& action) {
  if (done_) throw HarnessError("step on finished episode");
  outcome_ = inav::step(setup_.scene, setup_.preset, world_, action, config_.physics);
  world_ = outcome_.world;
  ledger_.record(outcome_);
  ++t_;

  double gd_prev = gd_;
  double gd_now = setup_.static_field.at(world_.robot.position());
  if (std::isfinite(gd_now)) gd_ = gd_now;  // scraping a wall keeps the last valid GD

  bool success_now = distance_to_goal() < setup_.preset.body_width();
  bool success_this_step = success_now && !success_latched_;
  if (success_now) success_latched_ = true;
  last_reward_ = reward(gd_prev, gd_, outcome_.interacted, success_this_step, k_int_);

  success_ = success_now;
  done_ = success_now || t_ >= config_.max_steps;
  obs_ = make_observation(setup_.scene, world_, setup_.spec.goal, setup_.oracle_path,
                          config_.sensors);
  return {&obs_, last_reward_, done_};
}

namespace {

MetricReport safe_metric_report(const EffortLedger& ledger, double l_star, bool success,
                                const std::vector<double>& alphas) {
  if (ledger.steps < 1 || !std::isfinite(l_star) || !(l_star > 0.0)) {
    MetricReport report;  // unreachable oracle or zero-length episode
    report.success = success;
    report.l_star = l_star;
    report.alphas = alphas;
    if (ledger.steps >= 1) {
      EffortBreakdown effort = effort_efficiency(ledger);
      report.e_eff = effort.e_eff;
      report.kinematic_term = effort.kinematic;
      report.dynamic_term = effort.dynamic;
    }
    for (double a : alphas) report.ins.push_back(ins(report.p_eff, report.e_eff, a));
    return report;
  }
  return make_metric_report(ledger, l_star, success, alphas);
}

}  // namespace

EpisodeRecord run_episode(const BenchmarkConfig& config, const Scene& base_scene, Agent& agent,
                          uint64_t seed, bool train_split, double k_int) {
  EpisodeRecord record;
  record.agent = agent.name();
  record.robot = config.robot;
  record.train_split = train_split;
  record.seed = seed;
  record.param = k_int;
  record.clutter_doorway_guard = config.clutter_count > 0;

  Environment env(config, base_scene, seed, k_int);
  record.scene_id = env.setup().scene.id;
  record.spec = env.setup().spec;
  record.clutter_seed = env.setup().clutter_seed;
  record.start_goal_seed = env.setup().start_goal_seed;
  record.agent_seed = env.setup().agent_seed;
  record.l_star = env.setup().l_star;

  AgentContext ctx = env.setup().context(env.world());
  agent.on_reset(ctx, env.setup().agent_seed);

  auto t0 = std::chrono::steady_clock::now();
  bool aborted = false, errored = false;
  while (!env.done()) {
    WheelCommand action;
    try {
      ctx.world = &env.world();
      action = agent.act(env.observation(), ctx);
    } catch (const std::exception& e) {
      record.error_message = e.what();
      aborted = true;
      break;
    }
    try {
      auto result = env.step(action);
      StepTrace st;
      st.action = action;
      st.pose = env.world().robot;
      st.reward = result.reward;
      st.contacts = env.last_outcome().contacts;
      record.trace.push_back(std::move(st));
    } catch (const PhysicsError& e) {
      record.error_message = e.what();
      errored = true;
      break;
    }
  }
  auto t1 = std::chrono::steady_clock::now();
  record.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  record.steps_per_second = env.steps() / std::max(record.wall_time_s, 1e-9);

  if (errored) {
    record.status = EpisodeStatus::error;
  } else if (aborted) {
    record.status = EpisodeStatus::agent_abort;
  } else {
    record.status = env.success() ? EpisodeStatus::success : EpisodeStatus::timeout;
  }
  record.final_world = env.world();
  record.gd_final = env.last_gd();
  record.ledger = env.ledger();
  bool scored_success = record.status == EpisodeStatus::success;
  record.metrics = safe_metric_report(record.ledger, record.l_star, scored_success,
                                      config.alpha_grid);
  return record;
}

WorldState replay(const BenchmarkConfig& config, const Scene& base_scene,
                  const EpisodeRecord& record) {
  Scene scene = place_clutter(base_scene, config.clutter_count, record.clutter_seed);
  RobotPreset preset = robot_preset_by_name(record.robot);
  WorldState world = make_world(scene, record.spec.start);
  for (const StepTrace& st : record.trace) {
    world = step(scene, preset, world, st.action, config.physics).world;
  }
  return world;
}

ResultSet run_benchmark(const BenchmarkConfig& config) {
  if (config.agents.empty()) throw HarnessError("no agents configured");
  if (config.seeds_per_cell < 1) throw HarnessError("seeds_per_cell must be >= 1");
  for (const std::string& t : config.train_scenes) {
    for (const std::string& u : config.test_scenes) {
      if (t == u) throw HarnessError("train/test scene sets overlap: " + t);
    }
  }

  struct SceneEntry {
    std::string path;
    Scene scene;
    bool train;
  };
  std::vector<SceneEntry> scenes;
  for (const std::string& p : config.train_scenes) scenes.push_back({p, load_scene_file(p), true});
  for (const std::string& p : config.test_scenes) scenes.push_back({p, load_scene_file(p), false});
  if (scenes.empty()) throw HarnessError("no scenes configured");

  struct Job {
    const SceneEntry* scene;
    const AgentSpec* agent;
    int rep;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const SceneEntry& s : scenes) {
    for (const AgentSpec& a : config.agents) {
      for (int rep = 0; rep < config.seeds_per_cell; ++rep) {
        jobs.push_back({&s, &a, rep, episode_seed(config, s.scene.id, a, rep)});
      }
    }
  }

  std::vector<EpisodeRecord> records(jobs.size());
  std::atomic<size_t> cursor{0};
  int workers = std::max(1, config.workers);
  auto work = [&]() {
    for (;;) {
      size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      EpisodeRecord rec;
      try {
        std::unique_ptr<Agent> agent = make_agent(*job.agent);
        rec = run_episode(config, job.scene->scene, *agent, job.seed, job.scene->train,
                          job.agent->param);
      } catch (const std::exception& e) {
        rec.status = EpisodeStatus::error;
        rec.error_message = e.what();
        rec.agent = job.agent->kind;
        rec.robot = config.robot;
        rec.seed = job.seed;
        rec.scene_id = job.scene->scene.id;
        rec.train_split = job.scene->train;
      }
      rec.param = job.agent->param;
      rec.scene_path = job.scene->path;
      records[i] = std::move(rec);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  ResultSet result;
  std::vector<EpisodeMetrics> rows;
  std::vector<double> train_ins, test_ins;
  for (const EpisodeRecord& rec : records) {
    if (rec.status == EpisodeStatus::error) {
      result.had_errors = true;
      continue;  // an errored simulation has no honest score
    }
    EpisodeMetrics m;
    m.agent = rec.agent;
    m.robot = rec.robot;
    m.param = rec.param;
    m.scene_id = rec.scene_id;
    m.train_split = rec.train_split;
    m.success = rec.status == EpisodeStatus::success;
    m.p_eff = rec.metrics.p_eff;
    m.e_eff = rec.metrics.e_eff;
    m.kinematic_term = rec.metrics.kinematic_term;
    m.dynamic_term = rec.metrics.dynamic_term;
    rows.push_back(m);
    double score = ins(m.p_eff, m.e_eff, 0.5);
    (rec.train_split ? train_ins : test_ins).push_back(score);
  }
  if (!rows.empty()) result.summary = aggregate(rows, config.alpha_grid);

  result.train_test.train_n = static_cast<int>(train_ins.size());
  result.train_test.test_n = static_cast<int>(test_ins.size());
  double tsum = 0.0, usum = 0.0;
  for (double v : train_ins) tsum += v;
  for (double v : test_ins) usum += v;
  result.train_test.train_mean = train_ins.empty() ? 0.0 : tsum / train_ins.size();
  result.train_test.test_mean = test_ins.empty() ? 0.0 : usum / test_ins.size();
  result.train_test.welch = t_test(train_ins, test_ins);

  // Paired variant: per (agent, param, rep), mean over train scenes minus
  // mean over test scenes.
  std::vector<double> diffs;
  for (const AgentSpec& a : config.agents) {
    for (int rep = 0; rep < config.seeds_per_cell; ++rep) {
      double tr = 0.0, te = 0.0;
      int ntr = 0, nte = 0;
      for (size_t i = 0; i < jobs.size(); ++i) {
        const Job& job = jobs[i];
        if (job.agent != &a || job.rep != rep) continue;
        if (records[i].status == EpisodeStatus::error) continue;
        double score = ins(records[i].metrics.p_eff, records[i].metrics.e_eff, 0.5);
        if (job.scene->train) {
          tr += score;
          ++ntr;
        } else {
          te += score;
          ++nte;
        }
      }
      if (ntr > 0 && nte > 0) diffs.push_back(tr / ntr - te / nte);
    }
  }
  result.train_test.one_sample = one_sample_t_test(diffs, 0.0);

  result.records.reserve(records.size());
  for (EpisodeRecord& r : records) result.records.push_back(std::move(r));
  return result;
}

// --- persistence ---

namespace {

ordered_json pose_json(const Pose& p) { return {p.x, p.y, p.theta}; }
Pose pose_from(const ordered_json& j) { return {j.at(0), j.at(1), j.at(2)}; }

ordered_json contacts_json(const std::vector<ContactRecord>& contacts) {
  ordered_json arr = ordered_json::array();
  for (const ContactRecord& c : contacts) {
    arr.push_back({static_cast<int>(c.kind), c.index, c.body, c.force});
  }
  return arr;
}

std::vector<ContactRecord> contacts_from(const ordered_json& arr) {
  std::vector<ContactRecord> out;
  for (const auto& c : arr) {
    ContactRecord rec;
    rec.kind = static_cast<ContactKind>(c.at(0).get<int>());
    rec.index = c.at(1);
    rec.body = c.at(2);
    rec.force = c.at(3);
    out.push_back(rec);
  }
  return out;
}

ordered_json world_json(const WorldState& w) {
  ordered_json j;
  j["robot"] = pose_json(w.robot);
  j["v"] = w.v;
  j["omega"] = w.omega;
  ordered_json objs = ordered_json::array();
  for (const Pose& p : w.object_poses) objs.push_back(pose_json(p));
  j["objects"] = objs;
  j["doors"] = w.door_angles;
  j["step_index"] = w.step_index;
  return j;
}

WorldState world_from(const ordered_json& j) {
  WorldState w;
  w.robot = pose_from(j.at("robot"));
  w.v = j.at("v");
  w.omega = j.at("omega");
  for (const auto& p : j.at("objects")) w.object_poses.push_back(pose_from(p));
  w.door_angles = j.at("doors").get<std::vector<double>>();
  w.step_index = j.at("step_index");
  return w;
}

}  // namespace

std::string observation_to_json(const Observation& obs) {
  ordered_json j;
  j["goal"] = {obs.goal_local.x, obs.goal_local.y};
  j["twist"] = {obs.v, obs.omega};
  ordered_json wps = ordered_json::array();
  for (const Vec2& w : obs.waypoints_local) wps.push_back({w.x, w.y});
  j["waypoints"] = wps;
  j["depth"] = obs.depth;
  ordered_json sem = ordered_json::array();
  for (SemanticLabel s : obs.semantic) sem.push_back(to_string(s));
  j["semantic"] = sem;
  return j.dump();
}

std::string record_to_json(const EpisodeRecord& record) {
  ordered_json j;
  j["scene_id"] = record.scene_id;
  j["scene_path"] = record.scene_path;
  j["agent"] = record.agent;
  j["param"] = record.param;
  j["robot"] = record.robot;
  j["train_split"] = record.train_split;
  j["seed"] = record.seed;
  j["clutter_seed"] = record.clutter_seed;
  j["start_goal_seed"] = record.start_goal_seed;
  j["agent_seed"] = record.agent_seed;
  j["spec"] = {{"start", pose_json(record.spec.start)},
               {"goal", {record.spec.goal.x, record.spec.goal.y}}};
  j["status"] = to_string(record.status);
  j["error_message"] = record.error_message;
  j["l_star"] = std::isfinite(record.l_star) ? ordered_json(record.l_star) : ordered_json("unreachable");
  j["gd_final"] = record.gd_final;
  j["clutter_doorway_guard"] = record.clutter_doorway_guard;
  j["metrics"] = {{"success", record.metrics.success},
                  {"p_eff", record.metrics.p_eff},
                  {"e_eff", record.metrics.e_eff},
                  {"kinematic_term", record.metrics.kinematic_term},
                  {"dynamic_term", record.metrics.dynamic_term},
                  {"alphas", record.metrics.alphas},
                  {"ins", record.metrics.ins}};
  j["ledger"] = {{"path_length", record.ledger.path_length},
                 {"mass", record.ledger.mass},
                 {"force_sum", record.ledger.force_sum},
                 {"steps", record.ledger.steps},
                 {"robot_weight", record.ledger.robot_weight},
                 {"interaction_steps", record.ledger.interaction_steps}};
  j["wall_time_s"] = record.wall_time_s;
  j["steps_per_second"] = record.steps_per_second;
  j["final_world"] = world_json(record.final_world);
  ordered_json trace = ordered_json::array();
  for (const StepTrace& st : record.trace) {
    trace.push_back({{"action", {st.action.left, st.action.right}},
                     {"pose", pose_json(st.pose)},
                     {"reward", st.reward},
                     {"contacts", contacts_json(st.contacts)}});
  }
  j["trace"] = trace;
  return j.dump();
}

EpisodeRecord record_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  EpisodeRecord r;
  r.scene_id = j.at("scene_id");
  r.scene_path = j.at("scene_path");
  r.agent = j.at("agent");
  r.param = j.at("param");
  r.robot = j.at("robot");
  r.train_split = j.at("train_split");
  r.seed = j.at("seed");
  r.clutter_seed = j.at("clutter_seed");
  r.start_goal_seed = j.at("start_goal_seed");
  r.agent_seed = j.at("agent_seed");
  r.spec.start = pose_from(j.at("spec").at("start"));
  r.spec.goal = {j.at("spec").at("goal").at(0), j.at("spec").at("goal").at(1)};
  r.spec.scene_id = r.scene_id;
  r.spec.clutter_seed = r.clutter_seed;
  r.spec.robot_preset = r.robot;
  r.status = status_from_string(j.at("status"));
  r.error_message = j.at("error_message");
  r.l_star = j.at("l_star").is_string() ? std::numeric_limits<double>::infinity()
                                        : j.at("l_star").get<double>();
  r.gd_final = j.at("gd_final");
  r.clutter_doorway_guard = j.at("clutter_doorway_guard");
  const auto& m = j.at("metrics");
  r.metrics.success = m.at("success");
  r.metrics.p_eff = m.at("p_eff");
  r.metrics.e_eff = m.at("e_eff");
  r.metrics.kinematic_term = m.at("kinematic_term");
  r.metrics.dynamic_term = m.at("dynamic_term");
  r.metrics.alphas = m.at("alphas").get<std::vector<double>>();
  r.metrics.ins = m.at("ins").get<std::vector<double>>();
  r.metrics.l_star = r.l_star;
  const auto& l = j.at("ledger");
  r.ledger.path_length = l.at("path_length").get<std::vector<double>>();
  r.ledger.mass = l.at("mass").get<std::vector<double>>();
  r.ledger.force_sum = l.at("force_sum");
  r.ledger.steps = l.at("steps");
  r.ledger.robot_weight = l.at("robot_weight");
  r.ledger.interaction_steps = l.at("interaction_steps");
  r.wall_time_s = j.at("wall_time_s");
  r.steps_per_second = j.at("steps_per_second");
  r.final_world = world_from(j.at("final_world"));
  for (const auto& st : j.at("trace")) {
    StepTrace t;
    t.action = {st.at("action").at(0), st.at("action").at(1)};
    t.pose = pose_from(st.at("pose"));
    t.reward = st.at("reward");
    t.contacts = contacts_from(st.at("contacts"));
    r.trace.push_back(std::move(t));
  }
  return r;
}

std::string record_filename(const EpisodeRecord& record) {
  return record.scene_id + "_" + record.agent + "_" + fmt_double(record.param) + "_" +
         std::to_string(record.seed) + ".json";
}

}  // namespace inav
