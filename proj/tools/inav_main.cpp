#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "inav/env_protocol.hpp"
#include "inav/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

fs::path output_root(const std::string& out_flag) {
  if (!out_flag.empty()) return out_flag;
  if (const char* env = std::getenv("INAV_BENCH_DIR")) return env;
  return ".";
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

struct SweepArgs {
  std::vector<std::string> train, test;
  std::vector<std::string> agents{"path_follower", "avoider", "cost_aware"};
  std::vector<double> params{0.0, 0.1, 1.0};
  std::string robot = "turtlebot";
  uint64_t seed = 0;
  int seeds_per_cell = 3;
  int workers = 1;
  int clutter = 10;
  std::vector<double> alpha_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  std::string out;
};

inav::BenchmarkConfig sweep_config(const SweepArgs& args) {
  inav::BenchmarkConfig config;
  config.train_scenes = args.train;
  config.test_scenes = args.test;
  config.robot = args.robot;
  config.master_seed = args.seed;
  config.seeds_per_cell = args.seeds_per_cell;
  config.workers = args.workers;
  config.clutter_count = args.clutter;
  config.alpha_grid = args.alpha_grid;
  for (const std::string& kind : args.agents) {
    for (double p : args.params) {
      inav::AgentSpec spec;
      spec.kind = kind;
      spec.param = p;
      config.agents.push_back(spec);
    }
  }
  return config;
}

std::string tradeoff_csv(const std::vector<inav::AggregateRow>& summary) {
  std::string out = "agent,robot,k_param,p_eff_mean,e_eff_mean,n\n";
  std::string last_key;
  for (const inav::AggregateRow& r : summary) {
    std::string key = r.agent + "," + r.robot + "," + fmt(r.param);
    if (key == last_key) continue;  // one row per group, not per alpha
    last_key = key;
    out += key + "," + fmt(r.p_eff_mean) + "," + fmt(r.e_eff_mean) + "," + std::to_string(r.n) + "\n";
  }
  return out;
}

std::string ins_vs_alpha_csv(const std::vector<inav::AggregateRow>& summary) {
  std::string out = "agent,robot,k_param,alpha,ins_mean,ins_std,n\n";
  for (const inav::AggregateRow& r : summary) {
    out += r.agent + "," + r.robot + "," + fmt(r.param) + "," + fmt(r.alpha) + "," +
           fmt(r.ins_mean) + "," + fmt(r.ins_std) + "," + std::to_string(r.n) + "\n";
  }
  return out;
}

std::string ttest_json(const inav::TrainTestReport& report) {
  ordered_json j;
  j["welch"] = {{"t", report.welch.t},
                {"p", report.welch.p},
                {"df", report.welch.df},
                {"degenerate", report.welch.degenerate}};
  j["one_sample_paired"] = {{"t", report.one_sample.t},
                            {"p", report.one_sample.p},
                            {"df", report.one_sample.df},
                            {"degenerate", report.one_sample.degenerate}};
  j["train_mean_ins_0.5"] = report.train_mean;
  j["test_mean_ins_0.5"] = report.test_mean;
  j["train_n"] = report.train_n;
  j["test_n"] = report.test_n;
  return j.dump(2) + "\n";
}

void emit_result_set(const inav::ResultSet& result, const fs::path& root) {
  fs::create_directories(root / "records");
  std::string jsonl;
  for (const inav::EpisodeRecord& rec : result.records) {
    std::string doc = inav::record_to_json(rec);
    write_file(root / "records" / inav::record_filename(rec), doc + "\n");
    jsonl += doc + "\n";
  }
  write_file(root / "records.jsonl", jsonl);
  write_file(root / "summary.csv", inav::summary_csv(result.summary));
  write_file(root / "tradeoff.csv", tradeoff_csv(result.summary));
  write_file(root / "ins_vs_alpha.csv", ins_vs_alpha_csv(result.summary));
  write_file(root / "ttest.json", ttest_json(result.train_test));
}

int cmd_generate(int rooms, int count, uint64_t seed, double density, double door_fraction,
                 double extent_x, double extent_y, const std::string& out_flag) {
  fs::path root = output_root(out_flag);
  fs::create_directories(root);
  inav::SceneGenConfig config;
  config.rooms = rooms;
  config.furniture_density = density;
  config.door_fraction = door_fraction;
  config.extent_x = extent_x;
  config.extent_y = extent_y;
  for (int i = 0; i < count; ++i) {
    inav::Scene scene = inav::generate_scene(config, seed + i);
    char name[64];
    std::snprintf(name, sizeof(name), "scene_%03d.json", i);
    write_file(root / name, inav::save_scene(scene));
    inav::OccupancyGrid grid = inav::build_grid(scene, 0.0);
    double free_area = grid.free_cell_count() * grid.resolution() * grid.resolution();
    std::cout << name << ": rooms=" << rooms << " objects=" << scene.object_count()
              << " doors=" << scene.doors.size() << " free_area_m2=" << fmt(free_area) << "\n";
  }
  return 0;
}

int cmd_run(const std::string& scene_path, const std::string& agent_kind, double param,
            const std::string& robot, uint64_t seed, int clutter,
            const std::vector<double>& alpha_grid, const std::string& out_flag) {
  inav::Scene scene = inav::load_scene_file(scene_path);
  inav::BenchmarkConfig config;
  config.robot = robot;
  config.clutter_count = clutter;
  config.alpha_grid = alpha_grid;
  inav::AgentSpec spec;
  spec.kind = agent_kind;
  spec.param = param;
  auto agent = inav::make_agent(spec);
  inav::EpisodeRecord record = inav::run_episode(config, scene, *agent, seed, true, param);
  record.scene_path = scene_path;

  fs::path root = output_root(out_flag);
  fs::create_directories(root);
  write_file(root / inav::record_filename(record), inav::record_to_json(record) + "\n");

  std::cout << "scene=" << record.scene_id << " agent=" << record.agent
            << " param=" << fmt(record.param) << " seed=" << record.seed << "\n";
  std::cout << "status=" << inav::to_string(record.status) << " steps=" << record.trace.size()
            << " l_star=" << fmt(record.l_star) << "\n";
  std::cout << "p_eff=" << fmt(record.metrics.p_eff) << " e_eff=" << fmt(record.metrics.e_eff)
            << " kinematic=" << fmt(record.metrics.kinematic_term)
            << " dynamic=" << fmt(record.metrics.dynamic_term) << "\n";
  for (size_t i = 0; i < record.metrics.alphas.size(); ++i) {
    std::cout << "ins[alpha=" << fmt(record.metrics.alphas[i]) << "]=" << fmt(record.metrics.ins[i])
              << "\n";
  }
  std::cout << "timing: steps_per_second=" << fmt(record.steps_per_second)
            << " wall_time_s=" << fmt(record.wall_time_s) << "\n";
  return record.status == inav::EpisodeStatus::error ? 1 : 0;
}

int cmd_sweep(const SweepArgs& args) {
  inav::BenchmarkConfig config = sweep_config(args);
  inav::ResultSet result = inav::run_benchmark(config);
  fs::path root = output_root(args.out);
  emit_result_set(result, root);
  int episodes = static_cast<int>(result.records.size());
  std::cout << "episodes=" << episodes << " output=" << root.string() << "\n";
  std::cout << "train/test welch p=" << fmt(result.train_test.welch.p) << "\n";
  if (result.had_errors) {
    std::cout << "episode errors occurred; see records\n";
    return 1;
  }
  return 0;
}

int cmd_report(const std::string& in_path, const std::string& out_flag,
               const std::vector<double>& alpha_grid) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open " + in_path);
  std::vector<inav::EpisodeRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) records.push_back(inav::record_from_json(line));
  }
  if (records.empty()) throw std::runtime_error("no records in " + in_path);

  std::vector<inav::EpisodeMetrics> rows;
  std::vector<double> train_ins, test_ins;
  for (const inav::EpisodeRecord& rec : records) {
    if (rec.status == inav::EpisodeStatus::error) continue;
    inav::EpisodeMetrics m;
    m.agent = rec.agent;
    m.robot = rec.robot;
    m.param = rec.param;
    m.scene_id = rec.scene_id;
    m.train_split = rec.train_split;
    m.success = rec.status == inav::EpisodeStatus::success;
    m.p_eff = rec.metrics.p_eff;
    m.e_eff = rec.metrics.e_eff;
    rows.push_back(m);
    (rec.train_split ? train_ins : test_ins).push_back(inav::ins(m.p_eff, m.e_eff, 0.5));
  }
  inav::ResultSet result;
  result.summary = inav::aggregate(rows, alpha_grid);
  result.train_test.welch = inav::t_test(train_ins, test_ins);
  result.train_test.train_n = static_cast<int>(train_ins.size());
  result.train_test.test_n = static_cast<int>(test_ins.size());

  fs::path root = output_root(out_flag);
  fs::create_directories(root);
  write_file(root / "summary.csv", inav::summary_csv(result.summary));
  write_file(root / "tradeoff.csv", tradeoff_csv(result.summary));
  write_file(root / "ins_vs_alpha.csv", ins_vs_alpha_csv(result.summary));
  write_file(root / "ttest.json", ttest_json(result.train_test));
  std::cout << "records=" << records.size() << " output=" << root.string() << "\n";
  return 0;
}

int cmd_env(const std::string& scene_path, const std::string& robot, uint64_t seed, double k_int,
            int clutter) {
  inav::Scene scene = inav::load_scene_file(scene_path);
  inav::BenchmarkConfig config;
  config.robot = robot;
  config.clutter_count = clutter;
  inav::serve_env_protocol(std::cin, std::cout, config, scene, seed, k_int);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive navigation benchmark: 2D pushing simulator, INS metrics, "
               "planner oracle, scripted baselines"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate procedural scene files");
  int gen_rooms = 4, gen_count = 1;
  uint64_t gen_seed = 0;
  double gen_density = 0.3, gen_door_fraction = 0.5, gen_x = 10.0, gen_y = 8.0;
  std::string gen_out;
  gen->add_option("--rooms", gen_rooms, "Room count")->check(CLI::PositiveNumber);
  gen->add_option("--count", gen_count, "Number of scene files");
  gen->add_option("--seed", gen_seed, "Base seed");
  gen->add_option("--density", gen_density, "Furniture density");
  gen->add_option("--door-fraction", gen_door_fraction, "Fraction of openings with leaves");
  gen->add_option("--extent-x", gen_x, "Floor width, m");
  gen->add_option("--extent-y", gen_y, "Floor height, m");
  gen->add_option("--out", gen_out, "Output directory");

  // run
  auto* run = app.add_subcommand("run", "Run a single episode");
  std::string run_scene, run_agent = "path_follower", run_robot = "turtlebot", run_out;
  double run_param = 0.0;
  uint64_t run_seed = 0;
  int run_clutter = 10;
  std::vector<double> run_alpha{0.0, 0.25, 0.5, 0.75, 1.0};
  run->add_option("--scene", run_scene, "Scene file")->required();
  run->add_option("--agent", run_agent, "path_follower|avoider|cost_aware");
  run->add_option("--param", run_param, "k_int / lambda");
  run->add_option("--robot", run_robot, "turtlebot|fetch");
  run->add_option("--seed", run_seed, "Episode seed");
  run->add_option("--clutter", run_clutter, "Clutter object count");
  run->add_option("--alpha-grid", run_alpha, "INS alpha levels");
  run->add_option("--out", run_out, "Output directory");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run the benchmark grid");
  SweepArgs sa;
  sweep->add_option("--train", sa.train, "Training scene files")->required();
  sweep->add_option("--test", sa.test, "Held-out scene files");
  sweep->add_option("--agent", sa.agents, "Agent kinds");
  sweep->add_option("--param", sa.params, "Parameter sweep values");
  sweep->add_option("--robot", sa.robot, "turtlebot|fetch");
  sweep->add_option("--seed", sa.seed, "Master seed");
  sweep->add_option("--seeds-per-cell", sa.seeds_per_cell, "Seeds per (scene, agent, param)");
  sweep->add_option("--workers", sa.workers, "Parallel episode workers");
  sweep->add_option("--clutter", sa.clutter, "Clutter object count");
  sweep->add_option("--alpha-grid", sa.alpha_grid, "INS alpha levels");
  sweep->add_option("--out", sa.out, "Output directory");

  // report
  auto* report = app.add_subcommand("report", "Re-aggregate a records.jsonl file");
  std::string rep_in, rep_out;
  std::vector<double> rep_alpha{0.0, 0.25, 0.5, 0.75, 1.0};
  report->add_option("--in", rep_in, "records.jsonl path")->required();
  report->add_option("--alpha-grid", rep_alpha, "INS alpha levels");
  report->add_option("--out", rep_out, "Output directory");

  // env
  auto* env = app.add_subcommand("env", "Serve the JSON environment protocol on stdio");
  std::string env_scene, env_robot = "turtlebot";
  uint64_t env_seed = 0;
  double env_kint = 0.0;
  int env_clutter = 10;
  env->add_option("--scene", env_scene, "Scene file")->required();
  env->add_option("--robot", env_robot, "turtlebot|fetch");
  env->add_option("--seed", env_seed, "First episode seed");
  env->add_option("--param", env_kint, "Reward interaction penalty k_int");
  env->add_option("--clutter", env_clutter, "Clutter object count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      return cmd_generate(gen_rooms, gen_count, gen_seed, gen_density, gen_door_fraction, gen_x,
                          gen_y, gen_out);
    }
    if (run->parsed()) {
      return cmd_run(run_scene, run_agent, run_param, run_robot, run_seed, run_clutter, run_alpha,
                     run_out);
    }
    if (sweep->parsed()) return cmd_sweep(sa);
    if (report->parsed()) return cmd_report(rep_in, rep_out, rep_alpha);
    if (env->parsed()) return cmd_env(env_scene, env_robot, env_seed, env_kint, env_clutter);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
