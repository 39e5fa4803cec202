#include "inav/env_protocol.hpp"

#include <istream>
#include <memory>
#include <ostream>

#include <json.hpp>

namespace inav {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json info_json(const Environment& env) {
  ordered_json info;
  info["t"] = env.steps();
  info["gd"] = env.last_gd();
  info["distance_to_goal"] = env.distance_to_goal();
  info["success"] = env.success();
  ordered_json contacts = ordered_json::array();
  for (const ContactRecord& c : env.last_outcome().contacts) {
    contacts.push_back({{"kind", static_cast<int>(c.kind)},
                        {"index", c.index},
                        {"body", c.body},
                        {"force", c.force}});
  }
  info["contacts"] = contacts;
  return info;
}

void reply(std::ostream& out, const Environment& env, double reward) {
  ordered_json j;
  j["observation"] = ordered_json::parse(observation_to_json(env.observation()));
  j["reward"] = reward;
  j["done"] = env.done();
  j["info"] = info_json(env);
  out << j.dump() << "\n" << std::flush;
}

void reply_error(std::ostream& out, const std::string& message) {
  ordered_json j;
  j["error"] = message;
  out << j.dump() << "\n" << std::flush;
}

}  // namespace

int serve_env_protocol(std::istream& in, std::ostream& out, const BenchmarkConfig& config,
                       const Scene& base_scene, uint64_t first_seed, double k_int) {
  std::unique_ptr<Environment> env;
  int episodes = 0;
  uint64_t seed = first_seed;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json req;
    try {
      req = ordered_json::parse(line);
    } catch (const std::exception& e) {
      reply_error(out, std::string("bad request: ") + e.what());
      continue;
    }
    std::string op = req.value("op", "");
    if (op == "close") break;
    try {
      if (op == "reset") {
        env = std::make_unique<Environment>(config, base_scene, seed, k_int);
        ++episodes;
        ++seed;
        reply(out, *env, 0.0);
      } else if (op == "step") {
        if (!env) {
          reply_error(out, "step before reset");
          continue;
        }
        const auto& a = req.at("action");
        WheelCommand cmd{a.at(0).get<double>(), a.at(1).get<double>()};
        auto result = env->step(cmd);
        reply(out, *env, result.reward);
      } else {
        reply_error(out, "unknown op: " + op);
      }
    } catch (const std::exception& e) {
      reply_error(out, e.what());
    }
  }
  return episodes;
}

}  // namespace inav
