#include "core/envs/factory.hpp"

#include <set>

#include "core/error.hpp"

namespace rg {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected a JSON object");
  for (const auto& item : j.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      throw ConfigError(ctx + ": unknown key '" + item.key() + "'");
    }
  }
}

double get_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw ConfigError(std::string("'") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) {
    throw ConfigError(std::string("'") + key + "' must be an integer");
  }
  return j.at(key).get<int>();
}

}  // namespace

LineWorldConfig parse_lineworld_config(const json& j) {
  check_keys(j, {"x_min", "x_max", "max_step", "epsilon", "step_penalty", "horizon"},
             "lineworld config");
  LineWorldConfig c;
  c.x_min = get_num(j, "x_min", c.x_min);
  c.x_max = get_num(j, "x_max", c.x_max);
  c.max_step = get_num(j, "max_step", c.max_step);
  c.epsilon = get_num(j, "epsilon", c.epsilon);
  c.step_penalty = get_num(j, "step_penalty", c.step_penalty);
  c.horizon = get_int(j, "horizon", c.horizon);
  return c;
}

ReacherConfig parse_reacher_config(const json& j) {
  check_keys(j,
             {"l1", "l2", "dt", "damping", "torque_limit", "epsilon_pos", "v_max",
              "omega_limit", "step_penalty", "horizon"},
             "reacher config");
  ReacherConfig c;
  c.l1 = get_num(j, "l1", c.l1);
  c.l2 = get_num(j, "l2", c.l2);
  c.dt = get_num(j, "dt", c.dt);
  c.damping = get_num(j, "damping", c.damping);
  c.torque_limit = get_num(j, "torque_limit", c.torque_limit);
  c.epsilon_pos = get_num(j, "epsilon_pos", c.epsilon_pos);
  c.v_max = get_num(j, "v_max", c.v_max);
  c.omega_limit = get_num(j, "omega_limit", c.omega_limit);
  c.step_penalty = get_num(j, "step_penalty", c.step_penalty);
  c.horizon = get_int(j, "horizon", c.horizon);
  return c;
}

MazeConfig parse_maze_config(const json& j) {
  check_keys(j,
             {"h_table", "h_cube", "epsilon", "friction_coeff", "force_limit",
              "impulse_scale", "settle_speed", "substep_dt", "max_substeps",
              "step_penalty", "horizon", "walls"},
             "maze config");
  MazeConfig c;
  c.h_table = get_num(j, "h_table", c.h_table);
  c.h_cube = get_num(j, "h_cube", c.h_cube);
  c.epsilon = get_num(j, "epsilon", c.epsilon);
  c.friction_coeff = get_num(j, "friction_coeff", c.friction_coeff);
  c.force_limit = get_num(j, "force_limit", c.force_limit);
  c.impulse_scale = get_num(j, "impulse_scale", c.impulse_scale);
  c.settle_speed = get_num(j, "settle_speed", c.settle_speed);
  c.substep_dt = get_num(j, "substep_dt", c.substep_dt);
  c.max_substeps = get_int(j, "max_substeps", c.max_substeps);
  c.step_penalty = get_num(j, "step_penalty", c.step_penalty);
  c.horizon = get_int(j, "horizon", c.horizon);
  if (j.contains("walls")) {
    if (!j.at("walls").is_array()) {
      throw ConfigError("maze config: 'walls' must be an array of [x1,y1,x2,y2]");
    }
    for (const auto& seg : j.at("walls")) {
      if (!seg.is_array() || seg.size() != 4) {
        throw ConfigError("maze config: each wall must be [x1,y1,x2,y2]");
      }
      c.walls.push_back({seg[0].get<double>(), seg[1].get<double>(),
                         seg[2].get<double>(), seg[3].get<double>()});
    }
  }
  return c;
}

std::unique_ptr<Env> make_env(const std::string& name, const json& config) {
  const json cfg = config.is_null() ? json::object() : config;
  if (name == "lineworld") {
    return std::make_unique<LineWorld>(parse_lineworld_config(cfg));
  }
  if (name == "reacher") {
    return std::make_unique<Reacher>(parse_reacher_config(cfg));
  }
  if (name == "maze") {
    return std::make_unique<Maze>(parse_maze_config(cfg));
  }
  throw ConfigError("unknown environment '" + name +
                    "' (expected lineworld, reacher or maze)");
}

}  // namespace rg
