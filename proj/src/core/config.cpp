#include "core/config.hpp"

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

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid value for '") + key + "': " + e.what());
  }
}

SamplerConfig parse_sampler(const json& j) {
  check_keys(j,
             {"r_min", "r_max", "r_pref", "k_sigma", "delta_max", "sigma_min",
              "sigma_max", "sampling_period", "n_new", "n_old", "brownian_horizon",
              "oversample_factor", "history_capacity", "rollout_budget_factor",
              "merge_radius", "archive_mastered"},
             "sampler");
  SamplerConfig c;
  read(j, "r_min", c.r_min);
  read(j, "r_max", c.r_max);
  read(j, "r_pref", c.r_pref);
  read(j, "k_sigma", c.k_sigma);
  read(j, "delta_max", c.delta_max);
  read(j, "sigma_min", c.sigma_min);
  read(j, "sigma_max", c.sigma_max);
  read(j, "sampling_period", c.sampling_period);
  read(j, "n_new", c.n_new);
  read(j, "n_old", c.n_old);
  read(j, "brownian_horizon", c.brownian_horizon);
  read(j, "oversample_factor", c.oversample_factor);
  read(j, "history_capacity", c.history_capacity);
  read(j, "rollout_budget_factor", c.rollout_budget_factor);
  read(j, "merge_radius", c.merge_radius);
  read(j, "archive_mastered", c.archive_mastered);
  return c;
}

LearnerConfig parse_learner(const json& j) {
  check_keys(j,
             {"p_new", "episodes_per_iteration", "discount", "gae_lambda",
              "learning_rate", "clip_ratio", "epochs", "minibatch_size",
              "hidden_widths", "init_log_std", "start_goal_retries"},
             "learner");
  LearnerConfig c;
  read(j, "p_new", c.p_new);
  read(j, "episodes_per_iteration", c.episodes_per_iteration);
  read(j, "discount", c.discount);
  read(j, "gae_lambda", c.gae_lambda);
  read(j, "learning_rate", c.learning_rate);
  read(j, "clip_ratio", c.clip_ratio);
  read(j, "epochs", c.epochs);
  read(j, "minibatch_size", c.minibatch_size);
  read(j, "hidden_widths", c.hidden_widths);
  read(j, "init_log_std", c.init_log_std);
  read(j, "start_goal_retries", c.start_goal_retries);
  return c;
}

}  // namespace

std::string mode_name(TrainMode mode) {
  switch (mode) {
    case TrainMode::Adaptive: return "adaptive";
    case TrainMode::Constant: return "constant";
    case TrainMode::Uniform: return "uniform";
  }
  return "?";
}

int default_iterations(const std::string& environment) {
  if (environment == "maze") return 500;
  if (environment == "reacher") return 300;
  return 200;
}

void TrainConfig::validate() const {
  if (environment.empty()) throw ConfigError("'environment' is required");
  if (iterations < 1) throw ConfigError("'iterations' must be >= 1");
  if (eval_every < 0) throw ConfigError("'eval_every' must be >= 0");
  if (eval_pairs < 1) throw ConfigError("'eval_pairs' must be >= 1");
  if (mode == TrainMode::Constant &&
      !(constant_sigma >= sampler.sigma_min && constant_sigma <= sampler.sigma_max)) {
    throw ConfigError("'constant_sigma' must lie within [sigma_min, sigma_max]");
  }
  if (mode == TrainMode::Adaptive &&
      !(initial_sigma >= sampler.sigma_min && initial_sigma <= sampler.sigma_max)) {
    throw ConfigError("'initial_sigma' must lie within [sigma_min, sigma_max]");
  }
  sampler.validate();
  learner.validate();
}

TrainConfig parse_train_config(const json& j) {
  check_keys(j,
             {"environment", "env_config", "seed_state", "iterations", "mode",
              "constant_sigma", "initial_sigma", "rng_seed", "eval_every",
              "eval_pairs", "output_dir", "record_wall_time", "sampler", "learner"},
             "config");
  TrainConfig c;
  read(j, "environment", c.environment);
  if (j.contains("env_config")) c.env_config = j.at("env_config");
  if (j.contains("seed_state")) {
    StateVec seed;
    read(j, "seed_state", seed);
    c.seed_state = seed;
  }
  read(j, "iterations", c.iterations);
  if (j.contains("mode")) {
    const std::string m = j.at("mode").get<std::string>();
    if (m == "adaptive") {
      c.mode = TrainMode::Adaptive;
    } else if (m == "constant") {
      c.mode = TrainMode::Constant;
    } else if (m == "uniform") {
      c.mode = TrainMode::Uniform;
    } else {
      throw ConfigError("'mode' must be adaptive, constant or uniform");
    }
  }
  read(j, "constant_sigma", c.constant_sigma);
  read(j, "initial_sigma", c.initial_sigma);
  read(j, "rng_seed", c.rng_seed);
  read(j, "eval_every", c.eval_every);
  read(j, "eval_pairs", c.eval_pairs);
  read(j, "output_dir", c.output_dir);
  read(j, "record_wall_time", c.record_wall_time);
  if (j.contains("sampler")) c.sampler = parse_sampler(j.at("sampler"));
  if (j.contains("learner")) c.learner = parse_learner(j.at("learner"));
  if (c.iterations == 0) c.iterations = default_iterations(c.environment);
  c.validate();
  return c;
}

TrainConfig parse_train_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_train_config(j);
}

json train_config_to_json(const TrainConfig& c) {
  json j;
  j["environment"] = c.environment;
  if (!c.env_config.empty()) j["env_config"] = c.env_config;
  if (c.seed_state.has_value()) j["seed_state"] = *c.seed_state;
  j["iterations"] = c.iterations;
  j["mode"] = mode_name(c.mode);
  j["constant_sigma"] = c.constant_sigma;
  j["initial_sigma"] = c.initial_sigma;
  j["rng_seed"] = c.rng_seed;
  j["eval_every"] = c.eval_every;
  j["eval_pairs"] = c.eval_pairs;
  j["output_dir"] = c.output_dir;
  j["record_wall_time"] = c.record_wall_time;
  j["sampler"] = {{"r_min", c.sampler.r_min},
                  {"r_max", c.sampler.r_max},
                  {"r_pref", c.sampler.r_pref},
                  {"k_sigma", c.sampler.k_sigma},
                  {"delta_max", c.sampler.delta_max},
                  {"sigma_min", c.sampler.sigma_min},
                  {"sigma_max", c.sampler.sigma_max},
                  {"sampling_period", c.sampler.sampling_period},
                  {"n_new", c.sampler.n_new},
                  {"n_old", c.sampler.n_old},
                  {"brownian_horizon", c.sampler.brownian_horizon},
                  {"oversample_factor", c.sampler.oversample_factor},
                  {"history_capacity", c.sampler.history_capacity},
                  {"rollout_budget_factor", c.sampler.rollout_budget_factor},
                  {"merge_radius", c.sampler.merge_radius},
                  {"archive_mastered", c.sampler.archive_mastered}};
  j["learner"] = {{"p_new", c.learner.p_new},
                  {"episodes_per_iteration", c.learner.episodes_per_iteration},
                  {"discount", c.learner.discount},
                  {"gae_lambda", c.learner.gae_lambda},
                  {"learning_rate", c.learner.learning_rate},
                  {"clip_ratio", c.learner.clip_ratio},
                  {"epochs", c.learner.epochs},
                  {"minibatch_size", c.learner.minibatch_size},
                  {"hidden_widths", c.learner.hidden_widths},
                  {"init_log_std", c.learner.init_log_std},
                  {"start_goal_retries", c.learner.start_goal_retries}};
  return j;
}

}  // namespace rg
