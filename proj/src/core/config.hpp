#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "core/learner.hpp"
#include "core/sampler.hpp"
#include "core/types.hpp"

namespace rg {

enum class TrainMode { Adaptive, Constant, Uniform };

std::string mode_name(TrainMode mode);

struct TrainConfig {
  std::string environment;      // lineworld | reacher | maze
  nlohmann::json env_config = nlohmann::json::object();
  std::optional<StateVec> seed_state;  // default: the environment's seed
  int iterations = 0;           // 0 -> per-environment default
  TrainMode mode = TrainMode::Adaptive;
  double constant_sigma = 0.5;  // used in constant mode
  double initial_sigma = 0.5;
  uint64_t rng_seed = 1;
  int eval_every = 10;          // 0 disables periodic evaluation
  int eval_pairs = 100;
  std::string output_dir;
  bool record_wall_time = true;
  SamplerConfig sampler;
  LearnerConfig learner;

  void validate() const;
};

// Strict parsing: unknown keys are rejected with the offending key named.
TrainConfig parse_train_config(const nlohmann::json& j);
TrainConfig parse_train_config_text(const std::string& text);

nlohmann::json train_config_to_json(const TrainConfig& cfg);

int default_iterations(const std::string& environment);

}  // namespace rg
