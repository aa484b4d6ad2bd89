#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "core/config.hpp"
#include "core/trainer.hpp"

namespace rg {

// A suite runs a base config under several variants (name + config overrides)
// across a list of seeds and aggregates per-iteration statistics across
// seeds.
struct SuiteVariant {
  std::string name;
  nlohmann::json overrides;  // merged over the base config object
};

struct SuiteConfig {
  nlohmann::json base;  // TrainConfig object, may omit rng_seed/output_dir
  std::vector<SuiteVariant> variants;
  std::vector<uint64_t> seeds;
};

SuiteConfig parse_suite_config_text(const std::string& text);

struct SuiteRunStatus {
  std::string variant;
  uint64_t seed = 0;
  bool ok = false;
  bool diverged = false;
  std::string error;
};

// Executes every (variant, seed) run under out_dir/<variant>/seed_<seed> and
// writes an aggregate.csv per variant with rows iteration,metric,mean,std,
// n_seeds covering r_avg and eval_success. Failed runs are recorded and the
// suite continues. jobs > 1 runs trainings concurrently.
std::vector<SuiteRunStatus> run_suite(const SuiteConfig& cfg,
                                      const std::string& out_dir, int jobs);

}  // namespace rg
