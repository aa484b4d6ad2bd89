#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/env.hpp"
#include "core/learner.hpp"
#include "core/policy.hpp"
#include "core/region.hpp"
#include "core/rng.hpp"

namespace rg {

struct MetricsRow {
  int iteration = 0;
  double r_avg = 0.0;
  std::optional<double> sigma;       // empty in uniform mode
  std::optional<int> n_current;      // empty in uniform mode
  std::optional<int> n_archive;
  double mean_episode_length = 0.0;
  std::optional<double> eval_success;
  std::optional<double> wall_time_s;
};

inline constexpr const char* kMetricsHeader =
    "iteration,r_avg,sigma,n_current,n_archive,mean_episode_length,"
    "eval_success,wall_time_s";

std::string metrics_row_csv(const MetricsRow& row);

// Instrumentation points, in the order they fire within one iteration.
enum class TrainEvent {
  VarianceUpdated,
  StatesFiltered,
  ArchiveAbsorbed,
  Resampled,
  RolloutsCollected,
  PolicyUpdated,
};

struct TrainHooks {
  std::function<void(TrainEvent, int iteration)> on_event;
};

struct TrainResult {
  PolicyParams policy;
  ValueParams value;
  std::vector<MetricsRow> metrics;
  ReachabilityRegion region;  // final region; empty in uniform mode
  bool diverged = false;
  int iterations_run = 0;
  double final_sigma = 0.0;
};

// Runs the full training loop: every sampling_period-th iteration the sampler
// updates the variance, filters, archives and resamples (in that order), and
// every iteration the learner collects rollouts and updates the policy.
// Writes metrics.csv, region_snapshots.jsonl and checkpoints under
// cfg.output_dir when it is non-empty.
TrainResult train(const TrainConfig& cfg, const TrainHooks* hooks = nullptr);

// Success fraction of the deterministic policy over fresh uniform pairs.
double evaluate(const PolicyParams& policy, Env& env, int n_pairs, Rng& rng);

}  // namespace rg
