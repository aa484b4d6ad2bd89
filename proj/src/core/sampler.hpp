#pragma once

#include <vector>

#include "core/env.hpp"
#include "core/region.hpp"
#include "core/rng.hpp"

namespace rg {

struct SamplerConfig {
  double r_min = 0.3;
  double r_max = 0.9;
  double r_pref = 0.7;
  double k_sigma = 2.0;
  double delta_max = 0.5;
  double sigma_min = 0.1;
  double sigma_max = 1.0;
  int sampling_period = 5;  // K iterations between sampler updates
  int n_new = 135;
  int n_old = 65;
  int brownian_horizon = 40;
  int oversample_factor = 5;
  int history_capacity = 10;
  int rollout_budget_factor = 20;  // max rollouts per resample = factor * n_new
  double merge_radius = 1e-3;      // pool states closer than this are merged
  bool archive_mastered = false;   // also archive entries with mean > r_max

  void validate() const;  // throws ConfigError naming the violated invariant
};

// Integral-style variance controller: nudges sigma so the success ratio
// tracks r_pref, with the change per update clamped to +-delta_max and the
// result clamped to [sigma_min, sigma_max]. Pure.
double update_variance(double sigma, double r_avg, const SamplerConfig& cfg);

struct FilterResult {
  std::vector<RegionEntry> retained;  // history mean within [r_min, r_max]
  std::vector<RegionEntry> mastered;  // mean above r_max
  size_t dropped_hard = 0;            // mean below r_min or empty history
};

// Keeps entries of intermediate difficulty in region.current; entries outside
// the band (or with no recorded outcome) are dropped. The archive is not
// touched.
FilterResult filter_states(ReachabilityRegion& region, const SamplerConfig& cfg);

// One Brownian-motion rollout: horizon i.i.d. N(0, sigma^2) actions from
// `start`, returning every visited state with the action chain that produced
// it. Stops early if the environment episode ends.
std::vector<std::pair<StateVec, std::vector<ActionVec>>> brownian_rollout(
    Env& env, const StateVec& start, double sigma, int horizon, Rng& rng);

// Two-stage resampling. Stage 1 grows an oversampled pool by Brownian
// rollouts whose starts are drawn uniformly from the growing pool (seeded
// with the filtered current set, or the archive when that is empty). Stage 2
// draws n_new states from the pool plus min(n_old, |archive|) archive states,
// all without replacement. New entries start with empty reward histories.
// Replaces region.current and returns its new size.
size_t resample_states(ReachabilityRegion& region, double sigma,
                       const SamplerConfig& cfg, Env& env, Rng& rng);

}  // namespace rg
