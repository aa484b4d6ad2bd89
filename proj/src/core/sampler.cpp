#include "core/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/log.hpp"

namespace rg {

void SamplerConfig::validate() const {
  if (!(0.0 <= r_min && r_min < r_pref && r_pref < r_max && r_max <= 1.0)) {
    throw ConfigError("sampler: must satisfy 0 <= r_min < r_pref < r_max <= 1");
  }
  if (!(sigma_min > 0.0 && sigma_min <= sigma_max)) {
    throw ConfigError("sampler: must satisfy 0 < sigma_min <= sigma_max");
  }
  if (n_new < 1) throw ConfigError("sampler: n_new must be >= 1");
  if (n_old < 1) throw ConfigError("sampler: n_old must be >= 1");
  if (sampling_period < 1) throw ConfigError("sampler: sampling_period must be >= 1");
  if (brownian_horizon < 0) throw ConfigError("sampler: brownian_horizon must be >= 0");
  if (oversample_factor < 1) throw ConfigError("sampler: oversample_factor must be >= 1");
  if (history_capacity < 1) throw ConfigError("sampler: history_capacity must be >= 1");
  if (rollout_budget_factor < 1) {
    throw ConfigError("sampler: rollout_budget_factor must be >= 1");
  }
  if (merge_radius < 0.0) throw ConfigError("sampler: merge_radius must be >= 0");
  if (k_sigma < 0.0) throw ConfigError("sampler: k_sigma must be >= 0");
  if (delta_max < 0.0) throw ConfigError("sampler: delta_max must be >= 0");
}

double update_variance(double sigma, double r_avg, const SamplerConfig& cfg) {
  const double delta =
      clip(cfg.k_sigma * (r_avg - cfg.r_pref), -cfg.delta_max, cfg.delta_max);
  return clip(sigma + delta, cfg.sigma_min, cfg.sigma_max);
}

FilterResult filter_states(ReachabilityRegion& region, const SamplerConfig& cfg) {
  FilterResult result;
  for (auto& entry : region.current) {
    if (entry.history.empty()) {
      // No recorded outcome: counts as too hard.
      ++result.dropped_hard;
      continue;
    }
    const double m = entry.history.mean();
    if (m < cfg.r_min) {
      ++result.dropped_hard;
    } else if (m > cfg.r_max) {
      result.mastered.push_back(std::move(entry));
    } else {
      result.retained.push_back(std::move(entry));
    }
  }
  if (result.dropped_hard > 0) {
    log_debug("filter: dropped " + std::to_string(result.dropped_hard) +
              " too-hard or unvisited states");
  }
  region.current = result.retained;
  return result;
}

std::vector<std::pair<StateVec, std::vector<ActionVec>>> brownian_rollout(
    Env& env, const StateVec& start, double sigma, int horizon, Rng& rng) {
  std::vector<std::pair<StateVec, std::vector<ActionVec>>> visited;
  env.clear_goal();
  env.set_state(start);
  std::vector<ActionVec> chain;
  for (int h = 0; h < horizon; ++h) {
    ActionVec a(env.spec().action_dim);
    for (double& ai : a) ai = rng.normal(0.0, sigma);
    const StepOutcome out = env.step(a);
    chain.push_back(a);
    visited.emplace_back(out.next_state, chain);
    if (out.done) break;
  }
  return visited;
}

namespace {

struct PoolState {
  StateVec state;
  std::optional<size_t> parent;
  std::vector<ActionVec> actions;
};

bool near_any(const std::vector<PoolState>& pool, const StateVec& s,
              double radius) {
  const double r2 = radius * radius;
  for (const auto& p : pool) {
    if (squared_distance(p.state, s) <= r2) return true;
  }
  return false;
}

// k distinct uniform indices out of n (partial Fisher-Yates).
std::vector<size_t> draw_without_replacement(size_t n, size_t k, Rng& rng) {
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + rng.uniform_index(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace

size_t resample_states(ReachabilityRegion& region, double sigma,
                       const SamplerConfig& cfg, Env& env, Rng& rng) {
  if (region.archive.empty()) {
    throw StateError("resample_states: archive is empty");
  }

  // Stage 1: grow the oversampled pool. Roots are the filtered current
  // entries (already archived by this point); with nothing retained, fall
  // back to the archive.
  std::vector<PoolState> pool;
  auto add_root = [&](const RegionEntry& e) {
    if (cfg.merge_radius > 0.0 && near_any(pool, e.state, cfg.merge_radius)) return;
    pool.push_back({e.state, e.archive_index, {}});
  };
  if (!region.current.empty()) {
    for (const auto& e : region.current) add_root(e);
  } else {
    for (const auto& e : region.archive) add_root(e);
  }

  const size_t pool_target =
      static_cast<size_t>(cfg.oversample_factor) * static_cast<size_t>(cfg.n_new);
  const size_t rollout_budget =
      static_cast<size_t>(cfg.rollout_budget_factor) * static_cast<size_t>(cfg.n_new);
  size_t rollouts_done = 0;
  while (pool.size() < pool_target && rollouts_done < rollout_budget) {
    const PoolState& origin = pool[rng.uniform_index(pool.size())];
    // Copy before the pool reallocates underneath us.
    const std::optional<size_t> parent = origin.parent;
    const std::vector<ActionVec> prefix = origin.actions;
    const StateVec start = origin.state;
    ++rollouts_done;

    std::vector<std::pair<StateVec, std::vector<ActionVec>>> visited;
    try {
      visited = brownian_rollout(env, start, sigma, cfg.brownian_horizon, rng);
    } catch (const StateError& e) {
      log_error(std::string("resample: skipping rejected start state: ") + e.what());
      continue;
    }
    for (auto& [state, chain] : visited) {
      if (cfg.merge_radius > 0.0 && near_any(pool, state, cfg.merge_radius)) continue;
      std::vector<ActionVec> full = prefix;
      full.insert(full.end(), chain.begin(), chain.end());
      pool.push_back({std::move(state), parent, std::move(full)});
      if (pool.size() >= pool_target) break;
    }
  }

  const size_t take_new = std::min(pool.size(), static_cast<size_t>(cfg.n_new));
  if (take_new < static_cast<size_t>(cfg.n_new)) {
    log_error("resample: region starvation, pool has " +
              std::to_string(pool.size()) + " states, wanted " +
              std::to_string(cfg.n_new));
  }

  // Stage 2: uniform draws without replacement from pool and archive.
  std::vector<RegionEntry> fresh;
  fresh.reserve(take_new + static_cast<size_t>(cfg.n_old));
  for (size_t i : draw_without_replacement(pool.size(), take_new, rng)) {
    RegionEntry e;
    e.state = pool[i].state;
    e.goal = env.state_to_goal(pool[i].state);
    e.parent = pool[i].parent;
    e.actions = pool[i].actions;
    if (pool[i].actions.empty()) e.archive_index = pool[i].parent;  // a root
    fresh.push_back(std::move(e));
  }
  const size_t take_old =
      std::min(region.archive.size(), static_cast<size_t>(cfg.n_old));
  for (size_t i : draw_without_replacement(region.archive.size(), take_old, rng)) {
    RegionEntry e = region.archive[i];
    e.history = RewardHistory{};  // per-period statistics start fresh
    fresh.push_back(std::move(e));
  }

  region.current = std::move(fresh);
  return region.current.size();
}

}  // namespace rg
