#include "core/envs/lineworld.hpp"

#include <cmath>

#include "core/error.hpp"

namespace rg {

LineWorld::LineWorld(const LineWorldConfig& cfg) : cfg_(cfg) {
  if (!(cfg_.x_min < cfg_.x_max)) {
    throw ConfigError("lineworld: x_min must be < x_max");
  }
  if (!(cfg_.max_step > 0.0)) {
    throw ConfigError("lineworld: max_step must be positive");
  }
  if (!(cfg_.epsilon > 0.0 && cfg_.epsilon < cfg_.x_max - cfg_.x_min)) {
    throw ConfigError("lineworld: epsilon must be in (0, x_max - x_min)");
  }
  if (cfg_.horizon < 1) throw ConfigError("lineworld: horizon must be >= 1");
  if (cfg_.step_penalty > 0.0) {
    throw ConfigError("lineworld: step_penalty must be <= 0");
  }
  spec_.state_dim = 1;
  spec_.goal_dim = 1;
  spec_.action_dim = 1;
  spec_.action_low = {-cfg_.max_step};
  spec_.action_high = {cfg_.max_step};
  spec_.horizon = cfg_.horizon;
  spec_.step_penalty = cfg_.step_penalty;
}

StateVec LineWorld::advance(const StateVec& s, const ActionVec& a) const {
  const double dx = clip(a[0], -cfg_.max_step, cfg_.max_step);
  return {clip(s[0] + dx, cfg_.x_min, cfg_.x_max)};
}

GoalVec LineWorld::state_to_goal(const StateVec& s) const {
  validate_state(s);
  return s;
}

bool LineWorld::is_success(const StateVec& s, const GoalVec& g) const {
  return std::abs(s[0] - g[0]) <= cfg_.epsilon;
}

void LineWorld::validate_state(const StateVec& s) const {
  if (s.size() != 1) {
    throw DimensionError("lineworld: state has dimension " +
                         std::to_string(s.size()) + ", expected 1");
  }
  if (!all_finite(s)) throw StateError("lineworld: non-finite state");
  if (s[0] < cfg_.x_min || s[0] > cfg_.x_max) {
    throw StateError("lineworld: position " + std::to_string(s[0]) +
                     " outside [" + std::to_string(cfg_.x_min) + ", " +
                     std::to_string(cfg_.x_max) + "]");
  }
}

StateVec LineWorld::sample_uniform_state(Rng& rng) const {
  return {rng.uniform(cfg_.x_min, cfg_.x_max)};
}

}  // namespace rg
