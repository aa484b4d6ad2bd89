#include "core/env.hpp"

#include <cmath>

#include "core/error.hpp"

namespace rg {

void Env::set_state(const StateVec& s) {
  validate_state(s);
  state_ = s;
  steps_taken_ = 0;
  has_state_ = true;
  done_ = false;
}

void Env::check_goal_dim(const GoalVec& g) const {
  if (static_cast<int>(g.size()) != spec().goal_dim) {
    throw DimensionError(name() + ": goal has dimension " +
                         std::to_string(g.size()) + ", expected " +
                         std::to_string(spec().goal_dim));
  }
  if (!all_finite(g)) throw StateError(name() + ": goal has non-finite entries");
}

void Env::set_goal(const GoalVec& g) {
  check_goal_dim(g);
  goal_ = g;
}

void Env::clear_goal() { goal_.reset(); }

const StateVec& Env::observe() const {
  if (!has_state_) throw StateError(name() + ": observe before set_state");
  return state_;
}

StepOutcome Env::step(const ActionVec& a) {
  if (!has_state_) throw StateError(name() + ": step before set_state");
  if (done_) {
    throw StateError(name() + ": step after episode end; call set_state to reset");
  }
  const EnvSpec& sp = spec();
  if (static_cast<int>(a.size()) != sp.action_dim) {
    throw DimensionError(name() + ": action has dimension " +
                         std::to_string(a.size()) + ", expected " +
                         std::to_string(sp.action_dim));
  }
  if (!all_finite(a)) throw StateError(name() + ": action has non-finite entries");

  ActionVec clipped(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    clipped[i] = clip(a[i], sp.action_low[i], sp.action_high[i]);
  }

  StepOutcome out;
  out.next_state = advance(state_, clipped);
  ++steps_taken_;
  out.success = goal_.has_value() && is_success(out.next_state, *goal_);
  out.done = out.success || steps_taken_ >= sp.horizon;
  out.reward = sp.step_penalty + (out.success ? 1.0 : 0.0);

  state_ = out.next_state;
  done_ = out.done;
  return out;
}

std::pair<StateVec, GoalVec> Env::sample_eval_pair(Rng& rng) const {
  StateVec start = sample_uniform_state(rng);
  StateVec other = sample_uniform_state(rng);
  return {std::move(start), state_to_goal(other)};
}

}  // namespace rg
