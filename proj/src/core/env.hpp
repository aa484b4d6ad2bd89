#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace rg {

// Goal-conditioned MDP contract. An episode is set_state + set_goal followed
// by step calls until the outcome reports done. Dynamics are deterministic;
// randomness enters only through the actions fed in. Instances are cheap
// values: clone() hands each rollout worker its own copy.
class Env {
 public:
  virtual ~Env() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<Env> clone() const = 0;

  // Resets the episode clock to step 0 and places the agent at s.
  // Rejects out-of-bounds or wrong-dimension states.
  void set_state(const StateVec& s);

  // Goal for the current episode. Without a goal, step never reports success
  // (sampling rollouts run this way).
  void set_goal(const GoalVec& g);
  void clear_goal();

  const StateVec& observe() const;
  bool has_state() const { return has_state_; }

  // Applies the action (clipped to the action box), advances one step and
  // scores the resulting state. Stepping a finished episode is an error.
  StepOutcome step(const ActionVec& a);

  virtual GoalVec state_to_goal(const StateVec& s) const = 0;
  virtual bool is_success(const StateVec& s, const GoalVec& g) const = 0;

  // Throws StateError/DimensionError when s is not a valid state.
  virtual void validate_state(const StateVec& s) const = 0;

  // Uniform zero-velocity state over the environment's valid support.
  virtual StateVec sample_uniform_state(Rng& rng) const = 0;

  // Independent uniform draws: a start state and the goal image of another.
  std::pair<StateVec, GoalVec> sample_eval_pair(Rng& rng) const;

  virtual StateVec default_seed_state() const = 0;

 protected:
  // Pure dynamics: next state from (state, clipped action).
  virtual StateVec advance(const StateVec& s, const ActionVec& a) const = 0;

  void check_goal_dim(const GoalVec& g) const;

  StateVec state_;
  std::optional<GoalVec> goal_;
  int steps_taken_ = 0;
  bool has_state_ = false;
  bool done_ = false;
};

}  // namespace rg
