#pragma once

#include "core/env.hpp"

namespace rg {

// 1-d test world with analytically tractable dynamics:
//   x' = clip(x + clip(a, -max_step, +max_step), x_min, x_max)
// Success when |x - g| <= epsilon. Used as the oracle environment for
// brute-force checks.
struct LineWorldConfig {
  double x_min = -1.0;
  double x_max = 1.0;
  double max_step = 0.1;
  double epsilon = 0.05;
  double step_penalty = -0.01;
  int horizon = 60;
};

class LineWorld final : public Env {
 public:
  explicit LineWorld(const LineWorldConfig& cfg = {});

  const EnvSpec& spec() const override { return spec_; }
  std::string name() const override { return "lineworld"; }
  std::unique_ptr<Env> clone() const override {
    return std::make_unique<LineWorld>(*this);
  }

  GoalVec state_to_goal(const StateVec& s) const override;
  bool is_success(const StateVec& s, const GoalVec& g) const override;
  void validate_state(const StateVec& s) const override;
  StateVec sample_uniform_state(Rng& rng) const override;
  StateVec default_seed_state() const override { return {0.0}; }

  const LineWorldConfig& config() const { return cfg_; }

 protected:
  StateVec advance(const StateVec& s, const ActionVec& a) const override;

 private:
  LineWorldConfig cfg_;
  EnvSpec spec_;
};

}  // namespace rg
