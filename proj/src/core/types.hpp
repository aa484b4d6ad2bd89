#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rg {

// Fixed-dimension real vectors; dimensions are set by the environment spec.
using StateVec = std::vector<double>;
using GoalVec = std::vector<double>;
using ActionVec = std::vector<double>;

struct EnvSpec {
  int state_dim = 0;
  int goal_dim = 0;
  int action_dim = 0;
  ActionVec action_low;
  ActionVec action_high;
  int horizon = 0;            // max steps per episode
  double step_penalty = 0.0;  // <= 0, added to every step reward
};

struct StepOutcome {
  StateVec next_state;
  double reward = 0.0;
  bool success = false;
  bool done = false;
};

struct TrajectoryStep {
  StateVec state;    // state the action was taken from
  ActionVec action;  // as emitted by the policy (the env clips internally)
  double reward = 0.0;
};

struct Trajectory {
  StateVec start;
  GoalVec goal;
  std::vector<TrajectoryStep> steps;
  bool success = false;
  size_t length() const { return steps.size(); }
};

inline bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

inline double clip(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

inline double squared_distance(const std::vector<double>& a,
                               const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace rg
