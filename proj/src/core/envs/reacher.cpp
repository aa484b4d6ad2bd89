#include "core/envs/reacher.hpp"

#include <cmath>

#include "core/error.hpp"

namespace rg {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

Reacher::Reacher(const ReacherConfig& cfg) : cfg_(cfg) {
  if (!(cfg_.l1 > 0.0 && cfg_.l2 > 0.0)) {
    throw ConfigError("reacher: link lengths must be positive");
  }
  if (!(cfg_.dt > 0.0)) throw ConfigError("reacher: dt must be positive");
  if (!(cfg_.epsilon_pos > 0.0)) {
    throw ConfigError("reacher: epsilon_pos must be positive");
  }
  if (!(cfg_.v_max > 0.0)) throw ConfigError("reacher: v_max must be positive");
  if (!(cfg_.torque_limit > 0.0)) {
    throw ConfigError("reacher: torque_limit must be positive");
  }
  if (cfg_.damping < 0.0) throw ConfigError("reacher: damping must be >= 0");
  if (cfg_.horizon < 1) throw ConfigError("reacher: horizon must be >= 1");
  if (cfg_.step_penalty > 0.0) {
    throw ConfigError("reacher: step_penalty must be <= 0");
  }
  spec_.state_dim = 4;
  spec_.goal_dim = 2;
  spec_.action_dim = 2;
  spec_.action_low = {-cfg_.torque_limit, -cfg_.torque_limit};
  spec_.action_high = {cfg_.torque_limit, cfg_.torque_limit};
  spec_.horizon = cfg_.horizon;
  spec_.step_penalty = cfg_.step_penalty;
}

std::array<double, 2> Reacher::forward_kinematics(double th1, double th2) const {
  const double x = cfg_.l1 * std::cos(th1) + cfg_.l2 * std::cos(th1 + th2);
  const double y = cfg_.l1 * std::sin(th1) + cfg_.l2 * std::sin(th1 + th2);
  return {x, y};
}

std::array<double, 2> Reacher::tip_velocity(double th1, double th2, double w1,
                                            double w2) const {
  // Jacobian of the forward kinematics times joint velocities.
  const double s1 = std::sin(th1), c1 = std::cos(th1);
  const double s12 = std::sin(th1 + th2), c12 = std::cos(th1 + th2);
  const double vx = -cfg_.l1 * s1 * w1 - cfg_.l2 * s12 * (w1 + w2);
  const double vy = cfg_.l1 * c1 * w1 + cfg_.l2 * c12 * (w1 + w2);
  return {vx, vy};
}

StateVec Reacher::advance(const StateVec& s, const ActionVec& a) const {
  const double w1 = s[2] + cfg_.dt * (a[0] - cfg_.damping * s[2]);
  const double w2 = s[3] + cfg_.dt * (a[1] - cfg_.damping * s[3]);
  const double th1 = wrap_angle(s[0] + cfg_.dt * w1);
  const double th2 = wrap_angle(s[1] + cfg_.dt * w2);
  return {th1, th2, w1, w2};
}

GoalVec Reacher::state_to_goal(const StateVec& s) const {
  validate_state(s);
  const auto p = forward_kinematics(s[0], s[1]);
  return {p[0], p[1]};
}

bool Reacher::is_success(const StateVec& s, const GoalVec& g) const {
  const auto p = forward_kinematics(s[0], s[1]);
  const double dx = p[0] - g[0], dy = p[1] - g[1];
  if (dx * dx + dy * dy > cfg_.epsilon_pos * cfg_.epsilon_pos) return false;
  const auto v = tip_velocity(s[0], s[1], s[2], s[3]);
  return v[0] * v[0] + v[1] * v[1] <= cfg_.v_max * cfg_.v_max;
}

void Reacher::validate_state(const StateVec& s) const {
  if (s.size() != 4) {
    throw DimensionError("reacher: state has dimension " +
                         std::to_string(s.size()) + ", expected 4");
  }
  if (!all_finite(s)) throw StateError("reacher: non-finite state");
  for (int i = 0; i < 2; ++i) {
    if (s[i] <= -kPi || s[i] > kPi) {
      throw StateError("reacher: joint angle " + std::to_string(s[i]) +
                       " outside (-pi, pi]");
    }
  }
  for (int i = 2; i < 4; ++i) {
    if (std::abs(s[i]) > cfg_.omega_limit) {
      throw StateError("reacher: joint velocity " + std::to_string(s[i]) +
                       " exceeds limit " + std::to_string(cfg_.omega_limit));
    }
  }
}

StateVec Reacher::sample_uniform_state(Rng& rng) const {
  const double th1 = wrap_angle(rng.uniform(-kPi, kPi));
  const double th2 = wrap_angle(rng.uniform(-kPi, kPi));
  return {th1, th2, 0.0, 0.0};
}

}  // namespace rg
