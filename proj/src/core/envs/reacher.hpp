#pragma once

#include <array>

#include "core/env.hpp"

namespace rg {

// Two-link planar arm with per-joint damped double-integrator dynamics,
// semi-implicit Euler:
//   w' = w + dt * (torque - damping * w)
//   th' = wrap(th + dt * w')
// State (th1, th2, w1, w2), angles in (-pi, pi]. The goal is an end-effector
// position; success requires being within epsilon_pos of it with Cartesian
// tip speed at most v_max.
struct ReacherConfig {
  double l1 = 0.1;            // m
  double l2 = 0.1;            // m
  double dt = 0.02;           // s
  double damping = 0.25;
  double torque_limit = 1.0;
  double epsilon_pos = 0.02;  // m
  double v_max = 0.2;         // m/s
  double omega_limit = 6.0;   // rad/s bound accepted by set_state
  double step_penalty = -0.01;
  int horizon = 50;
};

class Reacher final : public Env {
 public:
  explicit Reacher(const ReacherConfig& cfg = {});

  const EnvSpec& spec() const override { return spec_; }
  std::string name() const override { return "reacher"; }
  std::unique_ptr<Env> clone() const override {
    return std::make_unique<Reacher>(*this);
  }

  GoalVec state_to_goal(const StateVec& s) const override;
  bool is_success(const StateVec& s, const GoalVec& g) const override;
  void validate_state(const StateVec& s) const override;
  StateVec sample_uniform_state(Rng& rng) const override;
  StateVec default_seed_state() const override { return {0.0, 0.0, 0.0, 0.0}; }

  // End-effector position from joint angles.
  std::array<double, 2> forward_kinematics(double th1, double th2) const;
  // Cartesian tip velocity from angles and joint velocities.
  std::array<double, 2> tip_velocity(double th1, double th2, double w1,
                                     double w2) const;

  const ReacherConfig& config() const { return cfg_; }

 protected:
  StateVec advance(const StateVec& s, const ActionVec& a) const override;

 private:
  ReacherConfig cfg_;
  EnvSpec spec_;
};

double wrap_angle(double a);  // to (-pi, pi]

}  // namespace rg
