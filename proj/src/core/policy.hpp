#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace rg {

// Feed-forward network shape; parameters live in a flat vector packed as
// [W0, b0, W1, b1, ...] with row-major weight blocks.
struct MlpArch {
  int input = 0;
  int output = 0;
  std::vector<int> hidden;
  std::string activation = "tanh";  // tanh | relu

  std::vector<int> layer_sizes() const;
  int param_count() const;
  bool operator==(const MlpArch&) const = default;
};

struct MlpTape {
  std::vector<Eigen::VectorXd> acts;  // activations per layer, acts[0] = input
};

Eigen::VectorXd mlp_forward(const MlpArch& arch, const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& x, MlpTape* tape = nullptr);

// Accumulates dL/dtheta into grad given dL/d(output); requires the tape from
// the corresponding forward pass.
void mlp_backward(const MlpArch& arch, const Eigen::VectorXd& theta,
                  const MlpTape& tape, const Eigen::VectorXd& dLdy,
                  Eigen::VectorXd& grad);

// Xavier-uniform init with the final layer scaled down so initial outputs
// stay near zero.
Eigen::VectorXd mlp_init(const MlpArch& arch, Rng& rng,
                         double final_layer_scale = 0.01);

// Goal-conditioned Gaussian policy: the mean network consumes (state, goal)
// and log standard deviations are state-independent learned parameters.
struct PolicyParams {
  MlpArch arch;  // arch.input = state_dim + goal_dim, arch.output = action_dim
  Eigen::VectorXd theta;
  Eigen::VectorXd log_std;
};

struct ValueParams {
  MlpArch arch;  // arch.output = 1
  Eigen::VectorXd theta;
};

PolicyParams make_policy(int state_dim, int goal_dim, int action_dim,
                         const std::vector<int>& hidden, double init_log_std,
                         Rng& rng);
ValueParams make_value(int state_dim, int goal_dim,
                       const std::vector<int>& hidden, Rng& rng);

Eigen::VectorXd policy_input(const StateVec& s, const GoalVec& g);

// Mean action of the policy; throws DivergenceError on non-finite output.
Eigen::VectorXd policy_mean(const PolicyParams& p, const Eigen::VectorXd& input);

// Stochastic mode adds N(0, exp(log_std)^2) noise per dimension.
ActionVec policy_act(const PolicyParams& p, const StateVec& s, const GoalVec& g,
                     Rng& rng, bool deterministic);

double value_predict(const ValueParams& v, const StateVec& s, const GoalVec& g);

double gaussian_log_prob(const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std,
                         const Eigen::VectorXd& action);

// Order-sensitive hash of the trainable parameters, used to assert the
// on-policy contract between rollout collection and the update.
uint64_t params_fingerprint(const PolicyParams& p);

}  // namespace rg
