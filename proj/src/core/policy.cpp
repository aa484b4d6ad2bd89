#include "core/policy.hpp"

#include <cmath>
#include <cstring>

#include "core/error.hpp"

namespace rg {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatMap = Eigen::Map<const RowMat>;
using MatMap = Eigen::Map<RowMat>;

double activate(double x, bool relu) { return relu ? (x > 0.0 ? x : 0.0) : std::tanh(x); }
}  // namespace

std::vector<int> MlpArch::layer_sizes() const {
  std::vector<int> sizes;
  sizes.push_back(input);
  for (int h : hidden) sizes.push_back(h);
  sizes.push_back(output);
  return sizes;
}

int MlpArch::param_count() const {
  const auto sizes = layer_sizes();
  int n = 0;
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    n += sizes[l + 1] * sizes[l] + sizes[l + 1];
  }
  return n;
}

Eigen::VectorXd mlp_forward(const MlpArch& arch, const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& x, MlpTape* tape) {
  const auto sizes = arch.layer_sizes();
  const bool relu = arch.activation == "relu";
  if (tape != nullptr) {
    tape->acts.clear();
    tape->acts.push_back(x);
  }
  Eigen::VectorXd h = x;
  int offset = 0;
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int rows = sizes[l + 1], cols = sizes[l];
    ConstMatMap w(theta.data() + offset, rows, cols);
    offset += rows * cols;
    Eigen::Map<const Eigen::VectorXd> b(theta.data() + offset, rows);
    offset += rows;
    Eigen::VectorXd z = w * h + b;
    const bool last = l + 2 == sizes.size();
    if (!last) {
      for (int i = 0; i < z.size(); ++i) z[i] = activate(z[i], relu);
    }
    h = std::move(z);
    if (tape != nullptr) tape->acts.push_back(h);
  }
  return h;
}

void mlp_backward(const MlpArch& arch, const Eigen::VectorXd& theta,
                  const MlpTape& tape, const Eigen::VectorXd& dLdy,
                  Eigen::VectorXd& grad) {
  const auto sizes = arch.layer_sizes();
  const bool relu = arch.activation == "relu";
  const size_t layers = sizes.size() - 1;

  // Parameter offsets per layer.
  std::vector<int> offsets(layers);
  int offset = 0;
  for (size_t l = 0; l < layers; ++l) {
    offsets[l] = offset;
    offset += sizes[l + 1] * sizes[l] + sizes[l + 1];
  }

  Eigen::VectorXd delta = dLdy;  // dL/d(pre-activation) of the current layer
  for (size_t l = layers; l-- > 0;) {
    const int rows = sizes[l + 1], cols = sizes[l];
    const bool last = l + 1 == layers;
    if (!last) {
      // Activation derivative at this layer's output.
      const Eigen::VectorXd& a = tape.acts[l + 1];
      for (int i = 0; i < rows; ++i) {
        delta[i] *= relu ? (a[i] > 0.0 ? 1.0 : 0.0) : 1.0 - a[i] * a[i];
      }
    }
    ConstMatMap w(theta.data() + offsets[l], rows, cols);
    MatMap gw(grad.data() + offsets[l], rows, cols);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + offsets[l] + rows * cols, rows);
    gw.noalias() += delta * tape.acts[l].transpose();
    gb += delta;
    if (l > 0) delta = w.transpose() * delta;
  }
}

Eigen::VectorXd mlp_init(const MlpArch& arch, Rng& rng, double final_layer_scale) {
  const auto sizes = arch.layer_sizes();
  Eigen::VectorXd theta(arch.param_count());
  int offset = 0;
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int rows = sizes[l + 1], cols = sizes[l];
    const bool last = l + 2 == sizes.size();
    const double limit =
        std::sqrt(6.0 / (rows + cols)) * (last ? final_layer_scale : 1.0);
    for (int i = 0; i < rows * cols; ++i) {
      theta[offset + i] = rng.uniform(-limit, limit);
    }
    offset += rows * cols;
    for (int i = 0; i < rows; ++i) theta[offset + i] = 0.0;
    offset += rows;
  }
  return theta;
}

PolicyParams make_policy(int state_dim, int goal_dim, int action_dim,
                         const std::vector<int>& hidden, double init_log_std,
                         Rng& rng) {
  PolicyParams p;
  p.arch.input = state_dim + goal_dim;
  p.arch.output = action_dim;
  p.arch.hidden = hidden;
  p.theta = mlp_init(p.arch, rng);
  p.log_std = Eigen::VectorXd::Constant(action_dim, init_log_std);
  return p;
}

ValueParams make_value(int state_dim, int goal_dim, const std::vector<int>& hidden,
                       Rng& rng) {
  ValueParams v;
  v.arch.input = state_dim + goal_dim;
  v.arch.output = 1;
  v.arch.hidden = hidden;
  v.theta = mlp_init(v.arch, rng, 1.0);
  return v;
}

Eigen::VectorXd policy_input(const StateVec& s, const GoalVec& g) {
  Eigen::VectorXd x(s.size() + g.size());
  for (size_t i = 0; i < s.size(); ++i) x[static_cast<int>(i)] = s[i];
  for (size_t i = 0; i < g.size(); ++i) x[static_cast<int>(s.size() + i)] = g[i];
  return x;
}

Eigen::VectorXd policy_mean(const PolicyParams& p, const Eigen::VectorXd& input) {
  Eigen::VectorXd mean = mlp_forward(p.arch, p.theta, input);
  if (!mean.allFinite()) {
    throw DivergenceError("policy network produced non-finite output");
  }
  return mean;
}

ActionVec policy_act(const PolicyParams& p, const StateVec& s, const GoalVec& g,
                     Rng& rng, bool deterministic) {
  const Eigen::VectorXd mean = policy_mean(p, policy_input(s, g));
  ActionVec a(mean.size());
  for (int i = 0; i < mean.size(); ++i) {
    a[i] = deterministic ? mean[i]
                         : mean[i] + std::exp(p.log_std[i]) * rng.normal();
  }
  return a;
}

double value_predict(const ValueParams& v, const StateVec& s, const GoalVec& g) {
  const Eigen::VectorXd out = mlp_forward(v.arch, v.theta, policy_input(s, g));
  if (!std::isfinite(out[0])) {
    throw DivergenceError("value network produced non-finite output");
  }
  return out[0];
}

double gaussian_log_prob(const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std,
                         const Eigen::VectorXd& action) {
  double lp = 0.0;
  for (int i = 0; i < mean.size(); ++i) {
    const double z = (action[i] - mean[i]) / std::exp(log_std[i]);
    lp += -0.5 * z * z - log_std[i] - 0.5 * kLog2Pi;
  }
  return lp;
}

uint64_t params_fingerprint(const PolicyParams& p) {
  uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix = [&h](const double* data, size_t n) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  mix(p.theta.data(), static_cast<size_t>(p.theta.size()));
  mix(p.log_std.data(), static_cast<size_t>(p.log_std.size()));
  return h;
}

}  // namespace rg
