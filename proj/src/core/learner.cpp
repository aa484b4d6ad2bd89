#include "core/learner.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/log.hpp"

namespace rg {

void LearnerConfig::validate() const {
  if (!(p_new >= 0.0 && p_new <= 1.0)) {
    throw ConfigError("learner: p_new must be in [0, 1]");
  }
  if (episodes_per_iteration < 1) {
    throw ConfigError("learner: episodes_per_iteration must be >= 1");
  }
  if (!(discount > 0.0 && discount <= 1.0)) {
    throw ConfigError("learner: discount must be in (0, 1]");
  }
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) {
    throw ConfigError("learner: gae_lambda must be in [0, 1]");
  }
  if (learning_rate < 0.0) throw ConfigError("learner: learning_rate must be >= 0");
  if (!(clip_ratio > 0.0)) throw ConfigError("learner: clip_ratio must be > 0");
  if (epochs < 1) throw ConfigError("learner: epochs must be >= 1");
  if (minibatch_size < 1) throw ConfigError("learner: minibatch_size must be >= 1");
  if (hidden_widths.empty()) throw ConfigError("learner: hidden_widths must be non-empty");
  for (int w : hidden_widths) {
    if (w < 1) throw ConfigError("learner: hidden widths must be positive");
  }
  if (start_goal_retries < 0) {
    throw ConfigError("learner: start_goal_retries must be >= 0");
  }
}

StartGoal sample_start_goal(const ReachabilityRegion& region, const Env& env,
                            double p_new, int max_retries, Rng& rng) {
  if (region.current.empty() || region.archive.empty()) {
    throw StateError("sample_start_goal: region has no states");
  }
  StartGoal sg;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    sg.entry_index = rng.uniform_index(region.current.size());
    if (rng.uniform() < p_new) {
      sg.source = GoalSource::Current;
      sg.goal = region.current[rng.uniform_index(region.current.size())].goal;
    } else {
      sg.source = GoalSource::Archive;
      sg.goal = region.archive[rng.uniform_index(region.archive.size())].goal;
    }
    if (!env.is_success(region.current[sg.entry_index].state, sg.goal)) {
      return sg;
    }
  }
  sg.degenerate = true;
  log_debug("sample_start_goal: retries exhausted, region is degenerate");
  return sg;
}

namespace {

Trajectory run_episode(const PolicyParams& params, Env& env, const StateVec& start,
                       const GoalVec& goal, Rng& rng) {
  Trajectory traj;
  traj.start = start;
  traj.goal = goal;
  env.set_state(start);
  env.set_goal(goal);
  StateVec state = start;
  while (true) {
    TrajectoryStep step;
    step.state = state;
    step.action = policy_act(params, state, goal, rng, false);
    const StepOutcome out = env.step(step.action);
    step.reward = out.reward;
    traj.steps.push_back(std::move(step));
    state = out.next_state;
    if (out.done) {
      traj.success = out.success;
      break;
    }
  }
  return traj;
}

void finalize_batch(RolloutBatch& batch) {
  size_t successes = 0, steps = 0;
  for (const auto& ep : batch.episodes) {
    successes += ep.traj.success ? 1 : 0;
    steps += ep.traj.length();
  }
  const double n = static_cast<double>(batch.episodes.size());
  batch.r_avg = successes / n;
  batch.mean_episode_length = steps / n;
}

}  // namespace

RolloutBatch collect_rollouts(const PolicyParams& params, Env& env,
                              ReachabilityRegion& region, const LearnerConfig& cfg,
                              int history_capacity, Rng& rng) {
  RolloutBatch batch;
  batch.fingerprint = params_fingerprint(params);
  for (int e = 0; e < cfg.episodes_per_iteration; ++e) {
    const StartGoal sg =
        sample_start_goal(region, env, cfg.p_new, cfg.start_goal_retries, rng);
    EpisodeRecord rec;
    rec.start_entry = static_cast<int>(sg.entry_index);
    rec.source = sg.source;
    rec.traj = run_episode(params, env, region.current[sg.entry_index].state,
                           sg.goal, rng);
    record_outcome(region, sg.entry_index, rec.traj.success, history_capacity);
    batch.episodes.push_back(std::move(rec));
  }
  finalize_batch(batch);
  return batch;
}

RolloutBatch collect_rollouts_uniform(const PolicyParams& params, Env& env,
                                      const LearnerConfig& cfg, Rng& rng) {
  RolloutBatch batch;
  batch.fingerprint = params_fingerprint(params);
  for (int e = 0; e < cfg.episodes_per_iteration; ++e) {
    const auto [start, goal] = env.sample_eval_pair(rng);
    EpisodeRecord rec;
    rec.traj = run_episode(params, env, start, goal, rng);
    batch.episodes.push_back(std::move(rec));
  }
  finalize_batch(batch);
  return batch;
}

StepData compute_advantages(const RolloutBatch& batch, double gamma, double lambda,
                            const ValueFn& value_fn) {
  StepData data;
  for (const auto& ep : batch.episodes) {
    const auto& steps = ep.traj.steps;
    const size_t n = steps.size();
    if (n == 0) continue;
    std::vector<double> values(n);
    for (size_t t = 0; t < n; ++t) {
      values[t] = value_fn(steps[t].state, ep.traj.goal);
    }
    // Terminal bootstrap is zero: episodes end at success or the horizon.
    std::vector<double> adv(n), ret(n);
    double gae = 0.0, running_return = 0.0;
    for (size_t t = n; t-- > 0;) {
      const double next_value = t + 1 < n ? values[t + 1] : 0.0;
      const double delta = steps[t].reward + gamma * next_value - values[t];
      gae = delta + gamma * lambda * gae;
      running_return = steps[t].reward + gamma * running_return;
      adv[t] = gae;
      ret[t] = running_return;
    }
    for (size_t t = 0; t < n; ++t) {
      data.inputs.push_back(policy_input(steps[t].state, ep.traj.goal));
      Eigen::VectorXd a(steps[t].action.size());
      for (size_t i = 0; i < steps[t].action.size(); ++i) a[i] = steps[t].action[i];
      data.actions.push_back(std::move(a));
      data.advantages.push_back(adv[t]);
      data.returns.push_back(ret[t]);
    }
  }
  return data;
}

double clipped_surrogate_loss(const PolicyParams& p, const StepData& data,
                              const std::vector<size_t>& idx, double clip_ratio) {
  double loss = 0.0;
  for (size_t i : idx) {
    const Eigen::VectorXd mean = mlp_forward(p.arch, p.theta, data.inputs[i]);
    const double logp = gaussian_log_prob(mean, p.log_std, data.actions[i]);
    const double ratio = std::exp(logp - data.old_logp[i]);
    const double a = data.advantages[i];
    const double unclipped = ratio * a;
    const double clipped = clip(ratio, 1.0 - clip_ratio, 1.0 + clip_ratio) * a;
    loss -= std::min(unclipped, clipped);
  }
  return loss / static_cast<double>(idx.size());
}

Eigen::VectorXd clipped_surrogate_grad(const PolicyParams& p, const StepData& data,
                                       const std::vector<size_t>& idx,
                                       double clip_ratio) {
  Eigen::VectorXd grad =
      Eigen::VectorXd::Zero(p.theta.size() + p.log_std.size());
  Eigen::VectorXd theta_grad = Eigen::VectorXd::Zero(p.theta.size());
  Eigen::VectorXd logstd_grad = Eigen::VectorXd::Zero(p.log_std.size());
  const double scale = 1.0 / static_cast<double>(idx.size());
  MlpTape tape;
  for (size_t i : idx) {
    const Eigen::VectorXd mean = mlp_forward(p.arch, p.theta, data.inputs[i], &tape);
    const double logp = gaussian_log_prob(mean, p.log_std, data.actions[i]);
    const double ratio = std::exp(logp - data.old_logp[i]);
    const double a = data.advantages[i];
    // Gradient flows only through the active min() branch; outside the clip
    // band with the clipped branch active the derivative is zero.
    const bool pass = a >= 0.0 ? ratio <= 1.0 + clip_ratio
                               : ratio >= 1.0 - clip_ratio;
    if (!pass) continue;
    const double dL_dlogp = -scale * ratio * a;  // d(-ratio*a)/dlogp
    Eigen::VectorXd dlogp_dmean(mean.size());
    for (int k = 0; k < mean.size(); ++k) {
      const double sd = std::exp(p.log_std[k]);
      const double z = (data.actions[i][k] - mean[k]) / sd;
      dlogp_dmean[k] = z / sd;
      logstd_grad[k] += dL_dlogp * (z * z - 1.0);
    }
    mlp_backward(p.arch, p.theta, tape, dL_dlogp * dlogp_dmean, theta_grad);
  }
  grad.head(p.theta.size()) = theta_grad;
  grad.tail(p.log_std.size()) = logstd_grad;
  return grad;
}

double value_mse_loss(const ValueParams& v, const StepData& data,
                      const std::vector<size_t>& idx) {
  double loss = 0.0;
  for (size_t i : idx) {
    const Eigen::VectorXd out = mlp_forward(v.arch, v.theta, data.inputs[i]);
    const double d = out[0] - data.returns[i];
    loss += d * d;
  }
  return loss / static_cast<double>(idx.size());
}

Eigen::VectorXd value_mse_grad(const ValueParams& v, const StepData& data,
                               const std::vector<size_t>& idx) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(v.theta.size());
  const double scale = 2.0 / static_cast<double>(idx.size());
  MlpTape tape;
  Eigen::VectorXd dLdy(1);
  for (size_t i : idx) {
    const Eigen::VectorXd out = mlp_forward(v.arch, v.theta, data.inputs[i], &tape);
    dLdy[0] = scale * (out[0] - data.returns[i]);
    mlp_backward(v.arch, v.theta, tape, dLdy, grad);
  }
  return grad;
}

void ClippedSurrogateUpdater::Adam::step(Eigen::VectorXd& x,
                                         const Eigen::VectorXd& g, double lr) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  if (m.size() != g.size()) {
    m = Eigen::VectorXd::Zero(g.size());
    v = Eigen::VectorXd::Zero(g.size());
    t = 0;
  }
  ++t;
  m = b1 * m + (1.0 - b1) * g;
  v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
  const double correction =
      std::sqrt(1.0 - std::pow(b2, t)) / (1.0 - std::pow(b1, t));
  x -= lr * correction * (m.array() / (v.array().sqrt() + eps)).matrix();
}

ClippedSurrogateUpdater::ClippedSurrogateUpdater(const LearnerConfig& cfg)
    : cfg_(cfg) {}

UpdateResult ClippedSurrogateUpdater::update(PolicyParams& params,
                                             ValueParams& value,
                                             const RolloutBatch& batch, Rng& rng) {
  if (batch.fingerprint != params_fingerprint(params)) {
    throw std::logic_error(
        "update called with a batch collected under different parameters");
  }
  UpdateResult result;
  if (cfg_.learning_rate == 0.0) return result;  // disabled learner

  StepData data = compute_advantages(
      batch, cfg_.discount, cfg_.gae_lambda,
      [&value](const StateVec& s, const GoalVec& g) {
        return value_predict(value, s, g);
      });
  if (data.size() == 0) return result;

  // Normalize advantages per batch (guarded for near-zero variance).
  {
    double mean = 0.0;
    for (double a : data.advantages) mean += a;
    mean /= static_cast<double>(data.size());
    double var = 0.0;
    for (double a : data.advantages) var += (a - mean) * (a - mean);
    var /= static_cast<double>(data.size());
    const double sd = std::sqrt(var);
    for (double& a : data.advantages) {
      a = sd > 1e-8 ? (a - mean) / sd : a - mean;
    }
  }

  // Log-probs under the collection policy (identical to `params` by the
  // fingerprint check above).
  data.old_logp.resize(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    const Eigen::VectorXd mean = mlp_forward(params.arch, params.theta, data.inputs[i]);
    data.old_logp[i] = gaussian_log_prob(mean, params.log_std, data.actions[i]);
  }

  const PolicyParams params_backup = params;
  const ValueParams value_backup = value;

  std::vector<size_t> order(data.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  const size_t mb = std::min<size_t>(cfg_.minibatch_size, data.size());

  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    for (size_t begin = 0; begin < order.size(); begin += mb) {
      const size_t end = std::min(begin + mb, order.size());
      const std::vector<size_t> idx(order.begin() + begin, order.begin() + end);

      const double ploss = clipped_surrogate_loss(params, data, idx, cfg_.clip_ratio);
      const double vloss = value_mse_loss(value, data, idx);
      if (!std::isfinite(ploss) || !std::isfinite(vloss)) {
        params = params_backup;
        value = value_backup;
        result.diverged = true;
        log_error("update aborted: non-finite loss");
        return result;
      }
      result.policy_loss = ploss;
      result.value_loss = vloss;

      const Eigen::VectorXd pgrad =
          clipped_surrogate_grad(params, data, idx, cfg_.clip_ratio);
      Eigen::VectorXd joint(params.theta.size() + params.log_std.size());
      joint.head(params.theta.size()) = params.theta;
      joint.tail(params.log_std.size()) = params.log_std;
      policy_adam_.step(joint, pgrad, cfg_.learning_rate);
      params.theta = joint.head(params.theta.size());
      params.log_std = joint.tail(params.log_std.size());

      const Eigen::VectorXd vgrad = value_mse_grad(value, data, idx);
      value_adam_.step(value.theta, vgrad, cfg_.learning_rate);
    }
  }
  return result;
}

}  // namespace rg
