#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/envs/lineworld.hpp"
#include "core/error.hpp"
#include "core/learner.hpp"
#include "core/sampler.hpp"

using namespace rg;

namespace {

ReachabilityRegion spread_region(const Env& env, const std::vector<double>& xs) {
  ReachabilityRegion region = init_region({xs[0]}, env);
  for (size_t i = 1; i < xs.size(); ++i) {
    RegionEntry e;
    e.state = {xs[i]};
    e.goal = env.state_to_goal(e.state);
    e.parent = 0;
    region.current.push_back(e);
    e.archive_index = region.archive.size();
    region.archive.push_back(e);
  }
  return region;
}

// Synthetic step data with ratios close to 1 (safely inside the clip band,
// away from the min() kinks) for derivative checks.
StepData synthetic_data(const PolicyParams& at, int n, Rng& rng) {
  StepData data;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(at.arch.input);
    for (int k = 0; k < x.size(); ++k) x[k] = rng.uniform(-1.0, 1.0);
    Eigen::VectorXd a(at.arch.output);
    const Eigen::VectorXd mean = mlp_forward(at.arch, at.theta, x);
    for (int k = 0; k < a.size(); ++k) {
      a[k] = mean[k] + std::exp(at.log_std[k]) * rng.normal();
    }
    data.inputs.push_back(x);
    data.actions.push_back(a);
    data.advantages.push_back(rng.normal(0.0, 1.0));
    data.returns.push_back(rng.normal(0.0, 1.0));
    data.old_logp.push_back(gaussian_log_prob(mean, at.log_std, a));
  }
  return data;
}

double grad_tolerance(double a, double b) {
  return 1e-4 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("sample_start_goal degenerate probabilities and sources") {
  LineWorld env;
  ReachabilityRegion region = spread_region(env, {0.0, 0.3, -0.4, 0.7});
  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const StartGoal sg = sample_start_goal(region, env, 1.0, 20, rng);
    CHECK(sg.source == GoalSource::Current);
  }
}

TEST_CASE("sample_start_goal hits the configured goal-source frequency") {
  LineWorld env;
  // Entries far apart relative to epsilon so self-pair rejections are rare.
  ReachabilityRegion region = spread_region(env, {-0.8, -0.4, 0.0, 0.4, 0.8});
  Rng rng(2);
  const int n = 100000;
  int current = 0;
  for (int k = 0; k < n; ++k) {
    if (sample_start_goal(region, env, 0.6, 20, rng).source == GoalSource::Current) {
      ++current;
    }
  }
  CHECK(std::abs(current / static_cast<double>(n) - 0.6) < 0.01);
}

TEST_CASE("sample_start_goal flags a degenerate single-entry region") {
  LineWorld env;
  ReachabilityRegion region = init_region({0.0}, env);
  Rng rng(3);
  const StartGoal sg = sample_start_goal(region, env, 0.6, 20, rng);
  CHECK(sg.degenerate);  // the seed is always at its own goal
}

TEST_CASE("policy_act basics") {
  Rng init(4);
  PolicyParams p = make_policy(1, 1, 2, {8, 8}, std::log(0.5), init);

  PolicyParams zero = p;
  zero.theta.setZero();
  Rng rng(5);
  const ActionVec a = policy_act(zero, {0.4}, {-0.2}, rng, true);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == 0.0);

  // Vanishing noise: log_std = -20 behaves as deterministic.
  PolicyParams quiet = p;
  quiet.log_std.setConstant(-20.0);
  const ActionVec det = policy_act(quiet, {0.4}, {-0.2}, rng, true);
  const ActionVec sto = policy_act(quiet, {0.4}, {-0.2}, rng, false);
  CHECK(std::abs(det[0] - sto[0]) < 1e-6);
  CHECK(std::abs(det[1] - sto[1]) < 1e-6);

  // Identical rng state, identical actions.
  Rng r1(99), r2(99);
  CHECK(policy_act(p, {0.1}, {0.2}, r1, false) ==
        policy_act(p, {0.1}, {0.2}, r2, false));
}

TEST_CASE("policy_act rejects non-finite network output") {
  Rng init(6);
  PolicyParams p = make_policy(1, 1, 1, {4}, 0.0, init);
  p.theta[0] = std::numeric_limits<double>::quiet_NaN();
  Rng rng(7);
  CHECK_THROWS_AS(policy_act(p, {0.0}, {0.0}, rng, true), DivergenceError);
}

TEST_CASE("compute_advantages: one-step identity") {
  RolloutBatch batch;
  EpisodeRecord ep;
  ep.traj.start = {0.0};
  ep.traj.goal = {0.5};
  ep.traj.steps.push_back({{0.0}, {0.1}, 0.99});
  ep.traj.success = true;
  batch.episodes.push_back(ep);
  const auto value = [](const StateVec&, const GoalVec&) { return 0.25; };
  const StepData data = compute_advantages(batch, 0.9, 0.8, value);
  REQUIRE(data.size() == 1);
  CHECK(data.returns[0] == doctest::Approx(0.99));
  CHECK(data.advantages[0] == doctest::Approx(0.99 - 0.25));
}

TEST_CASE("compute_advantages at gamma=lambda=1 equals return minus baseline") {
  Rng rng(8);
  RolloutBatch batch;
  for (int e = 0; e < 5; ++e) {
    EpisodeRecord ep;
    ep.traj.start = {0.0};
    ep.traj.goal = {0.5};
    const int len = 1 + static_cast<int>(rng.uniform_index(12));
    for (int t = 0; t < len; ++t) {
      ep.traj.steps.push_back({{rng.uniform(-1, 1)}, {0.0}, rng.normal()});
    }
    batch.episodes.push_back(ep);
  }
  const auto value = [](const StateVec& s, const GoalVec&) { return 0.3 * s[0]; };
  const StepData data = compute_advantages(batch, 1.0, 1.0, value);

  // Brute-force oracle: direct summation of the remaining rewards.
  size_t i = 0;
  for (const auto& ep : batch.episodes) {
    for (size_t t = 0; t < ep.traj.steps.size(); ++t, ++i) {
      double ret = 0.0;
      for (size_t u = t; u < ep.traj.steps.size(); ++u) ret += ep.traj.steps[u].reward;
      CHECK(data.returns[i] == doctest::Approx(ret).epsilon(1e-12));
      CHECK(data.advantages[i] ==
            doctest::Approx(ret - 0.3 * ep.traj.steps[t].state[0]).epsilon(1e-10));
    }
  }
}

TEST_CASE("compute_advantages: zero rewards and zero baseline give zero advantages") {
  RolloutBatch batch;
  EpisodeRecord ep;
  ep.traj.goal = {0.0};
  for (int t = 0; t < 6; ++t) ep.traj.steps.push_back({{0.1 * t}, {0.0}, 0.0});
  batch.episodes.push_back(ep);
  const StepData data =
      compute_advantages(batch, 0.99, 0.95,
                         [](const StateVec&, const GoalVec&) { return 0.0; });
  for (double a : data.advantages) CHECK(a == 0.0);
}

TEST_CASE("surrogate gradient matches central finite differences over 10 seeds") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    Rng init(seed);
    PolicyParams base = make_policy(1, 1, 1, {4, 4}, std::log(0.5), init);
    StepData data = synthetic_data(base, 10, init);

    // Evaluate at a slight offset so the ratios differ from 1 but stay well
    // inside the clip band.
    PolicyParams p = base;
    for (int i = 0; i < p.theta.size(); ++i) p.theta[i] += 1e-3 * init.normal();
    for (int i = 0; i < p.log_std.size(); ++i) p.log_std[i] += 1e-3 * init.normal();

    std::vector<size_t> idx;
    for (size_t i = 0; i < data.size(); ++i) idx.push_back(i);
    const double clip_ratio = 0.2;
    const Eigen::VectorXd analytic = clipped_surrogate_grad(p, data, idx, clip_ratio);

    const int np = static_cast<int>(p.theta.size());
    for (int i = 0; i < np + p.log_std.size(); ++i) {
      PolicyParams hi = p, lo = p;
      double* hi_x = i < np ? &hi.theta[i] : &hi.log_std[i - np];
      double* lo_x = i < np ? &lo.theta[i] : &lo.log_std[i - np];
      const double h = 1e-6 * std::max(1.0, std::abs(*hi_x));
      *hi_x += h;
      *lo_x -= h;
      const double fd = (clipped_surrogate_loss(hi, data, idx, clip_ratio) -
                         clipped_surrogate_loss(lo, data, idx, clip_ratio)) /
                        (2.0 * h);
      CHECK(std::abs(analytic[i] - fd) <= grad_tolerance(analytic[i], fd));
    }
  }
}

TEST_CASE("value gradient matches central finite differences") {
  Rng init(17);
  ValueParams v = make_value(1, 1, {4, 4}, init);
  PolicyParams helper = make_policy(1, 1, 1, {4, 4}, 0.0, init);
  StepData data = synthetic_data(helper, 10, init);
  std::vector<size_t> idx;
  for (size_t i = 0; i < data.size(); ++i) idx.push_back(i);
  const Eigen::VectorXd analytic = value_mse_grad(v, data, idx);
  for (int i = 0; i < v.theta.size(); ++i) {
    ValueParams hi = v, lo = v;
    const double h = 1e-6 * std::max(1.0, std::abs(v.theta[i]));
    hi.theta[i] += h;
    lo.theta[i] -= h;
    const double fd =
        (value_mse_loss(hi, data, idx) - value_mse_loss(lo, data, idx)) / (2.0 * h);
    CHECK(std::abs(analytic[i] - fd) <= grad_tolerance(analytic[i], fd));
  }
}

TEST_CASE("learning rate zero leaves the parameters unchanged") {
  LineWorld env;
  ReachabilityRegion region = spread_region(env, {0.0, 0.4, -0.4});
  LearnerConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.episodes_per_iteration = 10;
  cfg.hidden_widths = {8, 8};
  Rng init(19), rng(20);
  PolicyParams p = make_policy(1, 1, 1, cfg.hidden_widths, cfg.init_log_std, init);
  ValueParams v = make_value(1, 1, cfg.hidden_widths, init);
  const RolloutBatch batch = collect_rollouts(p, env, region, cfg, 10, rng);
  const PolicyParams before = p;
  ClippedSurrogateUpdater updater(cfg);
  const UpdateResult res = updater.update(p, v, batch, rng);
  CHECK_FALSE(res.diverged);
  CHECK(p.theta == before.theta);
  CHECK(p.log_std == before.log_std);
}

TEST_CASE("update asserts the on-policy contract via the fingerprint") {
  LineWorld env;
  ReachabilityRegion region = spread_region(env, {0.0, 0.4});
  LearnerConfig cfg;
  cfg.episodes_per_iteration = 4;
  cfg.hidden_widths = {8};
  Rng init(21), rng(22);
  PolicyParams p = make_policy(1, 1, 1, cfg.hidden_widths, cfg.init_log_std, init);
  ValueParams v = make_value(1, 1, cfg.hidden_widths, init);
  const RolloutBatch batch = collect_rollouts(p, env, region, cfg, 10, rng);
  p.theta[0] += 0.5;  // stale batch
  ClippedSurrogateUpdater updater(cfg);
  CHECK_THROWS_AS(updater.update(p, v, batch, rng), std::logic_error);
}

TEST_CASE("non-finite batch flags divergence and restores the parameters") {
  LearnerConfig cfg;
  cfg.hidden_widths = {8};
  Rng init(23), rng(24);
  PolicyParams p = make_policy(1, 1, 1, cfg.hidden_widths, cfg.init_log_std, init);
  ValueParams v = make_value(1, 1, cfg.hidden_widths, init);
  RolloutBatch batch;
  EpisodeRecord ep;
  ep.traj.goal = {0.0};
  ep.traj.steps.push_back(
      {{0.0}, {0.1}, std::numeric_limits<double>::quiet_NaN()});
  batch.episodes.push_back(ep);
  batch.fingerprint = params_fingerprint(p);
  const PolicyParams before = p;
  ClippedSurrogateUpdater updater(cfg);
  const UpdateResult res = updater.update(p, v, batch, rng);
  CHECK(res.diverged);
  CHECK(p.theta == before.theta);
}

TEST_CASE("r_avg equals the outcomes recorded into the region") {
  LineWorld env;
  SamplerConfig scfg;
  scfg.n_new = 30;
  scfg.n_old = 10;
  Rng srng(25);
  ReachabilityRegion region = init_region({0.0}, env);
  resample_states(region, 0.5, scfg, env, srng);

  LearnerConfig cfg;
  cfg.episodes_per_iteration = 60;
  cfg.hidden_widths = {8, 8};
  Rng init(26), rng(27);
  PolicyParams p = make_policy(1, 1, 1, cfg.hidden_widths, cfg.init_log_std, init);
  const RolloutBatch batch =
      collect_rollouts(p, env, region, cfg, scfg.history_capacity, rng);

  size_t pushes = 0, ones = 0;
  for (const auto& e : region.current) {
    pushes += e.history.size();
    for (uint8_t b : e.history.values()) ones += b;
  }
  CHECK(pushes == static_cast<size_t>(cfg.episodes_per_iteration));
  CHECK(batch.r_avg ==
        doctest::Approx(ones / static_cast<double>(pushes)).epsilon(1e-12));
}

TEST_CASE("bandit: repeated updates move the mean toward the rewarded action") {
  // One-state two-action bandit. Success iff the action lands within 0.75 of
  // (1, 1); the optimum for the mean is (1, 1) itself.
  LearnerConfig cfg;
  cfg.hidden_widths = {8, 8};
  cfg.learning_rate = 3e-3;
  cfg.epochs = 10;
  cfg.minibatch_size = 256;
  Rng init(28), rng(29);
  PolicyParams p = make_policy(1, 1, 2, cfg.hidden_widths, cfg.init_log_std, init);
  ValueParams v = make_value(1, 1, cfg.hidden_widths, init);
  ClippedSurrogateUpdater updater(cfg);

  const Eigen::VectorXd input = policy_input({0.0}, {0.0});
  auto mean_distance = [&]() {
    const Eigen::VectorXd m = policy_mean(p, input);
    return std::hypot(m[0] - 1.0, m[1] - 1.0);
  };

  std::vector<double> distances;
  distances.push_back(mean_distance());
  for (int update = 1; update <= 100; ++update) {
    RolloutBatch batch;
    batch.fingerprint = params_fingerprint(p);
    for (int e = 0; e < 200; ++e) {
      EpisodeRecord ep;
      ep.traj.start = {0.0};
      ep.traj.goal = {0.0};
      TrajectoryStep step;
      step.state = {0.0};
      step.action = policy_act(p, {0.0}, {0.0}, rng, false);
      const double dx = step.action[0] - 1.0, dy = step.action[1] - 1.0;
      const bool hit = dx * dx + dy * dy <= 0.75 * 0.75;
      step.reward = hit ? 1.0 : 0.0;
      ep.traj.success = hit;
      ep.traj.steps.push_back(step);
      batch.episodes.push_back(std::move(ep));
    }
    updater.update(p, v, batch, rng);
    if (update % 10 == 0) distances.push_back(mean_distance());
  }

  for (size_t i = 1; i < distances.size(); ++i) {
    CHECK(distances[i] <= distances[i - 1] + 0.05);  // monotone drift, small slack
  }
  CHECK(distances.back() < 0.5);
  CHECK(distances.back() < 0.5 * distances.front());
}
