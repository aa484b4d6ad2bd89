#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "core/envs/factory.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/sampler.hpp"

using namespace rg;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Independent fine-step integrator for the maze: naive explicit Euler with
// per-step penetration projection. Deliberately reimplements the geometry
// from the config alone.
StateVec maze_euler_oracle(const MazeConfig& cfg, const StateVec& s,
                           const ActionVec& f, double h) {
  const double lo = cfg.h_cube / 2.0;
  const double hi = cfg.h_table - cfg.h_cube / 2.0;
  const double decel = cfg.friction_coeff * 9.81;
  struct R {
    double x0, x1, y0, y1;
  };
  std::vector<R> rects;
  const auto walls = cfg.walls.empty() ? default_maze_walls(cfg.h_table) : cfg.walls;
  for (const auto& w : walls) {
    rects.push_back({std::min(w[0], w[2]) - lo, std::max(w[0], w[2]) + lo,
                     std::min(w[1], w[3]) - lo, std::max(w[1], w[3]) + lo});
  }
  double px = s[0], py = s[1];
  double vx = s[2] + clip(f[0], -cfg.force_limit, cfg.force_limit) * cfg.impulse_scale;
  double vy = s[3] + clip(f[1], -cfg.force_limit, cfg.force_limit) * cfg.impulse_scale;
  const double budget = cfg.substep_dt * cfg.max_substeps;
  for (double t = 0.0; t < budget; t += h) {
    double speed = std::hypot(vx, vy);
    if (speed < cfg.settle_speed) {
      vx = vy = 0.0;
      break;
    }
    px += vx * h;
    py += vy * h;
    if (px < lo) { px = lo; vx = 0.0; }
    if (px > hi) { px = hi; vx = 0.0; }
    if (py < lo) { py = lo; vy = 0.0; }
    if (py > hi) { py = hi; vy = 0.0; }
    for (const auto& rc : rects) {
      if (px > rc.x0 && px < rc.x1 && py > rc.y0 && py < rc.y1) {
        const double dx = std::min(px - rc.x0, rc.x1 - px);
        const double dy = std::min(py - rc.y0, rc.y1 - py);
        if (dx <= dy) {
          px = (px - rc.x0 <= rc.x1 - px) ? rc.x0 : rc.x1;
          vx = 0.0;
        } else {
          py = (py - rc.y0 <= rc.y1 - py) ? rc.y0 : rc.y1;
          vy = 0.0;
        }
      }
    }
    speed = std::hypot(vx, vy);
    if (speed > 0.0) {
      const double ns = std::max(0.0, speed - decel * h);
      vx *= ns / speed;
      vy *= ns / speed;
    }
  }
  if (std::hypot(vx, vy) < cfg.settle_speed) vx = vy = 0.0;
  return {px, py, vx, vy};
}

// Independent reference for one reacher step: RK4 on the damped
// double-integrator ODE at dt/100.
StateVec reacher_ode_oracle(const ReacherConfig& cfg, const StateVec& s,
                            const ActionVec& tau) {
  double th1 = s[0], th2 = s[1], w1 = s[2], w2 = s[3];
  const double t1 = clip(tau[0], -cfg.torque_limit, cfg.torque_limit);
  const double t2 = clip(tau[1], -cfg.torque_limit, cfg.torque_limit);
  const int n = 100;
  const double h = cfg.dt / n;
  auto acc = [&](double t, double w) { return t - cfg.damping * w; };
  for (int k = 0; k < n; ++k) {
    // RK4 on (theta, w) per joint (joints are decoupled).
    auto step_joint = [&](double& th, double& w, double t) {
      const double k1w = acc(t, w), k1t = w;
      const double k2w = acc(t, w + 0.5 * h * k1w), k2t = w + 0.5 * h * k1w;
      const double k3w = acc(t, w + 0.5 * h * k2w), k3t = w + 0.5 * h * k2w;
      const double k4w = acc(t, w + h * k3w), k4t = w + h * k3w;
      th += h / 6.0 * (k1t + 2 * k2t + 2 * k3t + k4t);
      w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    };
    step_joint(th1, w1, t1);
    step_joint(th2, w2, t2);
  }
  return {th1, th2, w1, w2};
}

double circular_diff(double a, double b) {
  double d = std::fmod(a - b, 2.0 * kPi);
  if (d > kPi) d -= 2.0 * kPi;
  if (d < -kPi) d += 2.0 * kPi;
  return std::abs(d);
}

}  // namespace

TEST_CASE("lineworld displacement and caps") {
  LineWorldConfig cfg;
  cfg.max_step = 0.5;
  LineWorld env(cfg);
  env.set_state({0.0});
  CHECK(env.step({0.3}).next_state[0] == doctest::Approx(0.3));
  env.set_state({0.0});
  CHECK(env.step({2.0}).next_state[0] == doctest::Approx(0.5));  // cap binds
  env.set_state({0.9});
  CHECK(env.step({0.5}).next_state[0] == doctest::Approx(1.0));  // boundary
}

TEST_CASE("lineworld Brownian walk matches the clipped-Gaussian oracle") {
  // Oracle (quadrature over the clipped normal, frozen): for sigma = 0.5,
  // max_step = 0.1, per-step variance 0.0089404, so sd(x_50) = 0.66860.
  // With 1e5 rollouts the empirical sd has se ~ 0.0015.
  LineWorldConfig cfg;
  cfg.x_min = -1e6;
  cfg.x_max = 1e6;
  cfg.max_step = 0.1;
  cfg.horizon = 60;
  LineWorld env(cfg);
  Rng rng(42);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto visited = brownian_rollout(env, {0.0}, 0.5, 50, rng);
    REQUIRE(visited.size() == 50);
    const double x = visited.back().first[0];
    sum += x;
    sum2 += x * x;
  }
  const double sd = std::sqrt(sum2 / n - (sum / n) * (sum / n));
  CHECK(sd == doctest::Approx(0.66860).epsilon(0.015));
}

TEST_CASE("lineworld Brownian walk at sigma_min matches the percentile oracle") {
  // Oracle (4e6-walk Monte-Carlo, frozen): 99.9th percentile of |x_40| for
  // sigma = 0.1, max_step = 0.1 is 1.4746; the 1e4-sample estimate has
  // se ~ 0.038.
  LineWorldConfig cfg;
  cfg.x_min = -1e6;
  cfg.x_max = 1e6;
  cfg.horizon = 60;
  LineWorld env(cfg);
  Rng rng(7);
  std::vector<double> finals;
  for (int k = 0; k < 10000; ++k) {
    const auto visited = brownian_rollout(env, {0.0}, 0.1, 40, rng);
    finals.push_back(std::abs(visited.back().first[0]));
  }
  std::sort(finals.begin(), finals.end());
  const double p999 = finals[static_cast<size_t>(0.999 * finals.size())];
  CHECK(std::abs(p999 - 1.4746) < 0.15);
}

TEST_CASE("reacher forward kinematics") {
  ReacherConfig cfg;
  Reacher env(cfg);
  const double reach = cfg.l1 + cfg.l2;
  auto p = env.forward_kinematics(0.0, 0.0);
  CHECK(p[0] == doctest::Approx(reach));
  CHECK(p[1] == doctest::Approx(0.0));
  p = env.forward_kinematics(kPi / 2.0, 0.0);
  CHECK(p[0] == doctest::Approx(0.0));
  CHECK(p[1] == doctest::Approx(reach));
  p = env.forward_kinematics(kPi / 2.0, -kPi / 2.0);  // elbow bend, l1 = l2 = 0.1
  CHECK(p[0] == doctest::Approx(0.1));
  CHECK(p[1] == doctest::Approx(0.1));
}

TEST_CASE("reacher fk never exceeds the arm length") {
  ReacherConfig cfg;
  Reacher env(cfg);
  Rng rng(3);
  for (int k = 0; k < 2000; ++k) {
    const auto p = env.forward_kinematics(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    CHECK(std::hypot(p[0], p[1]) <= cfg.l1 + cfg.l2 + 1e-12);
  }
}

TEST_CASE("reacher equilibrium: zero torque, zero velocity") {
  Reacher env{ReacherConfig{}};
  env.set_state({0.3, -0.2, 0.0, 0.0});
  const auto out = env.step({0.0, 0.0});
  CHECK(out.next_state == StateVec{0.3, -0.2, 0.0, 0.0});
}

TEST_CASE("reacher velocity threshold blocks success") {
  ReacherConfig cfg;
  Reacher env(cfg);
  // Tip at the goal but moving at 0.25 m/s (w2 = 2.5 -> l2 * w2 = 0.25).
  const GoalVec g = {cfg.l1 + cfg.l2, 0.0};
  CHECK_FALSE(env.is_success({0.0, 0.0, 0.0, 2.5}, g));
  CHECK(env.is_success({0.0, 0.0, 0.0, 0.0}, g));
}

TEST_CASE("reacher constant torque from rest follows the geometric series") {
  ReacherConfig cfg;
  Reacher env(cfg);
  const double tau = 0.8;
  const int k = 20;
  env.set_state({0.0, 0.0, 0.0, 0.0});
  StateVec s;
  for (int i = 0; i < k; ++i) s = env.step({tau, 0.0}).next_state;
  // w_k = dt*tau * (1 - a^k) / (1 - a), a = 1 - dt*damping.
  const double a = 1.0 - cfg.dt * cfg.damping;
  const double expected = cfg.dt * tau * (1.0 - std::pow(a, k)) / (1.0 - a);
  CHECK(s[2] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s[3] == doctest::Approx(0.0));
}

TEST_CASE("reacher single steps match the fine ODE reference within 1e-3") {
  ReacherConfig cfg;
  Reacher env(cfg);
  Rng rng(11);
  for (int k = 0; k < 300; ++k) {
    const StateVec s = {wrap_angle(rng.uniform(-kPi, kPi)),
                        wrap_angle(rng.uniform(-kPi, kPi)),
                        rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
    const ActionVec tau = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    env.set_state(s);
    const StateVec got = env.step(tau).next_state;
    const StateVec ref = reacher_ode_oracle(cfg, s, tau);
    CHECK(circular_diff(got[0], ref[0]) < 1e-3);
    CHECK(circular_diff(got[1], ref[1]) < 1e-3);
    CHECK(std::abs(got[2] - ref[2]) < 1e-3);
    CHECK(std::abs(got[3] - ref[3]) < 1e-3);
  }
}

TEST_CASE("maze equilibrium: zero force on a resting cube") {
  Maze env{MazeConfig{}};
  env.set_state({0.3, 0.2, 0.0, 0.0});
  CHECK(env.step({0.0, 0.0}).next_state == StateVec{0.3, 0.2, 0.0, 0.0});
}

TEST_CASE("maze push toward a wall ends flush with zero normal velocity") {
  MazeConfig cfg;
  Maze env(cfg);
  env.set_state({0.5, 0.2, 0.0, 0.0});
  const StateVec got = env.step({1.0, 0.0}).next_state;
  CHECK(got[0] == doctest::Approx(cfg.h_table - cfg.h_cube / 2.0));  // flush
  CHECK(got[1] == doctest::Approx(0.2));
  CHECK(got[2] == 0.0);
  CHECK(got[3] == 0.0);
  const StateVec ref = maze_euler_oracle(cfg, {0.5, 0.2, 0.0, 0.0}, {1.0, 0.0}, 1e-5);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(got[i] - ref[i]) < 1e-3);
}

TEST_CASE("maze cube sliding over the goal does not succeed") {
  MazeConfig cfg;
  Maze env(cfg);
  env.set_state({0.2, 0.2, 0.0, 0.0});
  env.set_goal({0.4, 0.2});
  const StepOutcome out = env.step({1.0, 0.0});  // slides ~0.51 m, well past
  CHECK_FALSE(out.success);
  CHECK(out.next_state[0] > 0.4 + cfg.epsilon);
}

TEST_CASE("maze random transitions match the fine Euler oracle within 1e-3") {
  MazeConfig cfg;
  Maze env(cfg);
  Rng rng(19);
  int tested = 0;
  while (tested < 200) {
    StateVec s = env.sample_uniform_state(rng);
    s[2] = rng.uniform(-1.0, 1.0);
    s[3] = rng.uniform(-1.0, 1.0);
    const ActionVec f = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    env.set_state(s);
    const StateVec got = env.step(f).next_state;
    const StateVec ref = maze_euler_oracle(cfg, s, f, 1e-5);
    for (int i = 0; i < 4; ++i) {
      CAPTURE(i);
      CHECK(std::abs(got[i] - ref[i]) < 1e-3);
    }
    ++tested;
  }
}

TEST_CASE("maze wall containment holds under random pushes") {
  Maze env{MazeConfig{}};
  Rng rng(23);
  StateVec s = env.default_seed_state();
  env.set_state(s);
  for (int k = 0; k < 20000; ++k) {
    const StepOutcome out = env.step({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    REQUIRE(env.in_free_space(out.next_state[0], out.next_state[1]));
    if (out.done) env.set_state(out.next_state);
  }
}

TEST_CASE("maze success requires rest and proximity simultaneously") {
  MazeConfig cfg;
  Maze env(cfg);
  CHECK(env.is_success({0.3, 0.3, 0.0, 0.0}, {0.3, 0.34}));
  CHECK_FALSE(env.is_success({0.3, 0.3, 0.0, 0.0}, {0.3, 0.36}));        // too far
  CHECK_FALSE(env.is_success({0.3, 0.3, 0.06, 0.0}, {0.3, 0.3}));        // moving
  CHECK(env.is_success({0.3, 0.3, 0.03, 0.0}, {0.3, 0.3}));              // < settle
}

TEST_CASE("maze dissipates energy whenever the cube moves") {
  MazeConfig cfg;
  Maze env(cfg);
  Rng rng(29);
  for (int k = 0; k < 500; ++k) {
    const StateVec s = env.sample_uniform_state(rng);
    const ActionVec f = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const double v_impulse =
        std::hypot(f[0] * cfg.impulse_scale, f[1] * cfg.impulse_scale);
    if (v_impulse < cfg.settle_speed) continue;  // no substep runs
    env.set_state(s);
    const StateVec next = env.step(f).next_state;
    CHECK(std::hypot(next[2], next[3]) < v_impulse);
  }
}

TEST_CASE("lineworld reachability is constructive") {
  LineWorldConfig cfg;
  LineWorld env(cfg);
  Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    const double x1 = rng.uniform(cfg.x_min, cfg.x_max);
    const double x2 = rng.uniform(cfg.x_min, cfg.x_max);
    const int expected_steps =
        static_cast<int>(std::ceil(std::abs(x2 - x1) / cfg.max_step));
    env.set_state({x1});
    double x = x1;
    int steps = 0;
    while (std::abs(x - x2) > 1e-12) {
      x = env.step({x2 - x}).next_state[0];  // clipped to max_step by the env
      ++steps;
      REQUIRE(steps <= expected_steps);
    }
    CHECK(steps == expected_steps);
  }
}

TEST_CASE("sample_eval_pair draws uniform starts on lineworld (KS < 0.02)") {
  LineWorld env{LineWorldConfig{}};
  Rng rng(37);
  const int n = 10000;
  std::vector<double> xs;
  for (int k = 0; k < n; ++k) xs.push_back(env.sample_eval_pair(rng).first[0]);
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = (xs[i] + 1.0) / 2.0;  // uniform CDF on [-1, 1]
    ks = std::max(ks, std::abs(u - (i + 1.0) / n));
    ks = std::max(ks, std::abs(u - static_cast<double>(i) / n));
  }
  CHECK(ks < 0.02);
}

TEST_CASE("sample_eval_pair support checks") {
  Maze maze{MazeConfig{}};
  Reacher reacher{ReacherConfig{}};
  Rng rng(43);
  for (int k = 0; k < 2000; ++k) {
    const auto [ms, mg] = maze.sample_eval_pair(rng);
    CHECK(maze.in_free_space(ms[0], ms[1]));
    CHECK(maze.in_free_space(mg[0], mg[1]));
    const auto [rs, rgoal] = reacher.sample_eval_pair(rng);
    const double norm = std::hypot(rgoal[0], rgoal[1]);
    CHECK(norm <= reacher.config().l1 + reacher.config().l2 + 1e-12);
    CHECK(norm >= std::abs(reacher.config().l1 - reacher.config().l2) - 1e-12);
  }
}

TEST_CASE("maze config validation") {
  MazeConfig open;
  open.walls = open_maze_walls(1.0);
  CHECK_NOTHROW(Maze{open});

  MazeConfig unbounded;
  unbounded.walls = {{0.0, 0.0, 1.0, 0.0}};  // single border side
  CHECK_THROWS_AS(Maze{unbounded}, ConfigError);

  MazeConfig diagonal;
  diagonal.walls = open_maze_walls(1.0);
  diagonal.walls.push_back({0.1, 0.1, 0.4, 0.4});
  CHECK_THROWS_AS(Maze{diagonal}, ConfigError);
}
