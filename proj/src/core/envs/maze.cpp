#include "core/envs/maze.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "core/log.hpp"

namespace rg {

namespace {

constexpr double kGravity = 9.81;
constexpr double kTieTol = 1e-12;

struct Interval {
  double lo, hi;
};

// True when the union of intervals covers [0, span].
bool covers(std::vector<Interval> iv, double span) {
  if (iv.empty()) return false;
  std::sort(iv.begin(), iv.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double reach = 0.0;
  for (const auto& s : iv) {
    if (s.lo > reach + 1e-9) return false;
    reach = std::max(reach, s.hi);
  }
  return reach >= span - 1e-9;
}

}  // namespace

std::vector<WallSegment> default_maze_walls(double h) {
  std::vector<WallSegment> w = open_maze_walls(h);
  // Central corridor: two parallel walls open at x = 0.7 h, closed by the
  // left border. The seed sits at the closed end.
  w.push_back({0.0, 0.4 * h, 0.7 * h, 0.4 * h});
  w.push_back({0.0, 0.6 * h, 0.7 * h, 0.6 * h});
  return w;
}

std::vector<WallSegment> open_maze_walls(double h) {
  return {{0.0, 0.0, h, 0.0}, {h, 0.0, h, h}, {h, h, 0.0, h}, {0.0, h, 0.0, 0.0}};
}

Maze::Maze(const MazeConfig& cfg) : cfg_(cfg) {
  if (!(cfg_.h_table > 0.0)) throw ConfigError("maze: h_table must be positive");
  if (!(cfg_.h_cube > 0.0 && cfg_.h_cube < cfg_.h_table)) {
    throw ConfigError("maze: h_cube must be in (0, h_table)");
  }
  if (!(cfg_.epsilon > 0.0)) throw ConfigError("maze: epsilon must be positive");
  if (!(cfg_.settle_speed > 0.0)) {
    throw ConfigError("maze: settle_speed must be positive");
  }
  if (!(cfg_.force_limit > 0.0)) {
    throw ConfigError("maze: force_limit must be positive");
  }
  if (!(cfg_.impulse_scale > 0.0)) {
    throw ConfigError("maze: impulse_scale must be positive");
  }
  if (!(cfg_.substep_dt > 0.0)) {
    throw ConfigError("maze: substep_dt must be positive");
  }
  if (cfg_.max_substeps < 1) throw ConfigError("maze: max_substeps must be >= 1");
  if (cfg_.friction_coeff < 0.0) {
    throw ConfigError("maze: friction_coeff must be >= 0");
  }
  if (cfg_.horizon < 1) throw ConfigError("maze: horizon must be >= 1");
  if (cfg_.step_penalty > 0.0) throw ConfigError("maze: step_penalty must be <= 0");

  if (cfg_.walls.empty()) cfg_.walls = default_maze_walls(cfg_.h_table);

  const double h = cfg_.h_table;
  const double r = cfg_.h_cube / 2.0;
  lo_ = r;
  hi_ = h - r;
  decel_ = cfg_.friction_coeff * kGravity;

  std::vector<Interval> left, right, bottom, top;
  for (const auto& w : cfg_.walls) {
    const bool vertical = w[0] == w[2];
    const bool horizontal = w[1] == w[3];
    if (vertical == horizontal) {
      throw ConfigError("maze: wall segment must be axis-aligned with nonzero length");
    }
    for (double c : w) {
      if (c < 0.0 || c > h) {
        throw ConfigError("maze: wall coordinate outside the table");
      }
    }
    Rect rect;
    rect.x0 = std::min(w[0], w[2]) - r;
    rect.x1 = std::max(w[0], w[2]) + r;
    rect.y0 = std::min(w[1], w[3]) - r;
    rect.y1 = std::max(w[1], w[3]) + r;
    rects_.push_back(rect);

    if (vertical && w[0] == 0.0) left.push_back({std::min(w[1], w[3]), std::max(w[1], w[3])});
    if (vertical && w[0] == h) right.push_back({std::min(w[1], w[3]), std::max(w[1], w[3])});
    if (horizontal && w[1] == 0.0) bottom.push_back({std::min(w[0], w[2]), std::max(w[0], w[2])});
    if (horizontal && w[1] == h) top.push_back({std::min(w[0], w[2]), std::max(w[0], w[2])});
  }
  if (!covers(left, h) || !covers(right, h) || !covers(bottom, h) || !covers(top, h)) {
    throw ConfigError("maze: walls must enclose the table on all four sides");
  }

  spec_.state_dim = 4;
  spec_.goal_dim = 2;
  spec_.action_dim = 2;
  spec_.action_low = {-cfg_.force_limit, -cfg_.force_limit};
  spec_.action_high = {cfg_.force_limit, cfg_.force_limit};
  spec_.horizon = cfg_.horizon;
  spec_.step_penalty = cfg_.step_penalty;
}

bool Maze::in_free_space(double x, double y) const {
  if (x < lo_ || x > hi_ || y < lo_ || y > hi_) return false;
  for (const auto& rc : rects_) {
    if (x > rc.x0 && x < rc.x1 && y > rc.y0 && y < rc.y1) return false;
  }
  return true;
}

StateVec Maze::advance(const StateVec& s, const ActionVec& a) const {
  const double inf = std::numeric_limits<double>::infinity();
  double px = s[0], py = s[1];
  double vx = s[2] + a[0] * cfg_.impulse_scale;
  double vy = s[3] + a[1] * cfg_.impulse_scale;
  double remaining = cfg_.substep_dt * static_cast<double>(cfg_.max_substeps);

  // The slide between collisions is a straight line with constant
  // deceleration, so each phase is advanced in closed form and collisions are
  // resolved at their exact positions. The substep budget caps total time.
  for (int iter = 0; iter < 10000; ++iter) {
    const double speed = std::hypot(vx, vy);
    if (speed < cfg_.settle_speed) {
      vx = vy = 0.0;
      break;
    }
    if (remaining <= 1e-15) break;  // budget exhausted, cube still moving

    const double t_settle =
        decel_ > 0.0 ? (speed - cfg_.settle_speed) / decel_ : inf;
    const bool settles = t_settle <= remaining;
    const double t_max = settles ? t_settle : remaining;
    const double dist_max = speed * t_max - 0.5 * decel_ * t_max * t_max;
    const double ux = vx / speed, uy = vy / speed;

    // Earliest entry into any forbidden rect along the swept segment.
    double s_hit = inf;
    bool hit_x = false, hit_y = false;
    double snap_x = 0.0, snap_y = 0.0;
    for (const auto& rc : rects_) {
      double sx_in, sx_out;
      if (ux > 0.0) {
        sx_in = (rc.x0 - px) / ux;
        sx_out = (rc.x1 - px) / ux;
      } else if (ux < 0.0) {
        sx_in = (rc.x1 - px) / ux;
        sx_out = (rc.x0 - px) / ux;
      } else if (px > rc.x0 && px < rc.x1) {
        sx_in = -inf;
        sx_out = inf;
      } else {
        continue;
      }
      double sy_in, sy_out;
      if (uy > 0.0) {
        sy_in = (rc.y0 - py) / uy;
        sy_out = (rc.y1 - py) / uy;
      } else if (uy < 0.0) {
        sy_in = (rc.y1 - py) / uy;
        sy_out = (rc.y0 - py) / uy;
      } else if (py > rc.y0 && py < rc.y1) {
        sy_in = -inf;
        sy_out = inf;
      } else {
        continue;
      }
      const double s_in = std::max(sx_in, sy_in);
      const double s_out = std::min(sx_out, sy_out);
      if (s_in >= s_out || s_in > dist_max || s_out <= 0.0) continue;
      const double cand = std::max(s_in, 0.0);
      if (cand > s_hit + kTieTol) continue;
      const bool fresh = cand < s_hit - kTieTol;
      if (fresh) {
        s_hit = cand;
        hit_x = hit_y = false;
      }
      // The face crossed is the axis with the later slab entry.
      if (sx_in >= sy_in - kTieTol && ux != 0.0) {
        hit_x = true;
        snap_x = ux > 0.0 ? rc.x0 : rc.x1;
      }
      if (sy_in >= sx_in - kTieTol && uy != 0.0) {
        hit_y = true;
        snap_y = uy > 0.0 ? rc.y0 : rc.y1;
      }
    }

    if (s_hit == inf) {
      px += ux * dist_max;
      py += uy * dist_max;
      if (settles) {
        vx = vy = 0.0;
      } else {
        vx = ux * (speed - decel_ * remaining);
        vy = uy * (speed - decel_ * remaining);
      }
      break;
    }

    // Time to cover s_hit under constant deceleration (smaller root).
    double t_hit;
    if (decel_ > 1e-12) {
      const double disc = std::max(0.0, speed * speed - 2.0 * decel_ * s_hit);
      t_hit = (speed - std::sqrt(disc)) / decel_;
    } else {
      t_hit = s_hit / speed;
    }
    px += ux * s_hit;
    py += uy * s_hit;
    const double new_speed = std::max(0.0, speed - decel_ * t_hit);
    vx = ux * new_speed;
    vy = uy * new_speed;
    if (hit_x) {
      px = snap_x;
      vx = 0.0;
    }
    if (hit_y) {
      py = snap_y;
      vy = 0.0;
    }
    remaining -= t_hit;
  }

  // Containment guard; collisions already place the cube flush on faces.
  px = clip(px, lo_, hi_);
  py = clip(py, lo_, hi_);
  for (const auto& rc : rects_) {
    if (px > rc.x0 && px < rc.x1 && py > rc.y0 && py < rc.y1) {
      const double dx = std::min(px - rc.x0, rc.x1 - px);
      const double dy = std::min(py - rc.y0, rc.y1 - py);
      if (dx <= dy) {
        px = (px - rc.x0 <= rc.x1 - px) ? rc.x0 : rc.x1;
      } else {
        py = (py - rc.y0 <= rc.y1 - py) ? rc.y0 : rc.y1;
      }
      log_debug("maze: projected cube out of a wall rect");
    }
  }
  return {px, py, vx, vy};
}

GoalVec Maze::state_to_goal(const StateVec& s) const {
  validate_state(s);
  return {s[0], s[1]};
}

bool Maze::is_success(const StateVec& s, const GoalVec& g) const {
  if (std::hypot(s[2], s[3]) >= cfg_.settle_speed) return false;  // must rest
  const double dx = s[0] - g[0], dy = s[1] - g[1];
  return dx * dx + dy * dy <= cfg_.epsilon * cfg_.epsilon;
}

void Maze::validate_state(const StateVec& s) const {
  if (s.size() != 4) {
    throw DimensionError("maze: state has dimension " +
                         std::to_string(s.size()) + ", expected 4");
  }
  if (!all_finite(s)) throw StateError("maze: non-finite state");
  if (!in_free_space(s[0], s[1])) {
    throw StateError("maze: cube center (" + std::to_string(s[0]) + ", " +
                     std::to_string(s[1]) + ") outside the free space");
  }
}

StateVec Maze::sample_uniform_state(Rng& rng) const {
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(lo_, hi_);
    const double y = rng.uniform(lo_, hi_);
    if (in_free_space(x, y)) return {x, y, 0.0, 0.0};
  }
  throw StateError("maze: failed to sample a free-space state");
}

StateVec Maze::default_seed_state() const {
  return {0.1 * cfg_.h_table, 0.5 * cfg_.h_table, 0.0, 0.0};
}

}  // namespace rg
