#pragma once

#include <array>
#include <vector>

#include "core/env.hpp"

namespace rg {

// Axis-aligned wall segment (x1, y1, x2, y2) in table coordinates.
using WallSegment = std::array<double, 4>;

// Planar cube-pushing task. One logical step applies a force impulse to the
// cube, then lets it slide under Coulomb friction until it settles (speed
// below settle_speed) or the substep budget runs out. Wall collisions project
// the cube onto the free space and absorb the normal velocity component.
// State is (x, y, vx, vy) of the cube center; the goal is a 2-d position and
// success requires the cube to rest within epsilon of it.
struct MazeConfig {
  double h_table = 1.0;        // square table side, m
  double h_cube = 0.1;         // cube side, m
  double epsilon = 0.05;       // goal radius, m
  double friction_coeff = 0.1; // deceleration = friction_coeff * 9.81 m/s^2
  double force_limit = 1.0;    // N, per axis
  double impulse_scale = 1.0;  // (m/s) per N: velocity gained per unit force
  double settle_speed = 0.05;  // m/s
  double substep_dt = 0.02;    // s; with max_substeps caps one logical step
  int max_substeps = 200;
  double step_penalty = -0.01;
  int horizon = 100;
  // Outer boundary plus inner walls. Empty -> default layout (boundary plus
  // the two central-corridor walls).
  std::vector<WallSegment> walls;
};

std::vector<WallSegment> default_maze_walls(double h_table);
std::vector<WallSegment> open_maze_walls(double h_table);  // boundary only

class Maze final : public Env {
 public:
  explicit Maze(const MazeConfig& cfg = {});

  const EnvSpec& spec() const override { return spec_; }
  std::string name() const override { return "maze"; }
  std::unique_ptr<Env> clone() const override {
    return std::make_unique<Maze>(*this);
  }

  GoalVec state_to_goal(const StateVec& s) const override;
  bool is_success(const StateVec& s, const GoalVec& g) const override;
  void validate_state(const StateVec& s) const override;
  StateVec sample_uniform_state(Rng& rng) const override;
  StateVec default_seed_state() const override;

  // True when the cube center is in the wall-free space (boundaries allowed).
  bool in_free_space(double x, double y) const;

  const MazeConfig& config() const { return cfg_; }

 protected:
  StateVec advance(const StateVec& s, const ActionVec& a) const override;

 private:
  struct Rect {  // forbidden region for the cube center
    double x0, x1, y0, y1;
  };

  MazeConfig cfg_;
  EnvSpec spec_;
  std::vector<Rect> rects_;  // walls inflated by h_cube / 2
  double lo_ = 0.0, hi_ = 0.0;  // center bounds from the table border
  double decel_ = 0.0;
};

}  // namespace rg
