#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "core/env.hpp"
#include "core/policy.hpp"
#include "core/region.hpp"
#include "core/rng.hpp"

namespace rg {

struct LearnerConfig {
  double p_new = 0.6;  // probability of drawing the goal from the current set
  int episodes_per_iteration = 50;
  double discount = 0.99;
  double gae_lambda = 0.95;
  double learning_rate = 3e-4;
  double clip_ratio = 0.2;
  int epochs = 10;
  int minibatch_size = 256;
  std::vector<int> hidden_widths = {64, 64};
  double init_log_std = -0.6931471805599453;  // ln 0.5
  int start_goal_retries = 20;

  void validate() const;
};

enum class GoalSource { Current, Archive };

struct StartGoal {
  size_t entry_index = 0;
  GoalVec goal;
  GoalSource source = GoalSource::Current;
  bool degenerate = false;  // retries exhausted, pair may be a self-pair
};

// Start uniform from the current set; goal from current with probability
// p_new, otherwise from the archive. Pairs already satisfying the success
// predicate are redrawn up to max_retries times.
StartGoal sample_start_goal(const ReachabilityRegion& region, const Env& env,
                            double p_new, int max_retries, Rng& rng);

struct EpisodeRecord {
  Trajectory traj;
  int start_entry = -1;  // region entry index; -1 for uniform-mode episodes
  GoalSource source = GoalSource::Current;
};

struct RolloutBatch {
  std::vector<EpisodeRecord> episodes;
  double r_avg = 0.0;  // success ratio of the batch
  uint64_t fingerprint = 0;  // of the policy that generated the batch
  double mean_episode_length = 0.0;
};

// Runs episodes_per_iteration curriculum episodes with the stochastic policy,
// recording each start's binary outcome into the region.
RolloutBatch collect_rollouts(const PolicyParams& params, Env& env,
                              ReachabilityRegion& region, const LearnerConfig& cfg,
                              int history_capacity, Rng& rng);

// Baseline without region machinery: start and goal from sample_eval_pair.
RolloutBatch collect_rollouts_uniform(const PolicyParams& params, Env& env,
                                      const LearnerConfig& cfg, Rng& rng);

// Flattened per-step tensors for the update.
struct StepData {
  std::vector<Eigen::VectorXd> inputs;   // (state, goal)
  std::vector<Eigen::VectorXd> actions;
  std::vector<double> advantages;        // GAE, unnormalized
  std::vector<double> returns;           // discounted rewards-to-go
  std::vector<double> old_logp;
  size_t size() const { return inputs.size(); }
};

using ValueFn = std::function<double(const StateVec&, const GoalVec&)>;

// Discounted returns plus TD-residual smoothed advantages (terminal bootstrap
// is zero: every episode ends at success or the horizon).
StepData compute_advantages(const RolloutBatch& batch, double gamma, double lambda,
                            const ValueFn& value_fn);

// Clipped-ratio surrogate over the given sample indices; pure in the params.
double clipped_surrogate_loss(const PolicyParams& p, const StepData& data,
                              const std::vector<size_t>& idx, double clip_ratio);
// Gradient w.r.t. [theta; log_std], same ordering as the params.
Eigen::VectorXd clipped_surrogate_grad(const PolicyParams& p, const StepData& data,
                                       const std::vector<size_t>& idx,
                                       double clip_ratio);

double value_mse_loss(const ValueParams& v, const StepData& data,
                      const std::vector<size_t>& idx);
Eigen::VectorXd value_mse_grad(const ValueParams& v, const StepData& data,
                               const std::vector<size_t>& idx);

struct UpdateResult {
  bool diverged = false;
  double policy_loss = 0.0;
  double value_loss = 0.0;
};

// Policy optimization behind Algorithm-style UpdatePolicy: any implementation
// with this signature plugs into the trainer.
class PolicyUpdater {
 public:
  virtual ~PolicyUpdater() = default;
  virtual UpdateResult update(PolicyParams& params, ValueParams& value,
                              const RolloutBatch& batch, Rng& rng) = 0;
};

// Reference on-policy learner: clipped-ratio policy gradient with a value
// baseline trained by regression, optimized with Adam over minibatches.
class ClippedSurrogateUpdater final : public PolicyUpdater {
 public:
  explicit ClippedSurrogateUpdater(const LearnerConfig& cfg);
  UpdateResult update(PolicyParams& params, ValueParams& value,
                      const RolloutBatch& batch, Rng& rng) override;

 private:
  struct Adam {
    Eigen::VectorXd m, v;
    int t = 0;
    void step(Eigen::VectorXd& x, const Eigen::VectorXd& g, double lr);
  };
  LearnerConfig cfg_;
  Adam policy_adam_, value_adam_;
};

}  // namespace rg
