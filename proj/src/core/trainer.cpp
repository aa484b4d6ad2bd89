#include "core/trainer.hpp"

#include <chrono>
#include <cstdio>

#include <json.hpp>

#include "core/checkpoint.hpp"
#include "core/envs/factory.hpp"
#include "core/error.hpp"
#include "core/io.hpp"
#include "core/log.hpp"
#include "core/sampler.hpp"

namespace rg {

using nlohmann::json;

std::string metrics_row_csv(const MetricsRow& r) {
  std::string line = std::to_string(r.iteration);
  line += ',';
  line += fmt_double(r.r_avg);
  line += ',';
  line += fmt_optional(r.sigma);
  line += ',';
  line += fmt_optional(r.n_current);
  line += ',';
  line += fmt_optional(r.n_archive);
  line += ',';
  line += fmt_double(r.mean_episode_length);
  line += ',';
  line += fmt_optional(r.eval_success);
  line += ',';
  line += fmt_optional(r.wall_time_s);
  return line;
}

namespace {

json entry_record(const RegionEntry& e, const char* set, int iteration) {
  json rec;
  rec["set"] = set;
  rec["state"] = e.state;
  rec["goal"] = e.goal;
  if (e.history.empty()) {
    rec["mean_reward"] = nullptr;
  } else {
    rec["mean_reward"] = e.history.mean();
  }
  if (e.parent.has_value()) {
    rec["parent"] = *e.parent;
  } else {
    rec["parent"] = nullptr;
  }
  rec["iteration"] = iteration;
  return rec;
}

// Current entries are re-emitted every snapshot; archive entries appear once,
// at the period they were absorbed (the archive is append-only).
void append_snapshot(std::string& out, const ReachabilityRegion& region,
                     int iteration, size_t& archive_cursor) {
  for (const auto& e : region.current) {
    out += entry_record(e, "current", iteration).dump();
    out += '\n';
  }
  for (size_t k = archive_cursor; k < region.archive.size(); ++k) {
    out += entry_record(region.archive[k], "archive", iteration).dump();
    out += '\n';
  }
  archive_cursor = region.archive.size();
}

void emit(const TrainHooks* hooks, TrainEvent ev, int iteration) {
  if (hooks != nullptr && hooks->on_event) hooks->on_event(ev, iteration);
}

}  // namespace

double evaluate(const PolicyParams& policy, Env& env, int n_pairs, Rng& rng) {
  if (n_pairs < 1) throw ConfigError("evaluate: n_pairs must be >= 1");
  int successes = 0;
  for (int k = 0; k < n_pairs; ++k) {
    const auto [start, goal] = env.sample_eval_pair(rng);
    env.set_state(start);
    env.set_goal(goal);
    StateVec s = start;
    while (true) {
      const StepOutcome out = env.step(policy_act(policy, s, goal, rng, true));
      s = out.next_state;
      if (out.done) {
        if (out.success) ++successes;
        break;
      }
    }
  }
  return static_cast<double>(successes) / static_cast<double>(n_pairs);
}

TrainResult train(const TrainConfig& cfg, const TrainHooks* hooks) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  auto env = make_env(cfg.environment, cfg.env_config);
  const EnvSpec& spec = env->spec();
  const StateVec seed =
      cfg.seed_state.has_value() ? *cfg.seed_state : env->default_seed_state();

  Rng rng_init = Rng::substream(cfg.rng_seed, 0);
  Rng rng_learner = Rng::substream(cfg.rng_seed, 1);
  Rng rng_sampler = Rng::substream(cfg.rng_seed, 2);
  Rng rng_eval = Rng::substream(cfg.rng_seed, 3);

  TrainResult result;
  result.policy = make_policy(spec.state_dim, spec.goal_dim, spec.action_dim,
                              cfg.learner.hidden_widths, cfg.learner.init_log_std,
                              rng_init);
  result.value =
      make_value(spec.state_dim, spec.goal_dim, cfg.learner.hidden_widths, rng_init);
  ClippedSurrogateUpdater updater(cfg.learner);

  const bool use_region = cfg.mode != TrainMode::Uniform;
  const int period = cfg.sampler.sampling_period;
  double sigma =
      cfg.mode == TrainMode::Constant ? cfg.constant_sigma : cfg.initial_sigma;

  const bool writing = !cfg.output_dir.empty();
  const std::string snapshot_path = cfg.output_dir + "/region_snapshots.jsonl";
  size_t archive_cursor = 0;
  if (writing) {
    ensure_dir(cfg.output_dir);
    write_file(cfg.output_dir + "/config.json",
               train_config_to_json(cfg).dump(2) + "\n");
    if (use_region) write_file(snapshot_path, "");
  }

  if (use_region) {
    result.region = init_region(seed, *env);
    resample_states(result.region, sigma, cfg.sampler, *env, rng_sampler);
    emit(hooks, TrainEvent::Resampled, 0);
    if (writing) {
      std::string snap;
      append_snapshot(snap, result.region, 0, archive_cursor);
      append_file(snapshot_path, snap);
    }
  }

  auto save = [&](const std::string& name, int iteration) {
    if (!writing) return;
    Checkpoint ck;
    ck.policy = result.policy;
    ck.value = result.value;
    ck.rng_state["learner"] = rng_learner.serialize();
    ck.rng_state["sampler"] = rng_sampler.serialize();
    ck.rng_state["eval"] = rng_eval.serialize();
    ck.iteration = iteration;
    save_checkpoint(cfg.output_dir + "/" + name, ck);
  };
  const int checkpoint_every = std::max(period, 25);

  // Average success of the most recent batch, as consumed by the variance
  // controller; starts at 1 to match the seed's initial reward history.
  double last_r_avg = 1.0;
  std::string divergence_reason;

  for (int i = 1; i <= cfg.iterations; ++i) {
    result.iterations_run = i;
    try {
      if (use_region && i % period == 0) {
        if (cfg.mode == TrainMode::Adaptive) {
          sigma = update_variance(sigma, last_r_avg, cfg.sampler);
          emit(hooks, TrainEvent::VarianceUpdated, i);
        }
        FilterResult fr = filter_states(result.region, cfg.sampler);
        emit(hooks, TrainEvent::StatesFiltered, i);
        result.region.absorb_current();
        if (cfg.sampler.archive_mastered) {
          for (auto& e : fr.mastered) {
            if (e.archive_index.has_value()) continue;
            e.archive_index = result.region.archive.size();
            result.region.archive.push_back(e);
          }
        }
        emit(hooks, TrainEvent::ArchiveAbsorbed, i);
        resample_states(result.region, sigma, cfg.sampler, *env, rng_sampler);
        emit(hooks, TrainEvent::Resampled, i);
        if (writing) {
          std::string snap;
          append_snapshot(snap, result.region, i, archive_cursor);
          append_file(snapshot_path, snap);
        }
      }

      RolloutBatch batch =
          use_region
              ? collect_rollouts(result.policy, *env, result.region, cfg.learner,
                                 cfg.sampler.history_capacity, rng_learner)
              : collect_rollouts_uniform(result.policy, *env, cfg.learner,
                                         rng_learner);
      emit(hooks, TrainEvent::RolloutsCollected, i);
      last_r_avg = batch.r_avg;

      const UpdateResult ur =
          updater.update(result.policy, result.value, batch, rng_learner);
      emit(hooks, TrainEvent::PolicyUpdated, i);
      if (ur.diverged) {
        result.diverged = true;
        divergence_reason = "non-finite loss in policy update";
      }

      MetricsRow row;
      row.iteration = i;
      row.r_avg = batch.r_avg;
      row.mean_episode_length = batch.mean_episode_length;
      if (use_region) {
        row.sigma = sigma;
        row.n_current = static_cast<int>(result.region.current.size());
        row.n_archive = static_cast<int>(result.region.archive.size());
      }
      if (cfg.eval_every > 0 && i % cfg.eval_every == 0 && !result.diverged) {
        row.eval_success = evaluate(result.policy, *env, cfg.eval_pairs, rng_eval);
      }
      if (cfg.record_wall_time) {
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
      }
      result.metrics.push_back(row);
      log_debug("iteration " + std::to_string(i) +
                " r_avg=" + fmt_double(batch.r_avg));
    } catch (const DivergenceError& e) {
      result.diverged = true;
      divergence_reason = e.what();
    }

    if (result.diverged) {
      log_error("training diverged at iteration " + std::to_string(i) + ": " +
                divergence_reason);
      save("checkpoint_diverged.json", i);
      if (writing) {
        json report;
        report["iteration"] = i;
        report["reason"] = divergence_reason;
        write_file(cfg.output_dir + "/divergence.json", report.dump(2) + "\n");
      }
      break;
    }
    if (i % checkpoint_every == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "checkpoint_%06d.json", i);
      save(name, i);
    }
  }

  result.final_sigma = sigma;
  save("checkpoint_final.json", result.iterations_run);
  if (writing) {
    std::string csv = std::string(kMetricsHeader) + "\n";
    for (const auto& row : result.metrics) {
      csv += metrics_row_csv(row);
      csv += '\n';
    }
    write_file(cfg.output_dir + "/metrics.csv", csv);
  }
  return result;
}

}  // namespace rg
