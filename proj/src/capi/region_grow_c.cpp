#include "region_grow.h"

#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "core/checkpoint.hpp"
#include "core/config.hpp"
#include "core/envs/factory.hpp"
#include "core/error.hpp"
#include "core/plotdata.hpp"
#include "core/suite.hpp"
#include "core/trainer.hpp"

namespace {

thread_local std::string t_last_error;

void set_error(const std::string& msg) { t_last_error = msg; }

rg_status status_from_exception() {
  try {
    throw;
  } catch (const rg::ConfigError& e) {
    set_error(e.what());
    return RG_ERR_CONFIG;
  } catch (const rg::DimensionError& e) {
    set_error(e.what());
    return RG_ERR_DIMENSION;
  } catch (const rg::StateError& e) {
    set_error(e.what());
    return RG_ERR_STATE;
  } catch (const rg::IoError& e) {
    set_error(e.what());
    return RG_ERR_IO;
  } catch (const rg::DivergenceError& e) {
    set_error(e.what());
    return RG_ERR_DIVERGED;
  } catch (const std::exception& e) {
    set_error(e.what());
    return RG_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return RG_ERR_INTERNAL;
  }
}

nlohmann::json parse_optional_json(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return nlohmann::json::object();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw rg::ConfigError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

}  // namespace

struct rg_env {
  std::unique_ptr<rg::Env> env;
};

struct rg_run {
  rg::TrainConfig config;
};

extern "C" {

const char* rg_status_name(rg_status status) {
  switch (status) {
    case RG_OK: return "ok";
    case RG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RG_ERR_CONFIG: return "config error";
    case RG_ERR_DIMENSION: return "dimension mismatch";
    case RG_ERR_STATE: return "invalid state";
    case RG_ERR_IO: return "io error";
    case RG_ERR_DIVERGED: return "training diverged";
    case RG_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* rg_last_error(void) { return t_last_error.c_str(); }

const char* rg_version(void) { return "1.0.0"; }

rg_env* rg_env_create(const char* name, const char* config_json) {
  if (name == nullptr) {
    set_error("environment name is null");
    return nullptr;
  }
  try {
    auto handle = std::make_unique<rg_env>();
    handle->env = rg::make_env(name, parse_optional_json(config_json, "env config"));
    return handle.release();
  } catch (...) {
    status_from_exception();
    return nullptr;
  }
}

void rg_env_destroy(rg_env* env) { delete env; }

rg_env* rg_env_clone(const rg_env* env) {
  if (env == nullptr) {
    set_error("env handle is null");
    return nullptr;
  }
  auto handle = std::make_unique<rg_env>();
  handle->env = env->env->clone();
  return handle.release();
}

int rg_env_state_dim(const rg_env* env) {
  return env != nullptr ? env->env->spec().state_dim : -1;
}
int rg_env_goal_dim(const rg_env* env) {
  return env != nullptr ? env->env->spec().goal_dim : -1;
}
int rg_env_action_dim(const rg_env* env) {
  return env != nullptr ? env->env->spec().action_dim : -1;
}
int rg_env_horizon(const rg_env* env) {
  return env != nullptr ? env->env->spec().horizon : -1;
}

rg_status rg_env_set_state(rg_env* env, const double* state, size_t len) {
  if (env == nullptr || state == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  try {
    env->env->set_state(rg::StateVec(state, state + len));
    return RG_OK;
  } catch (...) {
    return status_from_exception();
  }
}

rg_status rg_env_set_goal(rg_env* env, const double* goal, size_t len) {
  if (env == nullptr || goal == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  try {
    env->env->set_goal(rg::GoalVec(goal, goal + len));
    return RG_OK;
  } catch (...) {
    return status_from_exception();
  }
}

rg_status rg_env_clear_goal(rg_env* env) {
  if (env == nullptr) {
    set_error("env handle is null");
    return RG_ERR_INVALID_ARGUMENT;
  }
  env->env->clear_goal();
  return RG_OK;
}

rg_status rg_env_observe(const rg_env* env, double* out, size_t len) {
  if (env == nullptr || out == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  try {
    const rg::StateVec& s = env->env->observe();
    if (len != s.size()) {
      set_error("observe buffer has wrong length");
      return RG_ERR_DIMENSION;
    }
    std::memcpy(out, s.data(), s.size() * sizeof(double));
    return RG_OK;
  } catch (...) {
    return status_from_exception();
  }
}

rg_status rg_env_default_seed_state(const rg_env* env, double* out, size_t len) {
  if (env == nullptr || out == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  const rg::StateVec s = env->env->default_seed_state();
  if (len != s.size()) {
    set_error("seed state buffer has wrong length");
    return RG_ERR_DIMENSION;
  }
  std::memcpy(out, s.data(), s.size() * sizeof(double));
  return RG_OK;
}

rg_status rg_env_step(rg_env* env, const double* action, size_t len,
                      rg_step_outcome* out) {
  if (env == nullptr || action == nullptr || out == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  try {
    const rg::StepOutcome o = env->env->step(rg::ActionVec(action, action + len));
    out->reward = o.reward;
    out->success = o.success ? 1 : 0;
    out->done = o.done ? 1 : 0;
    return RG_OK;
  } catch (...) {
    return status_from_exception();
  }
}

rg_status rg_env_state_to_goal(const rg_env* env, const double* state,
                               size_t state_len, double* goal, size_t goal_len) {
  if (env == nullptr || state == nullptr || goal == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  try {
    const rg::GoalVec g =
        env->env->state_to_goal(rg::StateVec(state, state + state_len));
    if (goal_len != g.size()) {
      set_error("goal buffer has wrong length");
      return RG_ERR_DIMENSION;
    }
    std::memcpy(goal, g.data(), g.size() * sizeof(double));
    return RG_OK;
  } catch (...) {
    return status_from_exception();
  }
}

rg_status rg_env_is_success(const rg_env* env, const double* state,
                            size_t state_len, const double* goal,
                            size_t goal_len, int* out) {
  if (env == nullptr || state == nullptr || goal == nullptr || out == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  try {
    *out = env->env->is_success(rg::StateVec(state, state + state_len),
                                rg::GoalVec(goal, goal + goal_len))
               ? 1
               : 0;
    return RG_OK;
  } catch (...) {
    return status_from_exception();
  }
}

rg_run* rg_run_create(const char* config_json) {
  if (config_json == nullptr) {
    set_error("config is null");
    return nullptr;
  }
  try {
    auto run = std::make_unique<rg_run>();
    run->config = rg::parse_train_config_text(config_json);
    return run.release();
  } catch (...) {
    status_from_exception();
    return nullptr;
  }
}

void rg_run_destroy(rg_run* run) { delete run; }

rg_status rg_run_set_seed(rg_run* run, uint64_t seed) {
  if (run == nullptr) {
    set_error("run handle is null");
    return RG_ERR_INVALID_ARGUMENT;
  }
  run->config.rng_seed = seed;
  return RG_OK;
}

rg_status rg_run_set_output_dir(rg_run* run, const char* dir) {
  if (run == nullptr || dir == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  run->config.output_dir = dir;
  return RG_OK;
}

rg_status rg_run_execute(rg_run* run) {
  if (run == nullptr) {
    set_error("run handle is null");
    return RG_ERR_INVALID_ARGUMENT;
  }
  try {
    const rg::TrainResult res = rg::train(run->config);
    if (res.diverged) {
      set_error("training diverged at iteration " +
                std::to_string(res.iterations_run));
      return RG_ERR_DIVERGED;
    }
    return RG_OK;
  } catch (...) {
    return status_from_exception();
  }
}

rg_status rg_evaluate_checkpoint(const char* checkpoint_path,
                                 const char* env_name,
                                 const char* env_config_json, int pairs,
                                 uint64_t seed, double* success_rate) {
  if (checkpoint_path == nullptr || env_name == nullptr || success_rate == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  try {
    if (pairs < 1) throw rg::ConfigError("pairs must be >= 1");
    const rg::Checkpoint ck = rg::load_checkpoint(checkpoint_path);
    auto env =
        rg::make_env(env_name, parse_optional_json(env_config_json, "env config"));
    const rg::EnvSpec& spec = env->spec();
    if (ck.policy.arch.input != spec.state_dim + spec.goal_dim ||
        ck.policy.arch.output != spec.action_dim) {
      throw rg::DimensionError(
          "checkpoint architecture does not match environment dimensions");
    }
    rg::Rng rng = rg::Rng::substream(seed, 3);
    *success_rate = rg::evaluate(ck.policy, *env, pairs, rng);
    return RG_OK;
  } catch (...) {
    return status_from_exception();
  }
}

rg_status rg_run_suite(const char* suite_config_json, const char* out_dir,
                       int jobs) {
  if (suite_config_json == nullptr || out_dir == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  try {
    const rg::SuiteConfig cfg = rg::parse_suite_config_text(suite_config_json);
    rg::run_suite(cfg, out_dir, jobs < 1 ? 1 : jobs);
    return RG_OK;
  } catch (...) {
    return status_from_exception();
  }
}

rg_status rg_export_plot_data(const char* run_dir, const char* what) {
  if (run_dir == nullptr || what == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  try {
    rg::export_plot_data(run_dir, what);
    return RG_OK;
  } catch (...) {
    return status_from_exception();
  }
}

rg_status rg_export_region(const char* run_dir, long iteration,
                           const char* out_path) {
  if (run_dir == nullptr || out_path == nullptr) {
    set_error("null argument");
    return RG_ERR_INVALID_ARGUMENT;
  }
  try {
    rg::export_region(run_dir, iteration, out_path);
    return RG_OK;
  } catch (...) {
    return status_from_exception();
  }
}

}  // extern "C"
