#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "region_grow.h"

namespace {

const char* kTinyConfig = R"({
  "environment": "lineworld",
  "iterations": 8,
  "mode": "adaptive",
  "rng_seed": 3,
  "eval_every": 4,
  "eval_pairs": 10,
  "record_wall_time": false,
  "sampler": {"n_new": 15, "n_old": 5, "brownian_horizon": 10},
  "learner": {"episodes_per_iteration": 5, "hidden_widths": [8, 8], "epochs": 2}
})";

std::string fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("rg_capi_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("environment handles: lifecycle, dimensions and stepping") {
  rg_env* env = rg_env_create("lineworld", nullptr);
  REQUIRE(env != nullptr);
  CHECK(rg_env_state_dim(env) == 1);
  CHECK(rg_env_goal_dim(env) == 1);
  CHECK(rg_env_action_dim(env) == 1);
  CHECK(rg_env_horizon(env) == 60);

  const double s0 = 0.0;
  CHECK(rg_env_set_state(env, &s0, 1) == RG_OK);
  double obs = 99.0;
  CHECK(rg_env_observe(env, &obs, 1) == RG_OK);
  CHECK(obs == 0.0);

  const double goal = 0.08;
  CHECK(rg_env_set_goal(env, &goal, 1) == RG_OK);
  rg_step_outcome out;
  const double a = 0.08;
  CHECK(rg_env_step(env, &a, 1, &out) == RG_OK);
  CHECK(out.success == 1);
  CHECK(out.done == 1);

  // Stepping a finished episode is a state error.
  CHECK(rg_env_step(env, &a, 1, &out) == RG_ERR_STATE);
  CHECK(std::strlen(rg_last_error()) > 0);

  rg_env* copy = rg_env_clone(env);
  REQUIRE(copy != nullptr);
  CHECK(rg_env_set_state(copy, &s0, 1) == RG_OK);
  rg_env_destroy(copy);
  rg_env_destroy(env);
}

TEST_CASE("environment handles: error codes") {
  CHECK(rg_env_create("flatland", nullptr) == nullptr);
  CHECK(std::strlen(rg_last_error()) > 0);

  CHECK(rg_env_create("maze", "{\"h_cube\": -1}") == nullptr);

  rg_env* env = rg_env_create("maze", nullptr);
  REQUIRE(env != nullptr);
  const double bad_state[4] = {5.0, 0.5, 0.0, 0.0};
  CHECK(rg_env_set_state(env, bad_state, 4) == RG_ERR_STATE);
  const double short_state[2] = {0.5, 0.5};
  CHECK(rg_env_set_state(env, short_state, 2) == RG_ERR_DIMENSION);

  const double ok_state[4] = {0.5, 0.2, 0.0, 0.0};
  CHECK(rg_env_set_state(env, ok_state, 4) == RG_OK);
  double goal[2];
  CHECK(rg_env_state_to_goal(env, ok_state, 4, goal, 2) == RG_OK);
  CHECK(goal[0] == 0.5);
  int success = -1;
  CHECK(rg_env_is_success(env, ok_state, 4, goal, 2, &success) == RG_OK);
  CHECK(success == 1);
  rg_env_destroy(env);
}

TEST_CASE("training runs through the C surface") {
  const std::string out = fresh_dir("train");

  rg_run* bad = rg_run_create("{\"environment\": \"lineworld\", \"nope\": 1}");
  CHECK(bad == nullptr);
  CHECK(std::string(rg_last_error()).find("nope") != std::string::npos);

  rg_run* run = rg_run_create(kTinyConfig);
  REQUIRE(run != nullptr);
  CHECK(rg_run_set_output_dir(run, out.c_str()) == RG_OK);
  CHECK(rg_run_set_seed(run, 11) == RG_OK);
  CHECK(rg_run_execute(run) == RG_OK);
  rg_run_destroy(run);

  CHECK(std::filesystem::exists(out + "/metrics.csv"));
  CHECK(std::filesystem::exists(out + "/region_snapshots.jsonl"));
  CHECK(std::filesystem::exists(out + "/checkpoint_final.json"));

  double rate = -1.0;
  CHECK(rg_evaluate_checkpoint((out + "/checkpoint_final.json").c_str(),
                               "lineworld", nullptr, 50, 1, &rate) == RG_OK);
  CHECK(rate >= 0.0);
  CHECK(rate <= 1.0);

  // Dimension mismatch against another environment.
  CHECK(rg_evaluate_checkpoint((out + "/checkpoint_final.json").c_str(),
                               "reacher", nullptr, 50, 1, &rate) ==
        RG_ERR_DIMENSION);

  CHECK(rg_export_plot_data(out.c_str(), "variance") == RG_OK);
  CHECK(std::filesystem::exists(out + "/plot/variance.csv"));
  CHECK(rg_export_plot_data(out.c_str(), "nonsense") == RG_ERR_CONFIG);

  const std::string exported = out + "/region_export.jsonl";
  CHECK(rg_export_region(out.c_str(), -1, exported.c_str()) == RG_OK);
  CHECK(std::filesystem::exists(exported));

  std::filesystem::remove_all(out);
}

TEST_CASE("suites run through the C surface") {
  const std::string out = fresh_dir("suite");
  const std::string suite = std::string(R"({
    "base": )") + kTinyConfig + R"(,
    "variants": [
      {"name": "adaptive", "overrides": {"mode": "adaptive"}},
      {"name": "uniform", "overrides": {"mode": "uniform"}}
    ],
    "seeds": [1, 2]
  })";
  CHECK(rg_run_suite(suite.c_str(), out.c_str(), 2) == RG_OK);
  CHECK(std::filesystem::exists(out + "/adaptive/seed_1/metrics.csv"));
  CHECK(std::filesystem::exists(out + "/adaptive/aggregate.csv"));
  CHECK(std::filesystem::exists(out + "/uniform/aggregate.csv"));
  CHECK(std::filesystem::exists(out + "/summary.json"));
  std::filesystem::remove_all(out);
}

TEST_CASE("status names are stable") {
  CHECK(std::string(rg_status_name(RG_OK)) == "ok");
  CHECK(std::string(rg_status_name(RG_ERR_DIVERGED)) == "training diverged");
  CHECK(std::strlen(rg_version()) > 0);
}
