// Command-line front end over the region_grow C API.
//
// Exit codes: 0 success, 1 usage/config error, 2 training diverged.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "region_grow.h"

namespace {

int fail(const std::string& msg) {
  std::cerr << "error: " << msg << std::endl;
  return 1;
}

bool slurp(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

int exit_code(rg_status status) {
  if (status == RG_OK) return 0;
  if (status == RG_ERR_DIVERGED) return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"region-grow: curriculum training of goal-conditioned policies"};
  app.require_subcommand(1);

  // train
  std::string train_config, train_out;
  int64_t train_seed = -1;
  auto* train = app.add_subcommand("train", "run a training configuration");
  train->add_option("--config", train_config, "training config JSON")->required();
  train->add_option("--seed", train_seed, "override rng_seed");
  train->add_option("--out", train_out, "override output directory");

  // eval
  std::string eval_checkpoint, eval_env, eval_env_config;
  int eval_pairs = 100;
  uint64_t eval_seed = 1;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--checkpoint", eval_checkpoint, "checkpoint JSON")->required();
  eval->add_option("--env", eval_env, "environment name")->required();
  eval->add_option("--env-config", eval_env_config, "environment config JSON file");
  eval->add_option("--pairs", eval_pairs, "number of start-goal pairs");
  eval->add_option("--seed", eval_seed, "evaluation rng seed");

  // suite
  std::string suite_config, suite_out;
  int suite_jobs = 1;
  auto* suite = app.add_subcommand("suite", "run variants x seeds and aggregate");
  suite->add_option("--config", suite_config, "suite config JSON")->required();
  suite->add_option("--out", suite_out, "output directory")->required();
  suite->add_option("--jobs", suite_jobs, "concurrent runs");

  // export-region
  std::string exr_run, exr_out;
  long exr_iteration = -1;
  auto* exr = app.add_subcommand("export-region", "export region snapshot records");
  exr->add_option("--run", exr_run, "run directory")->required();
  exr->add_option("--iteration", exr_iteration, "only this iteration (default all)");
  exr->add_option("--out", exr_out, "output JSONL file")->required();

  // plot-data
  std::string plot_run, plot_what;
  auto* plot = app.add_subcommand("plot-data", "write plot-ready CSV/JSONL");
  plot->add_option("--run", plot_run, "run directory")->required();
  plot->add_option("--what", plot_what, "curves | variance | region")->required();

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    std::string text;
    if (!slurp(train_config, text)) return fail("cannot read " + train_config);
    rg_run* run = rg_run_create(text.c_str());
    if (run == nullptr) return fail(rg_last_error());
    if (train_seed >= 0) rg_run_set_seed(run, static_cast<uint64_t>(train_seed));
    if (!train_out.empty()) rg_run_set_output_dir(run, train_out.c_str());
    const rg_status status = rg_run_execute(run);
    rg_run_destroy(run);
    if (status == RG_OK) {
      std::cout << "training complete" << std::endl;
      return 0;
    }
    std::cerr << "error: " << rg_last_error() << std::endl;
    return exit_code(status);
  }

  if (eval->parsed()) {
    if (eval_pairs < 1) return fail("--pairs must be >= 1");
    std::string env_cfg;
    if (!eval_env_config.empty() && !slurp(eval_env_config, env_cfg)) {
      return fail("cannot read " + eval_env_config);
    }
    double rate = 0.0;
    const rg_status status = rg_evaluate_checkpoint(
        eval_checkpoint.c_str(), eval_env.c_str(),
        env_cfg.empty() ? nullptr : env_cfg.c_str(), eval_pairs, eval_seed, &rate);
    if (status != RG_OK) return fail(rg_last_error());
    std::printf("success_rate=%g\n", rate);
    return 0;
  }

  if (suite->parsed()) {
    std::string text;
    if (!slurp(suite_config, text)) return fail("cannot read " + suite_config);
    const rg_status status =
        rg_run_suite(text.c_str(), suite_out.c_str(), suite_jobs);
    if (status != RG_OK) {
      std::cerr << "error: " << rg_last_error() << std::endl;
      return exit_code(status);
    }
    std::cout << "suite complete" << std::endl;
    return 0;
  }

  if (exr->parsed()) {
    const rg_status status =
        rg_export_region(exr_run.c_str(), exr_iteration, exr_out.c_str());
    if (status != RG_OK) return fail(rg_last_error());
    std::cout << "wrote " << exr_out << std::endl;
    return 0;
  }

  if (plot->parsed()) {
    const rg_status status =
        rg_export_plot_data(plot_run.c_str(), plot_what.c_str());
    if (status != RG_OK) return fail(rg_last_error());
    std::cout << "wrote " << plot_run << "/plot" << std::endl;
    return 0;
  }

  return 1;
}
