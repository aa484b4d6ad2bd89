#include "core/suite.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "core/error.hpp"
#include "core/io.hpp"
#include "core/log.hpp"

namespace rg {

using nlohmann::json;

SuiteConfig parse_suite_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("suite config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("suite config: expected a JSON object");
  for (const auto& item : j.items()) {
    if (item.key() != "base" && item.key() != "variants" && item.key() != "seeds") {
      throw ConfigError("suite config: unknown key '" + item.key() + "'");
    }
  }
  SuiteConfig cfg;
  if (!j.contains("base") || !j.at("base").is_object()) {
    throw ConfigError("suite config: 'base' object is required");
  }
  cfg.base = j.at("base");
  if (!j.contains("variants") || !j.at("variants").is_array() ||
      j.at("variants").empty()) {
    throw ConfigError("suite config: non-empty 'variants' array is required");
  }
  for (const auto& v : j.at("variants")) {
    SuiteVariant variant;
    if (!v.is_object() || !v.contains("name")) {
      throw ConfigError("suite config: each variant needs a 'name'");
    }
    variant.name = v.at("name").get<std::string>();
    if (v.contains("overrides")) variant.overrides = v.at("overrides");
    for (const auto& item : v.items()) {
      if (item.key() != "name" && item.key() != "overrides") {
        throw ConfigError("suite config: unknown variant key '" + item.key() + "'");
      }
    }
    cfg.variants.push_back(std::move(variant));
  }
  if (!j.contains("seeds") || !j.at("seeds").is_array() || j.at("seeds").empty()) {
    throw ConfigError("suite config: non-empty 'seeds' array is required");
  }
  for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<uint64_t>());
  return cfg;
}

namespace {

json merge_config(const json& base, const json& overrides) {
  json merged = base;
  for (const auto& item : overrides.items()) {
    if (item.value().is_object() && merged.contains(item.key()) &&
        merged.at(item.key()).is_object()) {
      for (const auto& inner : item.value().items()) {
        merged[item.key()][inner.key()] = inner.value();
      }
    } else {
      merged[item.key()] = item.value();
    }
  }
  return merged;
}

struct SeriesStats {
  double mean = 0.0;
  double sd = 0.0;
  int n = 0;
};

SeriesStats stats_over(const std::vector<double>& xs) {
  SeriesStats s;
  s.n = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= xs.size();
  for (double x : xs) s.sd += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(s.sd / xs.size());
  return s;
}

void write_aggregate(const std::string& path,
                     const std::vector<std::vector<MetricsRow>>& runs) {
  std::string csv = "iteration,metric,mean,std,n_seeds\n";
  size_t max_iter = 0;
  for (const auto& run : runs) max_iter = std::max(max_iter, run.size());
  for (size_t t = 0; t < max_iter; ++t) {
    std::vector<double> r_avg, eval;
    for (const auto& run : runs) {
      if (t >= run.size()) continue;
      r_avg.push_back(run[t].r_avg);
      if (run[t].eval_success.has_value()) eval.push_back(*run[t].eval_success);
    }
    const int iteration = static_cast<int>(t) + 1;
    if (!r_avg.empty()) {
      const SeriesStats s = stats_over(r_avg);
      csv += std::to_string(iteration) + ",r_avg," + fmt_double(s.mean) + "," +
             fmt_double(s.sd) + "," + std::to_string(s.n) + "\n";
    }
    if (!eval.empty()) {
      const SeriesStats s = stats_over(eval);
      csv += std::to_string(iteration) + ",eval_success," + fmt_double(s.mean) +
             "," + fmt_double(s.sd) + "," + std::to_string(s.n) + "\n";
    }
  }
  write_file(path, csv);
}

}  // namespace

std::vector<SuiteRunStatus> run_suite(const SuiteConfig& cfg,
                                      const std::string& out_dir, int jobs) {
  if (cfg.variants.empty() || cfg.seeds.empty()) {
    throw ConfigError("suite needs at least one variant and one seed");
  }
  ensure_dir(out_dir);

  struct Task {
    size_t variant_idx;
    size_t seed_idx;
  };
  std::vector<Task> tasks;
  for (size_t v = 0; v < cfg.variants.size(); ++v) {
    for (size_t s = 0; s < cfg.seeds.size(); ++s) tasks.push_back({v, s});
  }

  std::vector<SuiteRunStatus> statuses(tasks.size());
  std::vector<std::vector<std::vector<MetricsRow>>> metrics(cfg.variants.size());
  for (auto& m : metrics) m.resize(cfg.seeds.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      const auto [v, s] = tasks[k];
      const std::string variant = cfg.variants[v].name;
      const uint64_t seed = cfg.seeds[s];
      SuiteRunStatus status;
      status.variant = variant;
      status.seed = seed;
      try {
        json cj = merge_config(cfg.base, cfg.variants[v].overrides);
        cj["rng_seed"] = seed;
        cj["output_dir"] =
            out_dir + "/" + variant + "/seed_" + std::to_string(seed);
        const TrainConfig tc = parse_train_config(cj);
        const TrainResult res = train(tc);
        status.ok = !res.diverged;
        status.diverged = res.diverged;
        metrics[v][s] = res.metrics;
      } catch (const std::exception& e) {
        status.ok = false;
        status.error = e.what();
        log_error("suite run " + variant + "/seed_" + std::to_string(seed) +
                  " failed: " + e.what());
      }
      statuses[k] = status;
    }
  };

  const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (size_t v = 0; v < cfg.variants.size(); ++v) {
    std::vector<std::vector<MetricsRow>> ok_runs;
    for (size_t s = 0; s < cfg.seeds.size(); ++s) {
      if (!metrics[v][s].empty()) ok_runs.push_back(metrics[v][s]);
    }
    if (!ok_runs.empty()) {
      write_aggregate(out_dir + "/" + cfg.variants[v].name + "/aggregate.csv",
                      ok_runs);
    }
  }

  json summary = json::array();
  for (const auto& st : statuses) {
    summary.push_back({{"variant", st.variant},
                       {"seed", st.seed},
                       {"ok", st.ok},
                       {"diverged", st.diverged},
                       {"error", st.error}});
  }
  write_file(out_dir + "/summary.json", summary.dump(2) + "\n");
  return statuses;
}

}  // namespace rg
