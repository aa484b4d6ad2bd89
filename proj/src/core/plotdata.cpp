#include "core/plotdata.hpp"

#include <sstream>
#include <vector>

#include <json.hpp>

#include "core/error.hpp"
#include "core/io.hpp"

namespace rg {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(s);
  while (std::getline(is, field, sep)) out.push_back(field);
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) rows.push_back(split(line, ','));
  }
  return rows;
}

}  // namespace

std::string export_plot_data(const std::string& run_dir, const std::string& what) {
  const std::string metrics_path = run_dir + "/metrics.csv";
  const std::string aggregate_path = run_dir + "/aggregate.csv";
  const std::string plot_dir = run_dir + "/plot";

  if (what == "variance") {
    if (!file_exists(metrics_path)) {
      throw IoError("no metrics.csv in " + run_dir);
    }
    const auto rows = read_csv(metrics_path);
    std::string csv = "iteration,sigma\n";
    for (size_t i = 1; i < rows.size(); ++i) {
      csv += rows[i][0] + "," + rows[i][2] + "\n";
    }
    ensure_dir(plot_dir);
    const std::string out = plot_dir + "/variance.csv";
    write_file(out, csv);
    return out;
  }

  if (what == "curves") {
    ensure_dir(plot_dir);
    const std::string out = plot_dir + "/curves.csv";
    if (file_exists(aggregate_path)) {
      write_file(out, read_file(aggregate_path));  // suite variant directory
      return out;
    }
    if (!file_exists(metrics_path)) {
      throw IoError("no metrics.csv or aggregate.csv in " + run_dir);
    }
    const auto rows = read_csv(metrics_path);
    std::string csv = "iteration,r_avg,eval_success\n";
    for (size_t i = 1; i < rows.size(); ++i) {
      csv += rows[i][0] + "," + rows[i][1] + "," + rows[i][6] + "\n";
    }
    write_file(out, csv);
    return out;
  }

  if (what == "region") {
    const std::string snap = run_dir + "/region_snapshots.jsonl";
    if (!file_exists(snap)) {
      throw IoError("no region snapshots in " + run_dir +
                    " (uniform-mode runs have none)");
    }
    ensure_dir(plot_dir);
    const std::string out = plot_dir + "/region.jsonl";
    write_file(out, read_file(snap));
    return out;
  }

  throw ConfigError("unknown plot kind '" + what +
                    "' (expected curves, variance or region)");
}

void export_region(const std::string& run_dir, long iteration,
                   const std::string& out_path) {
  const std::string snap = run_dir + "/region_snapshots.jsonl";
  if (!file_exists(snap)) {
    throw IoError("no region snapshots in " + run_dir +
                  " (uniform-mode runs have none)");
  }
  const std::string text = read_file(snap);
  if (iteration < 0) {
    write_file(out_path, text);
    return;
  }
  std::string out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto rec = nlohmann::json::parse(line);
    if (rec.at("iteration").get<long>() == iteration) {
      out += line;
      out += '\n';
    }
  }
  if (out.empty()) {
    throw IoError("no snapshot records for iteration " + std::to_string(iteration));
  }
  write_file(out_path, out);
}

}  // namespace rg
