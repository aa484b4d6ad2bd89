#pragma once

#include <string>

namespace rg {

// Projects run outputs into plot-ready files under <run_dir>/plot/.
// what: "curves" (per-iteration r_avg/eval_success, or the aggregate for a
// suite variant directory), "variance" (iteration, sigma) or "region"
// (snapshot records). Returns the path written.
std::string export_plot_data(const std::string& run_dir, const std::string& what);

// Writes region snapshot records (optionally a single iteration) as JSONL.
void export_region(const std::string& run_dir, long iteration,
                   const std::string& out_path);

}  // namespace rg
