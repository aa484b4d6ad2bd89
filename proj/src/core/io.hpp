#pragma once

#include <optional>
#include <string>

namespace rg {

// Shortest round-trip decimal representation; keeps emitted files
// deterministic for a given build.
std::string fmt_double(double v);
std::string fmt_optional(const std::optional<double>& v);
std::string fmt_optional(const std::optional<int>& v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
void append_file(const std::string& path, const std::string& content);
void ensure_dir(const std::string& path);
bool file_exists(const std::string& path);

}  // namespace rg
