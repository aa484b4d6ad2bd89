#pragma once

#include <string>

namespace rg {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Level comes from REGION_GROW_LOG (error|info|debug) on first use;
// set_log_level overrides it for the process.
LogLevel log_level();
void set_log_level(LogLevel level);

void log_error(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace rg
