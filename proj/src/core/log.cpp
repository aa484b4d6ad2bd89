#include "core/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace rg {
namespace {

LogLevel g_level = LogLevel::Error;
std::once_flag g_init;

void init_from_env() {
  const char* v = std::getenv("REGION_GROW_LOG");
  if (v == nullptr) return;
  if (std::strcmp(v, "debug") == 0) {
    g_level = LogLevel::Debug;
  } else if (std::strcmp(v, "info") == 0) {
    g_level = LogLevel::Info;
  } else {
    g_level = LogLevel::Error;
  }
}

void emit(const char* tag, const std::string& msg) {
  std::fprintf(stderr, "[region-grow %s] %s\n", tag, msg.c_str());
}

}  // namespace

LogLevel log_level() {
  std::call_once(g_init, init_from_env);
  return g_level;
}

void set_log_level(LogLevel level) {
  std::call_once(g_init, init_from_env);
  g_level = level;
}

void log_error(const std::string& msg) { emit("error", msg); }

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) emit("info", msg);
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug) emit("debug", msg);
}

}  // namespace rg
