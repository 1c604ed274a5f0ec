#include "visco/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace visco {

namespace {
std::atomic<int> g_level{static_cast<int>(LogLevel::warn)};
std::mutex g_mutex;

void emit(LogLevel level, const char* tag, const std::string& msg) {
  if (static_cast<int>(level) < g_level.load()) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[visco " << tag << "] " << msg << '\n';
}
}  // namespace

void set_log_level(LogLevel level) { g_level.store(static_cast<int>(level)); }
LogLevel log_level() { return static_cast<LogLevel>(g_level.load()); }

void log_debug(const std::string& msg) { emit(LogLevel::debug, "debug", msg); }
void log_info(const std::string& msg) { emit(LogLevel::info, "info", msg); }
void log_warn(const std::string& msg) { emit(LogLevel::warn, "warn", msg); }
void log_error(const std::string& msg) { emit(LogLevel::error, "error", msg); }

}  // namespace visco
