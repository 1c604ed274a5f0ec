#pragma once

#include <string>

namespace visco {

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3, silent = 4 };

void set_log_level(LogLevel level);
LogLevel log_level();

void log_debug(const std::string& msg);
void log_info(const std::string& msg);
void log_warn(const std::string& msg);
void log_error(const std::string& msg);

}  // namespace visco
