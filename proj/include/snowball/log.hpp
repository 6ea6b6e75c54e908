#pragma once

#include <sstream>
#include <string>

namespace snowball {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

void set_log_level(LogLevel level);
LogLevel log_level();

/// Parse "error" | "warn" | "info" | "debug"; throws SchemaError otherwise.
LogLevel log_level_from_token(const std::string& token);

void log_message(LogLevel level, const std::string& message);

namespace detail {
inline void log_collect(std::ostringstream&) {}
template <class T, class... Rest>
void log_collect(std::ostringstream& os, const T& value, const Rest&... rest) {
  os << value;
  log_collect(os, rest...);
}
}  // namespace detail

template <class... Args>
void logf(LogLevel level, const Args&... args) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::ostringstream os;
  detail::log_collect(os, args...);
  log_message(level, os.str());
}

}  // namespace snowball
