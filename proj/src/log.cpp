#include "snowball/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

#include "snowball/errors.hpp"

namespace snowball {

namespace {
std::atomic<LogLevel> g_level{LogLevel::Warn};
std::mutex g_mutex;

const char* level_name(LogLevel l) {
  switch (l) {
    case LogLevel::Error: return "error";
    case LogLevel::Warn: return "warn";
    case LogLevel::Info: return "info";
    case LogLevel::Debug: return "debug";
  }
  return "?";
}
}  // namespace

void set_log_level(LogLevel level) { g_level.store(level); }
LogLevel log_level() { return g_level.load(); }

LogLevel log_level_from_token(const std::string& token) {
  if (token == "error") return LogLevel::Error;
  if (token == "warn") return LogLevel::Warn;
  if (token == "info") return LogLevel::Info;
  if (token == "debug") return LogLevel::Debug;
  throw SchemaError("unknown log level: \"" + token + "\"");
}

void log_message(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > static_cast<int>(g_level.load())) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[" << level_name(level) << "] " << message << "\n";
}

}  // namespace snowball
