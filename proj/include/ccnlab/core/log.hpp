#pragma once

#include <atomic>
#include <iostream>
#include <mutex>
#include <string>

namespace ccnlab {

enum class LogLevel { quiet = 0, warning = 1, info = 2 };

inline std::atomic<LogLevel>& log_level() {
  static std::atomic<LogLevel> level{LogLevel::warning};
  return level;
}

inline void log_message(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) > static_cast<int>(log_level().load())) return;
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::cerr << (level == LogLevel::warning ? "[warn] " : "[info] ") << msg << '\n';
}

inline void log_warning(const std::string& msg) { log_message(LogLevel::warning, msg); }
inline void log_info(const std::string& msg) { log_message(LogLevel::info, msg); }

}  // namespace ccnlab
