#include "convbrowse/log.hpp"

#include <iostream>
#include <mutex>

namespace convbrowse {

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

LogSink& sink() {
  static LogSink s = [](LogLevel level, std::string_view msg) {
    if (level < LogLevel::Warning) return;
    std::cerr << (level == LogLevel::Warning ? "warning: " : "error: ") << msg << '\n';
  };
  return s;
}

}  // namespace

LogSink set_log_sink(LogSink s) {
  std::lock_guard lock(sink_mutex());
  std::swap(sink(), s);
  return s;
}

void log(LogLevel level, std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) sink()(level, message);
}

}  // namespace convbrowse
