#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace convbrowse {

enum class LogLevel { Debug, Info, Warning, Error };

using LogSink = std::function<void(LogLevel, std::string_view)>;

// Replaces the process-wide sink (default: warnings and errors to stderr).
// Returns the previous sink so tests can restore it.
LogSink set_log_sink(LogSink sink);

void log(LogLevel level, std::string_view message);
inline void log_warning(std::string_view message) { log(LogLevel::Warning, message); }
inline void log_error(std::string_view message) { log(LogLevel::Error, message); }

}  // namespace convbrowse
