#pragma once

#include <string_view>

namespace talkmine::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

void set_level(Level level);
Level level();
/// Parses "debug", "info", "warn", "error" or "off"; throws ConfigError otherwise.
Level parse_level(std::string_view name);

void write(Level level, std::string_view message);

inline void debug(std::string_view m) { write(Level::debug, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void warn(std::string_view m) { write(Level::warn, m); }

}  // namespace talkmine::log
