#include "talkmine/log.hpp"

#include <atomic>
#include <cstdio>
#include <string>

#include "talkmine/error.hpp"

namespace talkmine::log {

namespace {

std::atomic<Level> g_level{Level::warn};

const char* label(Level l) {
  switch (l) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warn";
    case Level::error: return "error";
    case Level::off: return "off";
  }
  return "?";
}

}  // namespace

void set_level(Level level) { g_level.store(level); }

Level level() { return g_level.load(); }

Level parse_level(std::string_view name) {
  for (auto l : {Level::debug, Level::info, Level::warn, Level::error, Level::off}) {
    if (name == label(l)) return l;
  }
  throw ConfigError("unknown log level '" + std::string(name) + "'");
}

void write(Level level, std::string_view message) {
  if (level < g_level.load() || level == Level::off) return;
  std::fprintf(stderr, "[%s] %.*s\n", label(level), static_cast<int>(message.size()), message.data());
}

}  // namespace talkmine::log
