#include "gbun/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace gbun::log {

static Level parse_env() {
  const char* v = std::getenv("GBUN_LOG");
  if (v == nullptr) return Level::Info;
  if (std::strcmp(v, "error") == 0) return Level::Error;
  if (std::strcmp(v, "debug") == 0) return Level::Debug;
  return Level::Info;
}

Level level() {
  static const Level lvl = parse_env();
  return lvl;
}

static void emit(const char* tag, const std::string& msg) {
  std::fprintf(stderr, "[gbun %s] %s\n", tag, msg.c_str());
}

void error(const std::string& msg) {
  emit("error", msg);
}

void info(const std::string& msg) {
  if (level() >= Level::Info) emit("info", msg);
}

void debug(const std::string& msg) {
  if (level() >= Level::Debug) emit("debug", msg);
}

}  // namespace gbun::log
