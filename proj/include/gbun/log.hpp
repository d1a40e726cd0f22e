#pragma once

#include <string>

namespace gbun::log {

enum class Level { Error = 0, Info = 1, Debug = 2 };

/// Current verbosity, read once from the GBUN_LOG environment variable
/// (error|info|debug, default info).
Level level();

void error(const std::string& msg);
void info(const std::string& msg);
void debug(const std::string& msg);

}  // namespace gbun::log
