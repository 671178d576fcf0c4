#include "trigrow/log.hpp"

#include <cstdlib>
#include <iostream>

namespace trigrow {

bool log_enabled() {
  static const bool enabled = [] {
    const char* value = std::getenv("TRIGROW_LOG");
    return value != nullptr && value[0] != '\0' &&
           !(value[0] == '0' && value[1] == '\0');
  }();
  return enabled;
}

void log(const std::string& message) {
  if (log_enabled()) std::cerr << "[trigrow] " << message << "\n";
}

}  // namespace trigrow
