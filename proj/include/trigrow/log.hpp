#pragma once

#include <string>

namespace trigrow {

// Logging is controlled by the TRIGROW_LOG environment variable: unset, empty,
// or "0" silences it; anything else sends progress lines to stderr.
bool log_enabled();

// Writes "[trigrow] <message>\n" to stderr when logging is enabled.
void log(const std::string& message);

}  // namespace trigrow
