#pragma once

#include <string>

namespace threebody {

/// Shortest decimal representation that round-trips the 64-bit value.
std::string format_double(double v);

}  // namespace threebody
