#pragma once

#include <string>

namespace khess {

/// Shortest decimal representation that round-trips to the same double;
/// "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double x);

}  // namespace khess
