#pragma once

#include <string>

namespace su2 {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

}  // namespace su2
