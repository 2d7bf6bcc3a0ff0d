#pragma once

#include <string>

namespace hamflow {

// Locale-independent decimal text. `significant_digits` == 0 gives the
// shortest text that parses back to the same double.
std::string format_real(double value, int significant_digits = 0);

// Fixed notation with the given number of decimals.
std::string format_fixed(double value, int decimals);

}  // namespace hamflow
