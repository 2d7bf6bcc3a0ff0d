#include "hamflow/format.hpp"

#include <array>
#include <charconv>

namespace hamflow {

std::string format_real(double value, int significant_digits) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  std::array<char, 64> buffer{};
  const auto result =
      significant_digits > 0
          ? std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                          std::chars_format::general, significant_digits)
          : std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

std::string format_fixed(double value, int decimals) {
  if (value == 0.0) value = 0.0;
  std::array<char, 64> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                    std::chars_format::fixed, decimals);
  return std::string(buffer.data(), result.ptr);
}

}  // namespace hamflow
