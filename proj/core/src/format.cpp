#include "kge/format.hpp"

#include <charconv>
#include <cmath>

namespace kge {

std::string format_shortest(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace kge
