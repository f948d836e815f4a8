#pragma once

#include <string>

namespace kge {

// Shortest decimal string that round-trips to the same double. Infinities
// print as "inf"/"-inf".
std::string format_shortest(double value);

}  // namespace kge
