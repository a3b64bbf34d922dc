#pragma once

#include <cstddef>

namespace oneshot {

inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 20;

// Largest composite dimension that dense enumeration will build.
// Reads ONESHOT_DIM_CAP from the environment on every call; falls back to
// kDefaultDimensionCap when unset. Throws InvalidInput on an unparsable value.
std::size_t dimension_cap();

// Throws CapacityExceeded("dimension too large ...") when dim > dimension_cap().
void require_within_dimension_cap(std::size_t dim, const char* what);

// Selects between the serial reference loop and the OpenMP kernel. Both
// paths produce bit-identical results.
enum class Execution { serial, parallel };

}  // namespace oneshot
