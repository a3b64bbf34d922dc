#include "oneshot/config.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>

#include "oneshot/error.hpp"

namespace oneshot {

std::size_t dimension_cap() {
  const char* raw = std::getenv("ONESHOT_DIM_CAP");
  if (raw == nullptr || *raw == '\0') return kDefaultDimensionCap;
  std::size_t cap = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, cap);
  if (ec != std::errc{} || ptr != end || cap == 0) {
    throw InvalidInput(std::string("ONESHOT_DIM_CAP: expected a positive integer, got '") + raw + "'");
  }
  return cap;
}

void require_within_dimension_cap(std::size_t dim, const char* what) {
  const std::size_t cap = dimension_cap();
  if (dim > cap) {
    throw CapacityExceeded(std::string("dimension too large: ") + what + " needs " + std::to_string(dim) +
                           " entries, cap is " + std::to_string(cap));
  }
}

}  // namespace oneshot
