#pragma once

#include <cstdint>
#include <stdexcept>

namespace qx {

struct WatchdogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Function-evaluation meter in the paper's cost unit (one draw, one
// distribution evaluation, one exp/sum each count 1). `limit` of zero
// disables the watchdog.
struct Budget {
  std::uint64_t used = 0;
  std::uint64_t limit = 0;

  void charge(std::uint64_t n = 1) {
    used += n;
    if (limit != 0 && used > limit)
      throw WatchdogError("function-evaluation watchdog tripped");
  }
};

}  // namespace qx
