#pragma once

// Per-label training quota for a fraction given as the exact rational
// num/den, rounded half-up in integer arithmetic.

#include <cstddef>

namespace oracle {

inline std::size_t train_quota(std::size_t num, std::size_t den, std::size_t count) {
  return (2 * num * count + den) / (2 * den);
}

}  // namespace oracle
