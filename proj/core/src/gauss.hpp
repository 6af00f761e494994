#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "pwret/types.hpp"

namespace pwret::detail {

// Deterministic standard-normal stream: mt19937_64 bits mapped to (0,1) and
// fed through Box-Muller by hand. std::normal_distribution is not pinned
// across standard libraries; this is, which keeps seeded artifacts portable.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

 private:
  // Strictly inside (0,1): top 53 bits, offset by half an ulp.
  double uniform01() {
    return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace pwret::detail
