#pragma once

#include <cstdint>

namespace rbb {

// floor(exp(alpha * k)); throws ResourceCapError above 2^53.
std::uint64_t block_count(double alpha, int k);

// Admissible range of alpha for the block-count schedule.
struct AdmissibilityWindow {
  double lower = 0.0;       // 5 ln(1/delta)
  double upper = 0.0;       // c - ln(1/delta), +infinity for finite memory
  bool infinite_order_ok = false;  // c > 18 ln(1/delta)
  double markov_lower = 0.0;  // 5 ln(1/delta_underbar)

  bool nonempty() const { return upper > lower; }
  bool contains(double alpha) const { return alpha > lower && alpha < upper; }
};

AdmissibilityWindow alpha_window(double delta, double c, double delta_underbar);

}  // namespace rbb
