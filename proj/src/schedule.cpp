#include "rbb/schedule.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rbb/errors.hpp"

namespace rbb {

std::uint64_t block_count(double alpha, int k) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const double value = std::floor(std::exp(alpha * static_cast<double>(k)));
  if (!(value <= 0x1.0p53)) {
    throw ResourceCapError("block count exp(alpha k) exceeds 2^53");
  }
  return static_cast<std::uint64_t>(value);
}

AdmissibilityWindow alpha_window(double delta, double c, double delta_underbar) {
  if (!(delta > 0.0 && delta <= 1.0) ||
      !(delta_underbar > 0.0 && delta_underbar <= 1.0)) {
    throw std::invalid_argument("delta values must lie in (0, 1]");
  }
  const double log_inv = std::log(1.0 / delta);
  AdmissibilityWindow w;
  w.lower = 5.0 * log_inv;
  if (std::isinf(c)) {
    w.upper = std::numeric_limits<double>::infinity();
    w.infinite_order_ok = true;
  } else {
    w.upper = c - log_inv;
    w.infinite_order_ok = c > 18.0 * log_inv;
  }
  w.markov_lower = 5.0 * std::log(1.0 / delta_underbar);
  return w;
}

}  // namespace rbb
