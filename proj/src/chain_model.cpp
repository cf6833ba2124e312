#include "rbb/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace rbb {
namespace {

constexpr std::size_t kMaxTableRows = std::size_t{1} << 20;

std::size_t checked_power(int base, int exponent) {
  std::size_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    result *= static_cast<std::size_t>(base);
    if (result > kMaxTableRows) {
      throw std::invalid_argument("context table exceeds 2^20 rows");
    }
  }
  return result;
}

void validate_rows(std::span<const double> table, int alphabet_size) {
  const auto width = static_cast<std::size_t>(alphabet_size);
  for (std::size_t row = 0; row * width < table.size(); ++row) {
    validate_probability_vector(table.subspan(row * width, width));
  }
}

// Mixture law with lags past the start of `past` reading `tail`.
std::vector<double> mixture_law(const GeometricMixture& g, int alphabet_size,
                                std::span<const Symbol> past, Symbol tail) {
  const auto width = static_cast<std::size_t>(alphabet_size);
  std::vector<double> p(width, 0.0);
  double weight = 1.0 - g.theta;  // weight of lag 1
  double remaining = 1.0;         // theta^(l-1)
  const std::size_t n = past.size();
  for (std::size_t l = 1; l <= n && weight > 0.0; ++l) {
    const double* row = g.base.data() + past[n - l] * width;
    for (std::size_t a = 0; a < width; ++a) p[a] += weight * row[a];
    remaining *= g.theta;
    weight *= g.theta;
  }
  if (remaining > 0.0) {
    const double* row = g.base.data() + static_cast<std::size_t>(tail) * width;
    for (std::size_t a = 0; a < width; ++a) p[a] += remaining * row[a];
  }
  return p;
}

}  // namespace

Alphabet::Alphabet(int size) : size_(size) {
  if (size < 2 || size > kMaxAlphabetSize) {
    throw std::invalid_argument("alphabet size must be in [2, 64]");
  }
}

Observable::Observable(std::vector<double> values) : values_(std::move(values)) {
  Alphabet{static_cast<int>(values_.size())};
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("observable values must be finite");
    }
  }
}

Observable Observable::identity(int alphabet_size) {
  std::vector<double> v(static_cast<std::size_t>(alphabet_size));
  for (std::size_t a = 0; a < v.size(); ++a) v[a] = static_cast<double>(a);
  return Observable(std::move(v));
}

bool Observable::is_constant() const {
  return std::all_of(values_.begin(), values_.end(),
                     [&](double v) { return v == values_.front(); });
}

double Observable::max_deviation(double center) const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v - center));
  return m;
}

Kernel Kernel::finite_order(int alphabet_size, int order,
                            std::vector<double> table) {
  Alphabet{alphabet_size};
  if (order < 1) throw std::invalid_argument("order must be at least 1");
  const std::size_t rows = checked_power(alphabet_size, order);
  if (table.size() != rows * static_cast<std::size_t>(alphabet_size)) {
    throw std::invalid_argument("finite-order table has " +
                                std::to_string(table.size()) +
                                " entries, expected " +
                                std::to_string(rows * alphabet_size));
  }
  validate_rows(table, alphabet_size);
  return Kernel(alphabet_size, FiniteOrder{order, std::move(table)});
}

Kernel Kernel::geometric_mixture(int alphabet_size, double theta,
                                 std::vector<double> base) {
  Alphabet{alphabet_size};
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("mixture decay must lie in (0, 1)");
  }
  const auto n = static_cast<std::size_t>(alphabet_size);
  if (base.size() != n * n) {
    throw std::invalid_argument("mixture base table must be square");
  }
  validate_rows(base, alphabet_size);
  return Kernel(alphabet_size, GeometricMixture{theta, std::move(base)});
}

void validate_probability_vector(std::span<const double> p) {
  if (p.empty()) throw std::invalid_argument("empty probability vector");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("probability entries must be finite and >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("probability vector does not sum to 1");
  }
}

std::vector<double> conditional_distribution(const Kernel& kernel,
                                             std::span<const Symbol> context) {
  if (context.empty()) throw std::invalid_argument("empty context");
  for (Symbol s : context) {
    if (s >= kernel.alphabet_size()) {
      throw std::invalid_argument("context symbol outside the alphabet");
    }
  }
  if (const auto* fo = kernel.as_finite_order()) {
    if (context.size() < static_cast<std::size_t>(fo->order)) {
      throw std::invalid_argument("context shorter than the kernel order");
    }
    return law_given_realized_past(kernel, context);
  }
  return mixture_law(*kernel.as_geometric_mixture(), kernel.alphabet_size(),
                     context, context.front());
}

std::vector<double> law_given_realized_past(const Kernel& kernel,
                                            std::span<const Symbol> past,
                                            Symbol prehistory) {
  const auto width = static_cast<std::size_t>(kernel.alphabet_size());
  if (const auto* fo = kernel.as_finite_order()) {
    std::size_t row = 0;
    const auto order = static_cast<std::size_t>(fo->order);
    for (std::size_t i = 0; i < order; ++i) {
      // i-th symbol of the length-order context, oldest first.
      const std::size_t back = order - i;
      const Symbol s = back <= past.size() ? past[past.size() - back] : prehistory;
      row = row * width + s;
    }
    const auto first = fo->table.begin() + static_cast<std::ptrdiff_t>(row * width);
    return {first, first + static_cast<std::ptrdiff_t>(width)};
  }
  return mixture_law(*kernel.as_geometric_mixture(), kernel.alphabet_size(),
                     past, prehistory);
}

double delta_lower_bound(const Kernel& kernel) {
  if (const auto* g = kernel.as_geometric_mixture()) {
    return *std::min_element(g->base.begin(), g->base.end());
  }
  double delta = 1.0;
  for (double v : kernel.as_finite_order()->table) {
    if (v > 0.0) delta = std::min(delta, v);
  }
  return delta;
}

double table_spread(std::span<const double> table, int alphabet_size) {
  const auto n = static_cast<std::size_t>(alphabet_size);
  double spread = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    double lo = 1.0, hi = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      lo = std::min(lo, table[b * n + a]);
      hi = std::max(hi, table[b * n + a]);
    }
    spread = std::max(spread, hi - lo);
  }
  return spread;
}

double continuity_rate(const Kernel& kernel, int l) {
  if (l < 1) throw std::invalid_argument("continuity rate needs l >= 1");
  const int n = kernel.alphabet_size();
  if (const auto* g = kernel.as_geometric_mixture()) {
    return std::pow(g->theta, l) * table_spread(g->base, n);
  }
  const auto& fo = *kernel.as_finite_order();
  if (l >= fo.order) return 0.0;
  // Contexts sharing their last l symbols share the index modulo n^l.
  const auto width = static_cast<std::size_t>(n);
  std::size_t groups = 1;
  for (int i = 0; i < l; ++i) groups *= width;
  const std::size_t rows = fo.table.size() / width;
  std::vector<double> lo(groups * width, 1.0), hi(groups * width, 0.0);
  for (std::size_t row = 0; row < rows; ++row) {
    const std::size_t g = row % groups;
    for (std::size_t a = 0; a < width; ++a) {
      const double v = fo.table[row * width + a];
      lo[g * width + a] = std::min(lo[g * width + a], v);
      hi[g * width + a] = std::max(hi[g * width + a], v);
    }
  }
  double rate = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) rate = std::max(rate, hi[i] - lo[i]);
  return rate;
}

double mixing_exponent(const Kernel& kernel) {
  if (const auto* g = kernel.as_geometric_mixture()) {
    return std::log(1.0 / g->theta);
  }
  return std::numeric_limits<double>::infinity();
}

double long_run_variance_estimate(std::span<const Symbol> trajectory,
                                  const Observable& f, int lag_window) {
  if (lag_window < 0) throw std::invalid_argument("negative lag window");
  const std::size_t n = trajectory.size();
  if (n <= 10 * (static_cast<std::size_t>(lag_window) + 1)) {
    throw std::invalid_argument("trajectory too short for the lag window");
  }
  if (f.is_constant()) return 0.0;
  std::vector<double> y(n);
  double mean = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    y[t] = f(trajectory[t]);
    mean += y[t];
  }
  mean /= static_cast<double>(n);
  for (double& v : y) v -= mean;
  double total = 0.0;
  for (int j = 0; j <= lag_window; ++j) {
    double acc = 0.0;
    for (std::size_t t = 0; t + j < n; ++t) acc += y[t] * y[t + j];
    const double gamma = acc / static_cast<double>(n);
    total += j == 0 ? gamma : 2.0 * gamma;
  }
  return total;
}

HypothesisReport check_hypotheses(const Kernel& kernel, double sigma2_estimate) {
  HypothesisReport r;
  r.delta = delta_lower_bound(kernel);
  r.c = mixing_exponent(kernel);
  r.sigma2_estimate = sigma2_estimate;
  r.h1_ok = r.delta > 0.0;
  r.h2_ok = r.c > 0.0;
  r.h3_ok = sigma2_estimate > 0.0;
  return r;
}

}  // namespace rbb
