#include "rbb/markov_approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rbb/errors.hpp"

namespace rbb {
namespace {

std::size_t context_count_or_throw(int alphabet_size, int k) {
  std::size_t count = 1;
  for (int i = 0; i < k; ++i) {
    count *= static_cast<std::size_t>(alphabet_size);
    if (count > kMaxContexts) {
      throw ResourceCapError("context table of order " + std::to_string(k) +
                             " exceeds 2^20 contexts");
    }
  }
  return count;
}

double min_positive_observed(const OrderKKernel& kernel) {
  double delta = 1.0;
  bool any = false;
  for (std::size_t c = 0; c < kernel.context_count(); ++c) {
    if (!kernel.observed[c]) continue;
    for (double v : kernel.row(c)) {
      if (v > 0.0) {
        delta = std::min(delta, v);
        any = true;
      }
    }
  }
  return any ? delta : 0.0;
}

}  // namespace

bool OrderKKernel::complete() const {
  return std::all_of(observed.begin(), observed.end(), [](bool b) { return b; });
}

void OrderKKernel::require_complete() const {
  for (std::size_t c = 0; c < observed.size(); ++c) {
    if (!observed[c]) {
      throw std::invalid_argument("order-" + std::to_string(k) +
                                  " context " + std::to_string(c) +
                                  " was never observed");
    }
  }
}

std::size_t context_index(std::span<const Symbol> context, int alphabet_size) {
  std::size_t index = 0;
  for (Symbol s : context) index = index * alphabet_size + s;
  return index;
}

OrderKKernel canonical_from_kernel(const Kernel& kernel, int k) {
  const auto* fo = kernel.as_finite_order();
  if (fo == nullptr) {
    throw std::invalid_argument(
        "exact canonical approximation needs a finite-order kernel; "
        "estimate it from a trajectory instead");
  }
  if (k < 1) throw std::invalid_argument("approximation order must be >= 1");
  const int n = kernel.alphabet_size();
  const auto width = static_cast<std::size_t>(n);
  const std::size_t contexts = context_count_or_throw(n, std::max(k, fo->order));

  OrderKKernel out;
  out.alphabet_size = n;
  out.k = k;
  if (k >= fo->order) {
    const std::size_t source_rows = fo->table.size() / width;
    out.table.resize(contexts * width);
    for (std::size_t c = 0; c < contexts; ++c) {
      const std::size_t suffix = c % source_rows;
      std::copy_n(fo->table.begin() + static_cast<std::ptrdiff_t>(suffix * width),
                  width, out.table.begin() + static_cast<std::ptrdiff_t>(c * width));
    }
    out.observed.assign(contexts, true);
    out.delta_k = min_positive_observed(out);
    return out;
  }

  OrderKKernel source;
  source.alphabet_size = n;
  source.k = fo->order;
  source.table = fo->table;
  source.observed.assign(fo->table.size() / width, true);
  const std::vector<double> pi = stationary_distribution(source);

  const std::size_t rows = context_count_or_throw(n, k);
  out.table.assign(rows * width, 0.0);
  out.observed.assign(rows, true);
  std::vector<double> mass(rows, 0.0);
  for (std::size_t c = 0; c < pi.size(); ++c) {
    const std::size_t suffix = c % rows;
    mass[suffix] += pi[c];
    for (std::size_t b = 0; b < width; ++b) {
      out.table[suffix * width + b] += pi[c] * fo->table[c * width + b];
    }
  }
  for (std::size_t s = 0; s < rows; ++s) {
    double* row = out.table.data() + s * width;
    if (mass[s] > 0.0) {
      double total = 0.0;
      for (std::size_t b = 0; b < width; ++b) total += row[b];
      for (std::size_t b = 0; b < width; ++b) row[b] /= total;
    } else {
      out.observed[s] = false;
      std::fill(row, row + width, 1.0 / n);
    }
  }
  out.delta_k = min_positive_observed(out);
  return out;
}

OrderKKernel canonical_from_trajectory(const Trajectory& trajectory, int k) {
  if (k < 1) throw std::invalid_argument("approximation order must be >= 1");
  const int n = trajectory.alphabet_size;
  const auto width = static_cast<std::size_t>(n);
  const std::size_t rows = context_count_or_throw(n, k);
  const auto& x = trajectory.symbols;
  if (x.size() <= static_cast<std::size_t>(k)) {
    throw std::invalid_argument("trajectory has no transition out of a length-" +
                                std::to_string(k) + " context");
  }
  std::vector<double> counts(rows * width, 0.0);
  std::size_t context =
      context_index(std::span<const Symbol>(x.data(), static_cast<std::size_t>(k)), n);
  for (std::size_t t = static_cast<std::size_t>(k); t < x.size(); ++t) {
    counts[context * width + x[t]] += 1.0;
    context = (context * width + x[t]) % rows;
  }

  OrderKKernel out;
  out.alphabet_size = n;
  out.k = k;
  out.table.assign(rows * width, 0.0);
  out.observed.assign(rows, true);
  for (std::size_t c = 0; c < rows; ++c) {
    double total = 0.0;
    for (std::size_t b = 0; b < width; ++b) total += counts[c * width + b];
    for (std::size_t b = 0; b < width; ++b) {
      out.table[c * width + b] =
          total > 0.0 ? counts[c * width + b] / total : 1.0 / n;
    }
    out.observed[c] = total > 0.0;
  }
  out.delta_k = min_positive_observed(out);
  return out;
}

double stationarity_gap(const OrderKKernel& kernel, std::span<const double> pi) {
  const std::size_t rows = kernel.context_count();
  std::vector<double> next(rows, 0.0);
  for (std::size_t c = 0; c < rows; ++c) {
    if (pi[c] == 0.0) continue;
    const auto row = kernel.row(c);
    for (std::size_t b = 0; b < row.size(); ++b) {
      next[kernel.next_context(c, static_cast<Symbol>(b))] += pi[c] * row[b];
    }
  }
  double gap = 0.0;
  for (std::size_t c = 0; c < rows; ++c) gap += std::abs(next[c] - pi[c]);
  return gap;
}

std::vector<double> stationary_distribution(const OrderKKernel& kernel,
                                            double tol,
                                            std::size_t max_iterations) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const std::size_t rows = kernel.context_count();
  std::vector<double> pi(rows, 1.0 / static_cast<double>(rows));
  std::vector<double> next(rows);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t c = 0; c < rows; ++c) {
      const auto row = kernel.row(c);
      for (std::size_t b = 0; b < row.size(); ++b) {
        next[kernel.next_context(c, static_cast<Symbol>(b))] += pi[c] * row[b];
      }
    }
    double gap = 0.0;
    for (std::size_t c = 0; c < rows; ++c) gap += std::abs(next[c] - pi[c]);
    if (gap <= tol) {
      double total = 0.0;
      for (double v : pi) total += v;
      for (double& v : pi) v /= total;
      return pi;
    }
    double total = 0.0;
    for (double v : next) total += v;
    for (std::size_t c = 0; c < rows; ++c) pi[c] = next[c] / total;
  }
  throw ConvergenceError("power iteration did not reach the stationary law in " +
                         std::to_string(max_iterations) + " iterations");
}

double markov_mean(const OrderKKernel& kernel, const Observable& f) {
  const std::vector<double> pi = stationary_distribution(kernel);
  const auto width = static_cast<std::size_t>(kernel.alphabet_size);
  double mean = 0.0;
  for (std::size_t c = 0; c < pi.size(); ++c) {
    mean += pi[c] * f(static_cast<Symbol>(c % width));
  }
  return mean;
}

double stationary_mean(const Kernel& kernel, const Observable& f) {
  if (const auto* fo = kernel.as_finite_order()) {
    return markov_mean(canonical_from_kernel(kernel, fo->order), f);
  }
  const auto& g = *kernel.as_geometric_mixture();
  OrderKKernel one_step;
  one_step.alphabet_size = kernel.alphabet_size();
  one_step.k = 1;
  one_step.table = g.base;
  one_step.observed.assign(static_cast<std::size_t>(kernel.alphabet_size()), true);
  return markov_mean(one_step, f);
}

}  // namespace rbb
