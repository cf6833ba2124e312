#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbb/chain_model.hpp"

namespace rbb {

inline constexpr std::size_t kMaxContexts = std::size_t{1} << 20;

// Transition table of an order-k Markov chain. Row c holds the law of the
// next symbol after context c, contexts indexed in base-alphabet order with
// the oldest symbol most significant.
struct OrderKKernel {
  int alphabet_size = 2;
  int k = 1;
  std::vector<double> table;
  // False for rows never observed when estimated from data; such rows are
  // uniform placeholders.
  std::vector<bool> observed;
  // Minimum positive entry over observed rows.
  double delta_k = 0.0;

  std::size_t context_count() const { return table.size() / alphabet_size; }
  std::span<const double> row(std::size_t context) const {
    return std::span<const double>(table).subspan(context * alphabet_size,
                                                  alphabet_size);
  }
  std::size_t next_context(std::size_t context, Symbol b) const {
    return (context * alphabet_size + b) % context_count();
  }
  bool complete() const;
  // Throws std::invalid_argument naming an unobserved context.
  void require_complete() const;
};

// Index of the length-k window ending at `context.back()`.
std::size_t context_index(std::span<const Symbol> context, int alphabet_size);

// Exact order-k approximation of a FiniteOrder kernel. For k >= order each
// row copies the row of its length-order suffix; for k < order rows average
// over the stationary law of the unseen prefix.
OrderKKernel canonical_from_kernel(const Kernel& kernel, int k);

// Empirical transition frequencies count(c b) / count(c .).
OrderKKernel canonical_from_trajectory(const Trajectory& trajectory, int k);

// Stationary law on contexts by power iteration. Stops when the L1 gap
// between pi P and pi is at most tol; throws ConvergenceError after
// `max_iterations`.
std::vector<double> stationary_distribution(const OrderKKernel& kernel,
                                            double tol = 1e-12,
                                            std::size_t max_iterations = 1'000'000);

// L1 distance between pi P and pi.
double stationarity_gap(const OrderKKernel& kernel, std::span<const double> pi);

// Stationary mean of f(X_1) for the order-k chain.
double markov_mean(const OrderKKernel& kernel, const Observable& f);

// Stationary mean of f for an infinite-order kernel. A GeometricMixture is
// stationary exactly when the one-step law is stationary for its base table.
double stationary_mean(const Kernel& kernel, const Observable& f);

}  // namespace rbb
