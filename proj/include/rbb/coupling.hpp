#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rbb/chain_model.hpp"
#include "rbb/markov_approx.hpp"
#include "rbb/rng.hpp"

namespace rbb {

struct CouplingDraw {
  Symbol x = 0;
  Symbol y = 0;
  bool agreed = true;
};

double total_variation(std::span<const double> p, std::span<const double> q);

// One draw from the maximal coupling of p and q: x ~ p, y ~ q and
// P(x != y) = TV(p, q). With probability sum_a min(p_a, q_a) both come from
// the normalized overlap, otherwise x from (p - q)_+ and y from (q - p)_+.
CouplingDraw maximal_coupling_step(std::span<const double> p,
                                   std::span<const double> q, Rng& rng);

// An infinite-order trajectory and its order-k approximation driven from a
// common burned-in past, one maximal coupling step per position.
struct CoupledPair {
  Trajectory x;
  Trajectory y;
  // Smallest one-based t with x_t != y_t.
  std::optional<std::size_t> first_discrepancy;
};

CoupledPair coupled_pair_trajectories(const Kernel& kernel,
                                      const OrderKKernel& approx, std::size_t n,
                                      std::size_t burn_in, SeedSpec seed);

// Exact approximation for finite-order kernels, otherwise estimated from a
// trajectory of `estimate_length` symbols. The result covers every context.
OrderKKernel canonical_approximation(const Kernel& kernel, int k,
                                     std::size_t estimate_length, SeedSpec seed);

// First discrepancy position of each replicate pair over `horizon` steps,
// 0 when the pair agrees throughout. Replicate i uses stream_id i.
std::vector<std::size_t> first_discrepancies(const Kernel& kernel,
                                             const OrderKKernel& approx,
                                             std::size_t horizon,
                                             std::size_t replicates,
                                             std::size_t burn_in,
                                             std::uint64_t master_seed);
std::vector<std::size_t> first_discrepancies_serial(const Kernel& kernel,
                                                    const OrderKKernel& approx,
                                                    std::size_t horizon,
                                                    std::size_t replicates,
                                                    std::size_t burn_in,
                                                    std::uint64_t master_seed);

struct RateEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

// Binomial proportion with its standard error.
RateEstimate proportion(std::size_t hits, std::size_t trials);

// Monte Carlo estimate of the probability that a coupled pair disagrees
// somewhere in positions 1..horizon. Zero when horizon is 0.
RateEstimate discrepancy_rate(const Kernel& kernel, const OrderKKernel& approx,
                              std::size_t horizon, std::size_t replicates,
                              std::size_t burn_in, std::uint64_t master_seed);

}  // namespace rbb
