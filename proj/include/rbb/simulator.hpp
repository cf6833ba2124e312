#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rbb/chain_model.hpp"
#include "rbb/markov_approx.hpp"
#include "rbb/rng.hpp"

namespace rbb {

// Source of one trajectory, symbol by symbol. Never shared between threads.
class TrajectorySampler {
 public:
  virtual ~TrajectorySampler() = default;

  virtual int alphabet_size() const = 0;
  virtual Symbol next() = 0;

  void extend(std::vector<Symbol>& out, std::size_t count) {
    out.reserve(out.size() + count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(next());
  }
};

// Samples an infinite-order kernel started from an all-zeros pre-history.
// The first `burn_in` symbols are generated at construction and kept in the
// history but never emitted.
class InfiniteOrderSampler final : public TrajectorySampler {
 public:
  InfiniteOrderSampler(const Kernel& kernel, std::size_t burn_in, SeedSpec seed);

  int alphabet_size() const override { return kernel_.alphabet_size(); }
  Symbol next() override;

  // Burn-in followed by everything emitted so far.
  std::span<const Symbol> history() const { return history_; }
  Rng& rng() { return rng_; }

 private:
  Symbol step();

  Kernel kernel_;
  Rng rng_;
  std::vector<Symbol> history_;
};

// Stationary order-k Markov chain: the first k symbols come from the
// stationary law on contexts, the rest from the transition table.
class MarkovSampler final : public TrajectorySampler {
 public:
  MarkovSampler(const OrderKKernel& kernel, SeedSpec seed);
  // Reuses a precomputed stationary law on contexts.
  MarkovSampler(const OrderKKernel& kernel, std::span<const double> stationary,
                SeedSpec seed);

  int alphabet_size() const override { return kernel_->alphabet_size; }
  Symbol next() override;

 private:
  const OrderKKernel* kernel_;
  std::vector<double> owned_stationary_;
  std::span<const double> stationary_;
  Rng rng_;
  std::vector<Symbol> pending_;  // initial context, emitted first
  std::size_t pending_pos_ = 0;
  std::size_t context_ = 0;
};

// ceil(40 / c) with a floor of 1000 symbols; 1000 for finite memory.
std::size_t default_burn_in(const Kernel& kernel);

// Lag L with P(L = l) = (1 - theta) theta^(l - 1), l >= 1.
std::size_t sample_geometric_lag(Rng& rng, double theta);

Trajectory sample_infinite_order_trajectory(const Kernel& kernel, std::size_t n,
                                            std::size_t burn_in, SeedSpec seed);

Trajectory sample_markov_trajectory(const OrderKKernel& kernel, std::size_t n,
                                    SeedSpec seed);

}  // namespace rbb
