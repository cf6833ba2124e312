#include "rbb/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace rbb {

InfiniteOrderSampler::InfiniteOrderSampler(const Kernel& kernel,
                                           std::size_t burn_in, SeedSpec seed)
    : kernel_(kernel), rng_(seed) {
  history_.reserve(burn_in + 1024);
  for (std::size_t i = 0; i < burn_in; ++i) history_.push_back(step());
}

Symbol InfiniteOrderSampler::step() {
  if (const auto* g = kernel_.as_geometric_mixture()) {
    const std::size_t lag = sample_geometric_lag(rng_, g->theta);
    // Lags reaching before the recorded history read the zero pre-history.
    const Symbol source = lag <= history_.size() ? history_[history_.size() - lag] : 0;
    const auto width = static_cast<std::size_t>(kernel_.alphabet_size());
    return static_cast<Symbol>(rng_.categorical(
        std::span<const double>(g->base).subspan(source * width, width)));
  }
  const auto& fo = *kernel_.as_finite_order();
  const auto width = static_cast<std::size_t>(kernel_.alphabet_size());
  const auto order = static_cast<std::size_t>(fo.order);
  std::size_t row = 0;
  for (std::size_t back = order; back > 0; --back) {
    const Symbol s = back <= history_.size() ? history_[history_.size() - back] : 0;
    row = row * width + s;
  }
  return static_cast<Symbol>(rng_.categorical(
      std::span<const double>(fo.table).subspan(row * width, width)));
}

Symbol InfiniteOrderSampler::next() {
  const Symbol s = step();
  history_.push_back(s);
  return s;
}

MarkovSampler::MarkovSampler(const OrderKKernel& kernel, SeedSpec seed)
    : kernel_(&kernel), rng_(seed) {
  kernel.require_complete();
  owned_stationary_ = stationary_distribution(kernel);
  stationary_ = owned_stationary_;
}

MarkovSampler::MarkovSampler(const OrderKKernel& kernel,
                             std::span<const double> stationary, SeedSpec seed)
    : kernel_(&kernel), stationary_(stationary), rng_(seed) {
  kernel.require_complete();
  if (stationary.size() != kernel.context_count()) {
    throw std::invalid_argument("stationary law has the wrong number of contexts");
  }
}

Symbol MarkovSampler::next() {
  if (pending_pos_ == 0 && pending_.empty()) {
    context_ = rng_.categorical(stationary_);
    pending_.resize(static_cast<std::size_t>(kernel_->k));
    std::size_t c = context_;
    for (std::size_t i = pending_.size(); i-- > 0;) {
      pending_[i] = static_cast<Symbol>(c % kernel_->alphabet_size);
      c /= kernel_->alphabet_size;
    }
  }
  if (pending_pos_ < pending_.size()) return pending_[pending_pos_++];
  const auto b = static_cast<Symbol>(rng_.categorical(kernel_->row(context_)));
  context_ = kernel_->next_context(context_, b);
  return b;
}

std::size_t default_burn_in(const Kernel& kernel) {
  constexpr std::size_t kFloor = 1000;
  const double c = mixing_exponent(kernel);
  if (!std::isfinite(c)) return kFloor;
  const auto needed = static_cast<std::size_t>(std::ceil(40.0 / c));
  return needed > kFloor ? needed : kFloor;
}

std::size_t sample_geometric_lag(Rng& rng, double theta) {
  // Inversion: P(L > l) = theta^l.
  const double u = rng.uniform_positive();
  return 1 + static_cast<std::size_t>(std::floor(std::log(u) / std::log(theta)));
}

Trajectory sample_infinite_order_trajectory(const Kernel& kernel, std::size_t n,
                                            std::size_t burn_in, SeedSpec seed) {
  if (n < 1) throw std::invalid_argument("trajectory length must be >= 1");
  InfiniteOrderSampler sampler(kernel, burn_in, seed);
  Trajectory out{kernel.alphabet_size(), {}};
  sampler.extend(out.symbols, n);
  return out;
}

Trajectory sample_markov_trajectory(const OrderKKernel& kernel, std::size_t n,
                                    SeedSpec seed) {
  if (n < static_cast<std::size_t>(kernel.k)) {
    throw std::invalid_argument("trajectory shorter than the chain order");
  }
  MarkovSampler sampler(kernel, seed);
  Trajectory out{kernel.alphabet_size, {}};
  sampler.extend(out.symbols, n);
  return out;
}

}  // namespace rbb
