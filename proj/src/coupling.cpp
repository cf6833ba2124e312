#include "rbb/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rbb/parallel.hpp"
#include "rbb/simulator.hpp"

namespace rbb {
namespace {

// Draws from the nonnegative weights w scaled by 1/total.
std::size_t draw_weighted(const std::vector<double>& w, double total, Rng& rng) {
  const double u = rng.uniform() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < w.size(); ++a) {
    if (w[a] <= 0.0) continue;
    last_positive = a;
    cumulative += w[a];
    if (u < cumulative) return a;
  }
  return last_positive;
}

std::size_t first_discrepancy_of(const Kernel& kernel, const OrderKKernel& approx,
                                 std::size_t horizon, std::size_t burn_in,
                                 SeedSpec seed) {
  const CoupledPair pair =
      coupled_pair_trajectories(kernel, approx, horizon, burn_in, seed);
  return pair.first_discrepancy.value_or(0);
}

}  // namespace

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("length mismatch");
  double d = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) d += std::abs(p[a] - q[a]);
  return 0.5 * d;
}

CouplingDraw maximal_coupling_step(std::span<const double> p,
                                   std::span<const double> q, Rng& rng) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("coupled laws live on different alphabets");
  }
  validate_probability_vector(p);
  validate_probability_vector(q);
  const std::size_t n = p.size();
  std::vector<double> overlap(n), excess_p(n), excess_q(n);
  double overlap_mass = 0.0, residual_mass = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    overlap[a] = std::min(p[a], q[a]);
    excess_p[a] = std::max(p[a] - q[a], 0.0);
    excess_q[a] = std::max(q[a] - p[a], 0.0);
    overlap_mass += overlap[a];
    residual_mass += excess_p[a];
  }
  double residual_q = 0.0;
  for (double v : excess_q) residual_q += v;

  const bool overlap_branch =
      residual_mass <= 0.0 || residual_q <= 0.0 ||
      (overlap_mass > 0.0 &&
       rng.uniform() * (overlap_mass + residual_mass) < overlap_mass);
  if (overlap_branch) {
    const auto a = static_cast<Symbol>(draw_weighted(overlap, overlap_mass, rng));
    return {a, a, true};
  }
  const auto x = static_cast<Symbol>(draw_weighted(excess_p, residual_mass, rng));
  const auto y = static_cast<Symbol>(draw_weighted(excess_q, residual_q, rng));
  return {x, y, x == y};
}

CoupledPair coupled_pair_trajectories(const Kernel& kernel,
                                      const OrderKKernel& approx, std::size_t n,
                                      std::size_t burn_in, SeedSpec seed) {
  if (approx.alphabet_size != kernel.alphabet_size()) {
    throw std::invalid_argument("approximation alphabet differs from the kernel");
  }
  approx.require_complete();
  InfiniteOrderSampler sampler(kernel, burn_in, seed);
  std::vector<Symbol> x_history(sampler.history().begin(), sampler.history().end());

  // The approximating chain starts from the same past, zero-padded to k.
  std::size_t y_context = 0;
  const auto k = static_cast<std::size_t>(approx.k);
  for (std::size_t back = k; back > 0; --back) {
    const Symbol s = back <= x_history.size() ? x_history[x_history.size() - back] : 0;
    y_context = y_context * approx.alphabet_size + s;
  }

  CoupledPair pair;
  pair.x.alphabet_size = pair.y.alphabet_size = kernel.alphabet_size();
  pair.x.symbols.reserve(n);
  pair.y.symbols.reserve(n);
  for (std::size_t t = 1; t <= n; ++t) {
    const auto p = law_given_realized_past(kernel, x_history);
    const CouplingDraw draw =
        maximal_coupling_step(p, approx.row(y_context), sampler.rng());
    x_history.push_back(draw.x);
    pair.x.symbols.push_back(draw.x);
    pair.y.symbols.push_back(draw.y);
    y_context = approx.next_context(y_context, draw.y);
    if (!draw.agreed && !pair.first_discrepancy) pair.first_discrepancy = t;
  }
  return pair;
}

OrderKKernel canonical_approximation(const Kernel& kernel, int k,
                                     std::size_t estimate_length, SeedSpec seed) {
  if (kernel.as_finite_order() != nullptr) return canonical_from_kernel(kernel, k);
  const Trajectory long_run = sample_infinite_order_trajectory(
      kernel, estimate_length, default_burn_in(kernel), seed);
  OrderKKernel approx = canonical_from_trajectory(long_run, k);
  approx.require_complete();
  return approx;
}

std::vector<std::size_t> first_discrepancies(const Kernel& kernel,
                                             const OrderKKernel& approx,
                                             std::size_t horizon,
                                             std::size_t replicates,
                                             std::size_t burn_in,
                                             std::uint64_t master_seed) {
  std::vector<std::size_t> out(replicates, 0);
  if (horizon == 0) return out;
  parallel_for(replicates, [&](std::size_t i) {
    out[i] = first_discrepancy_of(kernel, approx, horizon, burn_in,
                                  SeedSpec{master_seed, i});
  });
  return out;
}

std::vector<std::size_t> first_discrepancies_serial(const Kernel& kernel,
                                                    const OrderKKernel& approx,
                                                    std::size_t horizon,
                                                    std::size_t replicates,
                                                    std::size_t burn_in,
                                                    std::uint64_t master_seed) {
  std::vector<std::size_t> out(replicates, 0);
  if (horizon == 0) return out;
  for (std::size_t i = 0; i < replicates; ++i) {
    out[i] = first_discrepancy_of(kernel, approx, horizon, burn_in,
                                  SeedSpec{master_seed, i});
  }
  return out;
}

RateEstimate proportion(std::size_t hits, std::size_t trials) {
  if (trials == 0) return {};
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

RateEstimate discrepancy_rate(const Kernel& kernel, const OrderKKernel& approx,
                              std::size_t horizon, std::size_t replicates,
                              std::size_t burn_in, std::uint64_t master_seed) {
  if (horizon == 0) return {};
  const auto firsts = first_discrepancies(kernel, approx, horizon, replicates,
                                          burn_in, master_seed);
  const auto hits = static_cast<std::size_t>(
      std::count_if(firsts.begin(), firsts.end(), [](std::size_t t) { return t != 0; }));
  return proportion(hits, replicates);
}

}  // namespace rbb
