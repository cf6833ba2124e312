#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rbb/chain_model.hpp"
#include "rbb/config.hpp"
#include "rbb/markov_approx.hpp"
#include "rbb/report.hpp"
#include "rbb/rng.hpp"
#include "rbb/simulator.hpp"

namespace rbb {

// Seed domains. Each part of an experiment draws from
// derive_seed(master, tag), so changing e.g. B never moves the trajectory.
inline constexpr std::uint64_t kTrajectoryStream = 1;
inline constexpr std::uint64_t kBootstrapStream = 2;
inline constexpr std::uint64_t kApproximationStream = 3;
inline constexpr std::uint64_t kTailStream = 4;
inline constexpr std::uint64_t kScalingStream = 5;
inline constexpr std::uint64_t kCouplingStream = 6;
inline constexpr std::uint64_t kLindebergStream = 7;

// Bound checks flag a violation only beyond this many standard errors.
inline constexpr double kViolationSigmas = 4.0;
inline constexpr std::size_t kMinBoundReplicates = 10'000;

// What gets simulated: either the order-k approximation of a kernel or the
// kernel itself. Cheap to copy; samplers keep the shared tables alive.
class ChainSource {
 public:
  static ChainSource markov(OrderKKernel approx);
  static ChainSource infinite_order(const Kernel& kernel, std::size_t burn_in);
  // Order-k approximation (exact or estimated) in the markov regime.
  static ChainSource from_config(const ExperimentConfig& cfg, int k);

  Regime regime() const { return regime_; }
  int alphabet_size() const;
  std::unique_ptr<TrajectorySampler> sampler(SeedSpec seed) const;

  double exact_mean(const Observable& f) const;
  // Uniform lower bound on transition probabilities: delta_k of the
  // approximation, or the kernel's H1 constant.
  double delta() const;
  const OrderKKernel* approximation() const { return approx_.get(); }

 private:
  Regime regime_ = Regime::markov;
  std::shared_ptr<const Kernel> kernel_;
  std::shared_ptr<const OrderKKernel> approx_;
  std::shared_ptr<const std::vector<double>> stationary_;
  std::size_t burn_in_ = 0;
};

// Samples until the trajectory holds m returns of its initial k-string,
// doubling the length each time (the stream is prefix-consistent). Throws
// ResourceCapError past `cap` symbols.
Trajectory generate_regenerative_sample(const ChainSource& source, int k,
                                        std::uint64_t m, SeedSpec seed,
                                        std::size_t cap);

// D_1 = R_1 - R_0 for a fresh trajectory from the sampler.
std::size_t first_return_length(TrajectorySampler& sampler, int k, std::size_t cap);

struct BoundTables {
  std::vector<TailRow> tail;
  std::vector<MomentRow> moments;
};

// Empirical P(D_1 > t) and E(D_1^r) against (1 - delta^k)^[t/k] and
// r! k^r delta^(-kr).
BoundTables tail_and_moment_check(const ChainSource& source, int k,
                                  std::span<const double> t_grid, int max_moment,
                                  std::size_t replicates, std::uint64_t seed,
                                  std::size_t cap);

// m E[(mu_hat - mu)^2] per m; should stay bounded as m grows.
std::vector<MeanScalingRow> mean_scaling_check(const ChainSource& source,
                                               const Observable& f, int k,
                                               std::span<const std::uint64_t> m_grid,
                                               std::size_t replicates,
                                               std::uint64_t seed, std::size_t cap);

// Single-symbol and horizon discrepancy rates of coupled pairs per k.
std::vector<CouplingRow> coupling_check(const Kernel& kernel,
                                        std::span<const int> k_grid,
                                        std::size_t horizon, std::size_t replicates,
                                        std::size_t burn_in,
                                        std::size_t approx_length,
                                        std::uint64_t seed);

// Mean Lindeberg ratio over independent trajectories per k, each with
// cfg.block_count_for(k) blocks.
std::vector<LindebergRow> lindeberg_trend(const ExperimentConfig& cfg,
                                          std::span<const int> k_grid,
                                          std::size_t replicates);

HypothesisSection hypothesis_section(const Kernel& kernel, const Observable& f,
                                     const Trajectory& trajectory, int lag_window);

WindowSection window_section(const ExperimentConfig& cfg, const ChainSource& source);

struct CltResult {
  ExperimentReport report;
  std::vector<double> statistics;  // replicate 0
};

// simulate -> decompose into m blocks -> B bootstrap statistics -> KS
// distance to N(0, 1), repeated over cfg.replicates trajectories.
CltResult clt_experiment(const ExperimentConfig& cfg,
                         const std::string& command = "clt-check");

std::string format_double(double v);
void write_statistics_csv(std::ostream& out, std::span<const double> statistics);
void write_tail_csv(std::ostream& out, std::span<const TailRow> rows);
void write_coupling_csv(std::ostream& out, std::span<const CouplingRow> rows);
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace rbb
