#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rbb/chain_model.hpp"
#include "rbb/regeneration.hpp"
#include "rbb/rng.hpp"

namespace rbb {

// Defining and reduced forms of the normalized statistic must agree to this
// tolerance, scaled by max(1, |statistic|).
inline constexpr double kStatisticAgreement = 1e-10;

// m independent uniform draws from {1, ..., m}.
std::vector<std::size_t> draw_indices(std::size_t m, SeedSpec seed);

struct AssembledSample {
  std::vector<Symbol> symbols;
  std::vector<std::size_t> return_times;  // 1, then += length of each chosen block
};

// Concatenates the blocks named by one-based indices.
AssembledSample assemble_sample(std::span<const Block> blocks,
                                std::span<const std::size_t> indices);

// Mean of f over a nonempty sample.
double segment_mean(std::span<const Symbol> sample, const Observable& f);

// sqrt(sum Z^2 / (R*_m - 1)); the conditional variance of the resampled
// centered sum equals sum Z^2 exactly.
double bootstrap_standard_deviation(std::span<const double> centered_sums,
                                    std::size_t resampled_length);

// Assembles the resample, evaluates sqrt(R*_m - 1) (mu* - mu_hat) / sigma*
// and checks it against sum_l Z_{I_l} / sqrt(sum_j Z_j^2), which is returned.
double normalized_statistic(std::span<const Block> blocks,
                            std::span<const double> centered_sums,
                            std::span<const std::size_t> indices,
                            const Observable& f);

struct BootstrapReplicate {
  std::vector<std::size_t> indices;
  std::vector<std::size_t> star_return_times;
  std::vector<Symbol> star_sample;
  double mu_star = 0.0;
  double sigma_star = 0.0;
  double statistic = 0.0;
};

BootstrapReplicate bootstrap_replicate(std::span<const Block> blocks,
                                       std::span<const double> centered_sums,
                                       const Observable& f, SeedSpec seed);

// Per-block quantities needed to evaluate both forms of the statistic without
// materializing the resample.
struct BlockSummary {
  std::vector<double> observable_sums;
  std::vector<std::size_t> lengths;
  std::vector<double> centered_sums;
  double sample_mean = 0.0;
  double sum_of_squares = 0.0;
};

BlockSummary summarize_blocks(std::span<const Block> blocks, const Observable& f);

// Statistic of one index vector from block totals; throws std::logic_error if
// the two forms disagree.
double statistic_from_summary(const BlockSummary& summary,
                              std::span<const std::size_t> indices);

// B statistics; replicate b draws its indices from stream_id b.
std::vector<double> bootstrap_distribution(const BlockSummary& summary,
                                           std::size_t replicates,
                                           std::uint64_t master_seed);
// Single-threaded reference for bootstrap_distribution.
std::vector<double> bootstrap_distribution_serial(const BlockSummary& summary,
                                                  std::size_t replicates,
                                                  std::uint64_t master_seed);

}  // namespace rbb
