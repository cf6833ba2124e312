#include "rbb/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rbb/errors.hpp"
#include "rbb/parallel.hpp"
#include "rbb/summation.hpp"

namespace rbb {
namespace {

double sum_of_squares(std::span<const double> z) {
  CompensatedSum s;
  for (double v : z) s += v * v;
  return s.value();
}

void require_nondegenerate(double squares) {
  if (!(squares > 0.0)) {
    throw DegenerateSampleError(
        "every block has the same observable sum; the bootstrap variance is zero");
  }
}

void check_agreement(double defining, double reduced) {
  const double scale = std::max(1.0, std::abs(reduced));
  if (!(std::abs(defining - reduced) <= kStatisticAgreement * scale)) {
    throw std::logic_error("statistic forms disagree: " + std::to_string(defining) +
                           " vs " + std::to_string(reduced));
  }
}

double reduced_form(std::span<const double> centered_sums,
                    std::span<const std::size_t> indices, double squares) {
  CompensatedSum s;
  for (std::size_t i : indices) s += centered_sums[i - 1];
  return s.value() / std::sqrt(squares);
}

}  // namespace

std::vector<std::size_t> draw_indices(std::size_t m, SeedSpec seed) {
  if (m < 1) throw std::invalid_argument("need at least one block");
  Rng rng(seed);
  std::vector<std::size_t> indices(m);
  for (auto& i : indices) i = rng.index(m) + 1;
  return indices;
}

AssembledSample assemble_sample(std::span<const Block> blocks,
                                std::span<const std::size_t> indices) {
  AssembledSample out;
  out.return_times.reserve(indices.size() + 1);
  out.return_times.push_back(1);
  for (std::size_t i : indices) {
    if (i < 1 || i > blocks.size()) {
      throw std::out_of_range("block index " + std::to_string(i) + " out of range");
    }
    const Block& b = blocks[i - 1];
    out.symbols.insert(out.symbols.end(), b.begin(), b.end());
    out.return_times.push_back(out.return_times.back() + b.size());
  }
  return out;
}

double segment_mean(std::span<const Symbol> sample, const Observable& f) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  CompensatedSum s;
  for (Symbol a : sample) s += f(a);
  return s.value() / static_cast<double>(sample.size());
}

double bootstrap_standard_deviation(std::span<const double> centered_sums,
                                    std::size_t resampled_length) {
  if (resampled_length < 1) throw std::invalid_argument("empty resample");
  const double squares = sum_of_squares(centered_sums);
  require_nondegenerate(squares);
  return std::sqrt(squares / static_cast<double>(resampled_length));
}

double normalized_statistic(std::span<const Block> blocks,
                            std::span<const double> centered_sums,
                            std::span<const std::size_t> indices,
                            const Observable& f) {
  const double squares = sum_of_squares(centered_sums);
  require_nondegenerate(squares);
  std::vector<Symbol> original;
  for (const auto& b : blocks) original.insert(original.end(), b.begin(), b.end());
  const double mu_hat = segment_mean(original, f);

  const AssembledSample star = assemble_sample(blocks, indices);
  const double length = static_cast<double>(star.symbols.size());
  const double mu_star = segment_mean(star.symbols, f);
  const double sigma_star = bootstrap_standard_deviation(centered_sums, star.symbols.size());
  const double defining = std::sqrt(length) / sigma_star * (mu_star - mu_hat);

  const double reduced = reduced_form(centered_sums, indices, squares);
  check_agreement(defining, reduced);
  return reduced;
}

BootstrapReplicate bootstrap_replicate(std::span<const Block> blocks,
                                       std::span<const double> centered_sums,
                                       const Observable& f, SeedSpec seed) {
  BootstrapReplicate r;
  r.indices = draw_indices(blocks.size(), seed);
  AssembledSample star = assemble_sample(blocks, r.indices);
  r.star_sample = std::move(star.symbols);
  r.star_return_times = std::move(star.return_times);
  r.mu_star = segment_mean(r.star_sample, f);
  r.sigma_star = bootstrap_standard_deviation(centered_sums, r.star_sample.size());
  r.statistic = normalized_statistic(blocks, centered_sums, r.indices, f);
  return r;
}

BlockSummary summarize_blocks(std::span<const Block> blocks, const Observable& f) {
  const BlockStats stats = block_statistics(blocks, f);
  BlockSummary s;
  s.sample_mean = stats.sample_mean;
  s.centered_sums = stats.centered_sums;
  s.lengths = stats.lengths;
  s.observable_sums.reserve(blocks.size());
  for (const auto& b : blocks) {
    CompensatedSum total;
    for (Symbol a : b) total += f(a);
    s.observable_sums.push_back(total.value());
  }
  s.sum_of_squares = sum_of_squares(s.centered_sums);
  return s;
}

double statistic_from_summary(const BlockSummary& summary,
                              std::span<const std::size_t> indices) {
  require_nondegenerate(summary.sum_of_squares);
  CompensatedSum observable_total;
  std::size_t length = 0;
  for (std::size_t i : indices) {
    observable_total += summary.observable_sums[i - 1];
    length += summary.lengths[i - 1];
  }
  const double n = static_cast<double>(length);
  const double mu_star = observable_total.value() / n;
  const double sigma_star = std::sqrt(summary.sum_of_squares / n);
  const double defining = std::sqrt(n) / sigma_star * (mu_star - summary.sample_mean);
  const double reduced =
      reduced_form(summary.centered_sums, indices, summary.sum_of_squares);
  check_agreement(defining, reduced);
  return reduced;
}

std::vector<double> bootstrap_distribution(const BlockSummary& summary,
                                           std::size_t replicates,
                                           std::uint64_t master_seed) {
  if (replicates < 1) throw std::invalid_argument("need at least one replicate");
  require_nondegenerate(summary.sum_of_squares);
  const std::size_t m = summary.lengths.size();
  std::vector<double> out(replicates);
  parallel_for(replicates, [&](std::size_t b) {
    const auto indices = draw_indices(m, SeedSpec{master_seed, b});
    out[b] = statistic_from_summary(summary, indices);
  });
  return out;
}

std::vector<double> bootstrap_distribution_serial(const BlockSummary& summary,
                                                  std::size_t replicates,
                                                  std::uint64_t master_seed) {
  if (replicates < 1) throw std::invalid_argument("need at least one replicate");
  require_nondegenerate(summary.sum_of_squares);
  const std::size_t m = summary.lengths.size();
  std::vector<double> out(replicates);
  for (std::size_t b = 0; b < replicates; ++b) {
    const auto indices = draw_indices(m, SeedSpec{master_seed, b});
    out[b] = statistic_from_summary(summary, indices);
  }
  return out;
}

}  // namespace rbb
