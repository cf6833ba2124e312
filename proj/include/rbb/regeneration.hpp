#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "rbb/chain_model.hpp"

namespace rbb {

using Block = std::vector<Symbol>;

// Excursions of a trajectory between successive occurrences of its own
// initial k-string. Positions are one-based with return_times[0] == 1.
struct RegenerationDecomposition {
  int k = 1;
  std::vector<std::size_t> return_times;  // R_0 .. R_m
  std::vector<Block> blocks;              // block i spans [R_{i-1}, R_i - 1]
  std::vector<std::size_t> lengths;       // R_i - R_{i-1}

  std::size_t block_count() const { return blocks.size(); }
};

// R_0 = 1 and R_i = min{n > R_{i-1} : X_n..X_{n+k-1} = X_1..X_k}, allowing
// overlapping occurrences. Throws InsufficientReturnsError when the
// trajectory holds fewer than m returns.
std::vector<std::size_t> return_times(const Trajectory& trajectory, int k,
                                      std::size_t m);

std::vector<Block> extract_blocks(const Trajectory& trajectory,
                                  std::span<const std::size_t> return_times);

RegenerationDecomposition decompose(const Trajectory& trajectory, int k,
                                    std::size_t m);

// Per-block sums of the observable, centered at the segment mean and
// optionally at a reference mean.
struct BlockStats {
  double sample_mean = 0.0;
  std::vector<double> centered_sums;                           // at sample_mean
  std::optional<std::vector<double>> reference_centered_sums;  // at supplied mean
  std::vector<std::size_t> lengths;
};

BlockStats block_statistics(std::span<const Block> blocks, const Observable& f,
                            std::optional<double> reference_mean = std::nullopt);

struct RegenerationDiagnostics {
  // sum Z^4 / (sum Z^2)^2
  double lindeberg_ratio = 0.0;
  // sum Z^2 / sum Ztilde^2, with Ztilde centered at the reference mean
  std::optional<double> centering_ratio;
};

// Throws DegenerateSampleError when a denominator vanishes.
RegenerationDiagnostics regeneration_diagnostics(
    std::span<const double> centered_sums,
    std::optional<std::span<const double>> reference_centered_sums = std::nullopt);

// One row per block: index, start, length, centered_sum.
void write_blocks_csv(std::ostream& out,
                      const RegenerationDecomposition& decomposition,
                      const BlockStats& stats);

}  // namespace rbb
