#include "rbb/regeneration.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "rbb/errors.hpp"
#include "rbb/summation.hpp"

namespace rbb {
namespace {

bool fits_rolling_code(int alphabet_size, int k) {
  double bits = 0.0;
  for (int a = 1; a < alphabet_size; a *= 2) bits += 1.0;
  return bits * k <= 62.0;
}

}  // namespace

std::vector<std::size_t> return_times(const Trajectory& trajectory, int k,
                                      std::size_t m) {
  if (k < 1) throw std::invalid_argument("string length must be >= 1");
  const auto& x = trajectory.symbols;
  const auto len = static_cast<std::size_t>(k);
  if (x.size() < len) {
    throw std::invalid_argument("trajectory shorter than the reference string");
  }
  std::vector<std::size_t> times;
  times.reserve(m + 1);
  times.push_back(1);

  if (fits_rolling_code(trajectory.alphabet_size, k)) {
    const auto base = static_cast<std::uint64_t>(trajectory.alphabet_size);
    std::uint64_t top = 1;  // base^(k-1)
    for (int i = 1; i < k; ++i) top *= base;
    std::uint64_t target = 0;
    for (std::size_t i = 0; i < len; ++i) target = target * base + x[i];
    std::uint64_t code = target;
    // code holds the window starting at zero-based position start.
    for (std::size_t start = 1; start + len <= x.size() && times.size() <= m; ++start) {
      code = (code - x[start - 1] * top) * base + x[start + len - 1];
      if (code == target) times.push_back(start + 1);
    }
  } else {
    for (std::size_t start = 1; start + len <= x.size() && times.size() <= m; ++start) {
      if (std::equal(x.begin(), x.begin() + k, x.begin() + start)) {
        times.push_back(start + 1);
      }
    }
  }
  if (times.size() <= m) {
    throw InsufficientReturnsError("found " + std::to_string(times.size() - 1) +
                                   " returns of the initial string, need " +
                                   std::to_string(m));
  }
  return times;
}

std::vector<Block> extract_blocks(const Trajectory& trajectory,
                                  std::span<const std::size_t> return_times) {
  std::vector<Block> blocks;
  if (return_times.empty()) return blocks;
  blocks.reserve(return_times.size() - 1);
  const auto first = trajectory.symbols.begin();
  for (std::size_t i = 1; i < return_times.size(); ++i) {
    blocks.emplace_back(first + static_cast<std::ptrdiff_t>(return_times[i - 1] - 1),
                        first + static_cast<std::ptrdiff_t>(return_times[i] - 1));
  }
  return blocks;
}

RegenerationDecomposition decompose(const Trajectory& trajectory, int k,
                                    std::size_t m) {
  RegenerationDecomposition d;
  d.k = k;
  d.return_times = return_times(trajectory, k, m);
  d.blocks = extract_blocks(trajectory, d.return_times);
  d.lengths.reserve(d.blocks.size());
  for (const auto& b : d.blocks) d.lengths.push_back(b.size());
  return d;
}

BlockStats block_statistics(std::span<const Block> blocks, const Observable& f,
                            std::optional<double> reference_mean) {
  if (blocks.empty()) throw std::invalid_argument("no blocks");
  BlockStats s;
  CompensatedSum total;
  std::size_t length = 0;
  for (const auto& b : blocks) {
    for (Symbol a : b) total += f(a);
    length += b.size();
    s.lengths.push_back(b.size());
  }
  if (length == 0) throw std::invalid_argument("blocks are empty");
  s.sample_mean = total.value() / static_cast<double>(length);

  auto centered = [&](double center) {
    std::vector<double> sums;
    sums.reserve(blocks.size());
    for (const auto& b : blocks) {
      CompensatedSum z;
      for (Symbol a : b) z += f(a) - center;
      sums.push_back(z.value());
    }
    return sums;
  };
  s.centered_sums = centered(s.sample_mean);
  if (reference_mean) s.reference_centered_sums = centered(*reference_mean);
  return s;
}

RegenerationDiagnostics regeneration_diagnostics(
    std::span<const double> centered_sums,
    std::optional<std::span<const double>> reference_centered_sums) {
  CompensatedSum squares, fourths;
  for (double z : centered_sums) {
    squares += z * z;
    fourths += z * z * z * z;
  }
  if (!(squares.value() > 0.0)) {
    throw DegenerateSampleError(
        "every block has the same observable sum; the bootstrap variance is zero");
  }
  RegenerationDiagnostics d;
  d.lindeberg_ratio = fourths.value() / (squares.value() * squares.value());
  if (reference_centered_sums) {
    CompensatedSum reference;
    for (double z : *reference_centered_sums) reference += z * z;
    if (!(reference.value() > 0.0)) {
      throw DegenerateSampleError("reference-centered block sums are all zero");
    }
    d.centering_ratio = squares.value() / reference.value();
  }
  return d;
}

void write_blocks_csv(std::ostream& out,
                      const RegenerationDecomposition& decomposition,
                      const BlockStats& stats) {
  out << "index,start,length,centered_sum\n";
  char buf[64];
  for (std::size_t i = 0; i < decomposition.block_count(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", stats.centered_sums[i]);
    out << (i + 1) << ',' << decomposition.return_times[i] << ','
        << decomposition.lengths[i] << ',' << buf << '\n';
  }
}

}  // namespace rbb
