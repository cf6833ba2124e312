#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace rbb {

// (master_seed, stream_id) determines every draw of one unit of work.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

// Mixes a domain tag into a master seed so that independent parts of an
// experiment (trajectory, bootstrap indices, ...) never share a stream.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag);

class Rng {
 public:
  explicit Rng(SeedSpec seed);

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_positive() { return 1.0 - uniform(); }

  // Uniform on {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n);

  // Draws a category from a probability vector. Mass lost to rounding falls
  // on the last category with positive probability.
  std::size_t categorical(std::span<const double> probabilities);

 private:
  std::mt19937_64 engine_;
};

}  // namespace rbb
