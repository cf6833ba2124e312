#include "rbb/rng.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rbb/parallel.hpp"

namespace rbb {
namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::seed_seq make_seed_seq(SeedSpec seed) {
  return std::seed_seq{
      static_cast<std::uint32_t>(seed.master_seed),
      static_cast<std::uint32_t>(seed.master_seed >> 32),
      static_cast<std::uint32_t>(seed.stream_id),
      static_cast<std::uint32_t>(seed.stream_id >> 32)};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag) {
  return mix(mix(master_seed) ^ mix(tag + 0x632be59bd9b4e019ULL));
}

Rng::Rng(SeedSpec seed) {
  auto seq = make_seed_seq(seed);
  engine_.seed(seq);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::index: empty range");
  const std::uint64_t range = n;
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return static_cast<std::size_t>(r % range);
  }
}

std::size_t Rng::categorical(std::span<const double> probabilities) {
  const double u = uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < probabilities.size(); ++a) {
    if (probabilities[a] <= 0.0) continue;
    last_positive = a;
    cumulative += probabilities[a];
    if (u < cumulative) return a;
  }
  return last_positive;
}

void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) {
    omp_set_num_threads(n);
  } else {
    omp_set_num_threads(omp_get_num_procs());
  }
#else
  (void)n;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace rbb
