#include "rbb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rbb/summation.hpp"

namespace rbb {

double normal_cdf(double x) {
  constexpr double p = 0.3275911;
  constexpr double a1 = 0.254829592;
  constexpr double a2 = -0.284496736;
  constexpr double a3 = 1.421413741;
  constexpr double a4 = -1.453152027;
  constexpr double a5 = 1.061405429;
  const double z = std::abs(x) / std::sqrt(2.0);
  const double t = 1.0 / (1.0 + p * z);
  const double poly = t * (a1 + t * (a2 + t * (a3 + t * (a4 + t * a5))));
  const double erf_z = 1.0 - poly * std::exp(-z * z);
  return x >= 0.0 ? 0.5 * (1.0 + erf_z) : 0.5 * (1.0 - erf_z);
}

double ks_distance(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    // Ties jump the empirical CDF once.
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double phi = normal_cdf(sorted[i]);
    d = std::max(d, std::abs(phi - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(j) / n - phi));
    i = j;
  }
  return d;
}

SampleSummary summarize(std::span<const double> sample) {
  SampleSummary s;
  s.count = sample.size();
  if (sample.empty()) return s;
  CompensatedSum total;
  for (double v : sample) total += v;
  s.mean = total.value() / static_cast<double>(s.count);
  CompensatedSum m2, m3;
  for (double v : sample) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(s.count);
  if (s.count > 1) s.sd = std::sqrt(m2.value() / (n - 1.0));
  const double pop_var = m2.value() / n;
  if (pop_var > 0.0) s.skewness = (m3.value() / n) / std::pow(pop_var, 1.5);
  return s;
}

}  // namespace rbb
