#pragma once

#include <cstddef>
#include <span>

namespace rbb {

// Standard normal CDF from the Abramowitz-Stegun 7.1.26 rational
// approximation of erf; absolute error at most 1.5e-7.
double normal_cdf(double x);

// sup_x |F_n(x) - Phi(x)| for the empirical CDF F_n of the sample.
double ks_distance(std::span<const double> sample);

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;        // n - 1 denominator
  double skewness = 0.0;  // biased moment estimator
};

SampleSummary summarize(std::span<const double> sample);

}  // namespace rbb
