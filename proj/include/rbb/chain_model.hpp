#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace rbb {

using Symbol = std::uint8_t;

inline constexpr int kMaxAlphabetSize = 64;

// Rows of every transition table must sum to one within this tolerance.
inline constexpr double kProbabilityTolerance = 1e-12;

class Alphabet {
 public:
  explicit Alphabet(int size);

  int size() const { return size_; }
  bool contains(int symbol) const { return symbol >= 0 && symbol < size_; }

 private:
  int size_;
};

// Real-valued function of a single symbol.
class Observable {
 public:
  explicit Observable(std::vector<double> values);

  static Observable identity(int alphabet_size);

  double operator()(Symbol a) const { return values_[a]; }
  int alphabet_size() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }

  bool is_constant() const;
  // max_a |f(a) - center|
  double max_deviation(double center) const;

 private:
  std::vector<double> values_;
};

// A finite symbol sequence. Index 0 holds X_1; block formulas use one-based
// positions throughout.
struct Trajectory {
  int alphabet_size = 2;
  std::vector<Symbol> symbols;

  std::size_t size() const { return symbols.size(); }
  // One-based access, X_n.
  Symbol at(std::size_t n) const { return symbols[n - 1]; }
};

// Exact finite memory. The table has alphabet^order rows indexed in
// base-alphabet order with the oldest context symbol most significant.
struct FiniteOrder {
  int order = 1;
  std::vector<double> table;
};

// p(a | past) = sum_{l >= 1} (1 - theta) theta^(l-1) base(a | x_{-l})
// where base is an alphabet x alphabet row-stochastic table.
struct GeometricMixture {
  double theta = 0.5;
  std::vector<double> base;
};

// Conditional law of a chain of infinite order on a finite alphabet.
class Kernel {
 public:
  using Variant = std::variant<FiniteOrder, GeometricMixture>;

  static Kernel finite_order(int alphabet_size, int order,
                             std::vector<double> table);
  static Kernel geometric_mixture(int alphabet_size, double theta,
                                  std::vector<double> base);

  int alphabet_size() const { return alphabet_size_; }
  const Variant& variant() const { return variant_; }
  const FiniteOrder* as_finite_order() const {
    return std::get_if<FiniteOrder>(&variant_);
  }
  const GeometricMixture* as_geometric_mixture() const {
    return std::get_if<GeometricMixture>(&variant_);
  }

 private:
  Kernel(int alphabet_size, Variant v)
      : alphabet_size_(alphabet_size), variant_(std::move(v)) {}

  int alphabet_size_;
  Variant variant_;
};

// Throws std::invalid_argument unless p is nonnegative and sums to one.
void validate_probability_vector(std::span<const double> p);

// Next-symbol law given a context whose most recent symbol is last. A
// GeometricMixture sees lags beyond the context as the oldest context symbol;
// a FiniteOrder kernel needs at least `order` symbols.
std::vector<double> conditional_distribution(const Kernel& kernel,
                                             std::span<const Symbol> context);

// Next-symbol law given a realized past preceded by an all-`prehistory`
// sequence. This is the law the simulator samples from.
std::vector<double> law_given_realized_past(const Kernel& kernel,
                                            std::span<const Symbol> past,
                                            Symbol prehistory = 0);

// Lower bound on p(a | history) over all symbols and histories.
double delta_lower_bound(const Kernel& kernel);

// Upper bound on |p(a|x) - p(a|y)| over pasts agreeing on their last l
// symbols. Exact for FiniteOrder kernels.
double continuity_rate(const Kernel& kernel, int l);

// -limsup (1/l) log continuity_rate(l); +infinity for finite memory.
double mixing_exponent(const Kernel& kernel);

// max_{a,b,b'} |q(a|b) - q(a|b')| for a square row-stochastic table.
double table_spread(std::span<const double> table, int alphabet_size);

// gamma_0 + 2 sum_{j=1..lag_window} gamma_j over the empirical
// autocovariances of f(X_n). Needs size > 10 (lag_window + 1).
double long_run_variance_estimate(std::span<const Symbol> trajectory,
                                  const Observable& f, int lag_window);

struct HypothesisReport {
  double delta = 0.0;
  double c = 0.0;  // +infinity for finite memory
  double sigma2_estimate = 0.0;
  bool h1_ok = false;
  bool h2_ok = false;
  bool h3_ok = false;
};

HypothesisReport check_hypotheses(const Kernel& kernel, double sigma2_estimate);

}  // namespace rbb
