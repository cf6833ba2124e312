#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace rbb {

// Infinite values (finite-memory kernels) are stored as nullopt so that the
// JSON form stays standard.
struct WindowSection {
  double lower = 0.0;
  std::optional<double> upper;
  bool infinite_order_ok = false;
  double markov_lower = 0.0;
  std::optional<double> alpha;  // configured or implied by m
  bool alpha_admissible = false;

  friend bool operator==(const WindowSection&, const WindowSection&) = default;
};

struct HypothesisSection {
  double delta = 0.0;
  std::optional<double> c;
  double sigma2_estimate = 0.0;
  int lag_window = 0;
  bool h1_ok = false;
  bool h2_ok = false;
  bool h3_ok = false;

  friend bool operator==(const HypothesisSection&, const HypothesisSection&) = default;
};

struct StatisticSection {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double ks_distance = 0.0;
  double ks_threshold = 0.0;
  bool ks_pass = false;

  friend bool operator==(const StatisticSection&, const StatisticSection&) = default;
};

struct ReplicateRow {
  std::size_t replicate = 0;
  std::uint64_t block_count = 0;
  std::size_t trajectory_length = 0;
  std::size_t sample_length = 0;  // R_m - 1
  double sample_mean = 0.0;
  double exact_mean = 0.0;
  double lindeberg_ratio = 0.0;
  std::optional<double> centering_ratio;
  double ks_distance = 0.0;

  friend bool operator==(const ReplicateRow&, const ReplicateRow&) = default;
};

struct TailRow {
  double t = 0.0;
  double empirical = 0.0;
  double se = 0.0;
  double bound = 0.0;
  bool violation = false;

  friend bool operator==(const TailRow&, const TailRow&) = default;
};

struct MomentRow {
  int r = 1;
  double empirical = 0.0;
  double se = 0.0;
  double bound = 0.0;
  bool violation = false;

  friend bool operator==(const MomentRow&, const MomentRow&) = default;
};

struct MeanScalingRow {
  std::uint64_t m = 0;
  double scaled_mse = 0.0;  // m * E[(mu_hat - mu)^2]
  double se = 0.0;

  friend bool operator==(const MeanScalingRow&, const MeanScalingRow&) = default;
};

struct CouplingRow {
  int k = 1;
  double beta = 0.0;
  double single_rate = 0.0;
  double single_se = 0.0;
  bool single_violation = false;
  std::size_t horizon = 1;
  double horizon_rate = 0.0;
  double horizon_se = 0.0;
  std::optional<double> ratio_to_horizon_beta;  // horizon_rate / (horizon beta)

  friend bool operator==(const CouplingRow&, const CouplingRow&) = default;
};

struct LindebergRow {
  int k = 1;
  std::uint64_t m = 0;
  double mean_ratio = 0.0;
  double se = 0.0;

  friend bool operator==(const LindebergRow&, const LindebergRow&) = default;
};

struct ExperimentReport {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::optional<WindowSection> window;
  std::optional<HypothesisSection> hypotheses;
  std::optional<StatisticSection> statistics;
  std::vector<ReplicateRow> replicates;
  std::vector<TailRow> tail;
  std::vector<MomentRow> moments;
  std::vector<MeanScalingRow> mean_scaling;
  std::vector<CouplingRow> coupling;
  std::vector<LindebergRow> lindeberg;
  std::vector<std::string> warnings;
  std::vector<std::string> conventions;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

nlohmann::json to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

// Two-space indented JSON with a trailing newline.
std::string emit_report(const ExperimentReport& report);
ExperimentReport parse_report(const std::string& text);

}  // namespace rbb
