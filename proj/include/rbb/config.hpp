#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbb/chain_model.hpp"

namespace rbb {

// markov: the order-k approximation of the kernel is sampled directly.
// infinite_order: the kernel itself is sampled after a burn-in.
enum class Regime { markov, infinite_order };

struct ExperimentConfig {
  Kernel kernel;
  Observable observable;
  Regime regime = Regime::markov;
  int k = 1;
  std::optional<double> alpha{};
  std::optional<std::uint64_t> m{};
  std::size_t bootstrap_replicates = 2000;
  std::size_t replicates = 1;
  std::uint64_t seed = 0;

  // caps
  std::size_t trajectory_cap = std::size_t{1} << 31;
  std::size_t burn_in = 0;  // 0 selects default_burn_in(kernel)
  std::size_t approx_length = 10'000'000;

  std::size_t length = 10'000;  // simulate
  int lag_window = 50;
  double ks_threshold = 0.05;
  std::vector<double> t_grid{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int max_moment = 4;
  std::vector<std::uint64_t> m_grid{};
  std::vector<int> k_grid{};
  std::size_t horizon = 1;

  std::string csv_path{};
  std::string json_path{};

  // The configuration as read, echoed into every report.
  nlohmann::json source{};

  std::size_t effective_burn_in() const;
  // Explicit m, else floor(exp(alpha k)).
  std::uint64_t block_count_for(int k_value) const;
};

// Throws ConfigError on any missing or invalid field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

std::string to_string(Regime regime);

}  // namespace rbb
