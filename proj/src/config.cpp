#include "rbb/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "rbb/errors.hpp"
#include "rbb/schedule.hpp"
#include "rbb/simulator.hpp"

namespace rbb {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  return j.at(key);
}

template <class T>
T read(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::size_t read_count(const json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw ConfigError(std::string("'") + key + "' must be an integer >= 1");
  }
  return v.get<std::size_t>();
}

std::vector<double> read_rows(const json& table, int& alphabet_size) {
  if (!table.is_array() || table.empty()) {
    throw ConfigError("kernel table must be a nonempty array of rows");
  }
  std::vector<double> flat;
  alphabet_size = -1;
  for (const json& row : table) {
    if (!row.is_array()) throw ConfigError("kernel table rows must be arrays");
    if (alphabet_size < 0) alphabet_size = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != alphabet_size) {
      throw ConfigError("kernel table rows differ in length");
    }
    for (const json& v : row) {
      if (!v.is_number()) throw ConfigError("kernel table entries must be numbers");
      flat.push_back(v.get<double>());
    }
  }
  return flat;
}

Kernel parse_kernel(const json& j) {
  const std::string variant = read<std::string>(j, "variant", "");
  int alphabet_size = 0;
  std::vector<double> table = read_rows(require(j, "table"), alphabet_size);
  try {
    if (variant == "finite_order") {
      return Kernel::finite_order(alphabet_size, read<int>(j, "order", 1),
                                  std::move(table));
    }
    if (variant == "geometric_mixture") {
      const json& theta = require(j, "theta");
      if (!theta.is_number()) throw ConfigError("'theta' must be a number");
      return Kernel::geometric_mixture(alphabet_size, theta.get<double>(),
                                       std::move(table));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid kernel: ") + e.what());
  }
  throw ConfigError("kernel variant must be 'finite_order' or 'geometric_mixture'");
}

Observable parse_observable(const json& j, int alphabet_size) {
  if (j.is_string() && j.get<std::string>() == "identity") {
    return Observable::identity(alphabet_size);
  }
  if (!j.is_array()) {
    throw ConfigError("observable must be an array of per-symbol values or \"identity\"");
  }
  std::vector<double> values;
  for (const json& v : j) {
    if (!v.is_number()) throw ConfigError("observable values must be numbers");
    values.push_back(v.get<double>());
  }
  if (static_cast<int>(values.size()) != alphabet_size) {
    throw ConfigError("observable has " + std::to_string(values.size()) +
                      " values for an alphabet of size " + std::to_string(alphabet_size));
  }
  try {
    return Observable(std::move(values));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

std::string to_string(Regime regime) {
  return regime == Regime::markov ? "markov" : "infinite_order";
}

std::size_t ExperimentConfig::effective_burn_in() const {
  return burn_in > 0 ? burn_in : default_burn_in(kernel);
}

std::uint64_t ExperimentConfig::block_count_for(int k_value) const {
  if (m) return *m;
  return block_count(*alpha, k_value);
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  Kernel kernel = parse_kernel(require(j, "kernel"));
  Observable observable = parse_observable(
      j.contains("observable") ? j.at("observable") : json("identity"),
      kernel.alphabet_size());
  ExperimentConfig cfg{.kernel = std::move(kernel), .observable = std::move(observable)};
  cfg.source = j;

  const std::string regime = read<std::string>(j, "regime", "markov");
  if (regime == "markov") {
    cfg.regime = Regime::markov;
  } else if (regime == "infinite_order") {
    cfg.regime = Regime::infinite_order;
  } else {
    throw ConfigError("regime must be 'markov' or 'infinite_order'");
  }

  cfg.k = static_cast<int>(read_count(j, "k", 1));
  if (j.contains("alpha") && j.contains("m")) {
    throw ConfigError("give either 'alpha' or 'm', not both");
  }
  if (j.contains("alpha")) {
    cfg.alpha = read<double>(j, "alpha", 0.0);
    if (!(*cfg.alpha > 0.0)) throw ConfigError("'alpha' must be positive");
  } else {
    cfg.m = read_count(j, "m", 100);
  }
  cfg.bootstrap_replicates = read_count(j, "B", cfg.bootstrap_replicates);
  cfg.replicates = read_count(j, "replicates", cfg.replicates);
  cfg.seed = read<std::uint64_t>(j, "seed", 0);

  if (j.contains("caps")) {
    const json& caps = j.at("caps");
    cfg.trajectory_cap = read_count(caps, "trajectory", cfg.trajectory_cap);
    cfg.burn_in = read<std::size_t>(caps, "burn_in", 0);
    cfg.approx_length = read_count(caps, "approx_length", cfg.approx_length);
  }
  cfg.length = read_count(j, "length", cfg.length);
  cfg.lag_window = read<int>(j, "lag_window", cfg.lag_window);
  if (cfg.lag_window < 0) throw ConfigError("'lag_window' must be >= 0");
  cfg.ks_threshold = read<double>(j, "ks_threshold", cfg.ks_threshold);
  cfg.t_grid = read<std::vector<double>>(j, "t_grid", cfg.t_grid);
  cfg.max_moment = read<int>(j, "max_moment", cfg.max_moment);
  if (cfg.max_moment < 1 || cfg.max_moment > 4) {
    throw ConfigError("'max_moment' must lie in 1..4");
  }
  cfg.m_grid = read<std::vector<std::uint64_t>>(j, "m_grid", {});
  cfg.k_grid = read<std::vector<int>>(j, "k_grid", {});
  for (int k : cfg.k_grid) {
    if (k < 1) throw ConfigError("'k_grid' entries must be >= 1");
  }
  cfg.horizon = read<std::size_t>(j, "horizon", cfg.horizon);

  if (j.contains("output")) {
    cfg.csv_path = read<std::string>(j.at("output"), "csv", "");
    cfg.json_path = read<std::string>(j.at("output"), "json", "");
  }
  // Surfaces an oversized schedule before any work starts.
  if (cfg.alpha) (void)block_count(*cfg.alpha, cfg.k);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

}  // namespace rbb
