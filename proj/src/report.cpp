#include "rbb/report.hpp"

namespace rbb {
namespace {

using nlohmann::json;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_double(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json window_json(const WindowSection& w) {
  return {{"lower", w.lower},
          {"upper", opt(w.upper)},
          {"infinite_order_ok", w.infinite_order_ok},
          {"markov_lower", w.markov_lower},
          {"alpha", opt(w.alpha)},
          {"alpha_admissible", w.alpha_admissible}};
}

WindowSection window_from(const json& j) {
  WindowSection w;
  w.lower = j.at("lower").get<double>();
  w.upper = opt_double(j, "upper");
  w.infinite_order_ok = j.at("infinite_order_ok").get<bool>();
  w.markov_lower = j.at("markov_lower").get<double>();
  w.alpha = opt_double(j, "alpha");
  w.alpha_admissible = j.at("alpha_admissible").get<bool>();
  return w;
}

json hypotheses_json(const HypothesisSection& h) {
  return {{"delta", h.delta},       {"c", opt(h.c)},
          {"sigma2_estimate", h.sigma2_estimate},
          {"lag_window", h.lag_window},
          {"h1_ok", h.h1_ok},       {"h2_ok", h.h2_ok},
          {"h3_ok", h.h3_ok}};
}

HypothesisSection hypotheses_from(const json& j) {
  HypothesisSection h;
  h.delta = j.at("delta").get<double>();
  h.c = opt_double(j, "c");
  h.sigma2_estimate = j.at("sigma2_estimate").get<double>();
  h.lag_window = j.at("lag_window").get<int>();
  h.h1_ok = j.at("h1_ok").get<bool>();
  h.h2_ok = j.at("h2_ok").get<bool>();
  h.h3_ok = j.at("h3_ok").get<bool>();
  return h;
}

json statistics_json(const StatisticSection& s) {
  return {{"count", s.count},
          {"mean", s.mean},
          {"sd", s.sd},
          {"skewness", s.skewness},
          {"ks_distance", s.ks_distance},
          {"ks_threshold", s.ks_threshold},
          {"ks_pass", s.ks_pass}};
}

StatisticSection statistics_from(const json& j) {
  StatisticSection s;
  s.count = j.at("count").get<std::size_t>();
  s.mean = j.at("mean").get<double>();
  s.sd = j.at("sd").get<double>();
  s.skewness = j.at("skewness").get<double>();
  s.ks_distance = j.at("ks_distance").get<double>();
  s.ks_threshold = j.at("ks_threshold").get<double>();
  s.ks_pass = j.at("ks_pass").get<bool>();
  return s;
}

}  // namespace

json to_json(const ExperimentReport& r) {
  json j;
  j["command"] = r.command;
  j["config"] = r.config;
  j["seed"] = r.seed;
  j["window"] = r.window ? window_json(*r.window) : json(nullptr);
  j["hypotheses"] = r.hypotheses ? hypotheses_json(*r.hypotheses) : json(nullptr);
  j["statistics"] = r.statistics ? statistics_json(*r.statistics) : json(nullptr);

  j["replicates"] = json::array();
  for (const auto& row : r.replicates) {
    j["replicates"].push_back({{"replicate", row.replicate},
                               {"block_count", row.block_count},
                               {"trajectory_length", row.trajectory_length},
                               {"sample_length", row.sample_length},
                               {"sample_mean", row.sample_mean},
                               {"exact_mean", row.exact_mean},
                               {"lindeberg_ratio", row.lindeberg_ratio},
                               {"centering_ratio", opt(row.centering_ratio)},
                               {"ks_distance", row.ks_distance}});
  }
  j["tail"] = json::array();
  for (const auto& row : r.tail) {
    j["tail"].push_back({{"t", row.t},
                         {"empirical", row.empirical},
                         {"se", row.se},
                         {"bound", row.bound},
                         {"violation", row.violation}});
  }
  j["moments"] = json::array();
  for (const auto& row : r.moments) {
    j["moments"].push_back({{"r", row.r},
                            {"empirical", row.empirical},
                            {"se", row.se},
                            {"bound", row.bound},
                            {"violation", row.violation}});
  }
  j["mean_scaling"] = json::array();
  for (const auto& row : r.mean_scaling) {
    j["mean_scaling"].push_back(
        {{"m", row.m}, {"scaled_mse", row.scaled_mse}, {"se", row.se}});
  }
  j["coupling"] = json::array();
  for (const auto& row : r.coupling) {
    j["coupling"].push_back({{"k", row.k},
                             {"beta", row.beta},
                             {"single_rate", row.single_rate},
                             {"single_se", row.single_se},
                             {"single_violation", row.single_violation},
                             {"horizon", row.horizon},
                             {"horizon_rate", row.horizon_rate},
                             {"horizon_se", row.horizon_se},
                             {"ratio_to_horizon_beta", opt(row.ratio_to_horizon_beta)}});
  }
  j["lindeberg"] = json::array();
  for (const auto& row : r.lindeberg) {
    j["lindeberg"].push_back({{"k", row.k},
                              {"m", row.m},
                              {"mean_ratio", row.mean_ratio},
                              {"se", row.se}});
  }
  j["warnings"] = r.warnings;
  j["conventions"] = r.conventions;
  return j;
}

ExperimentReport report_from_json(const json& j) {
  ExperimentReport r;
  r.command = j.at("command").get<std::string>();
  r.config = j.at("config");
  r.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("window").is_null()) r.window = window_from(j.at("window"));
  if (!j.at("hypotheses").is_null()) r.hypotheses = hypotheses_from(j.at("hypotheses"));
  if (!j.at("statistics").is_null()) r.statistics = statistics_from(j.at("statistics"));
  for (const auto& e : j.at("replicates")) {
    ReplicateRow row;
    row.replicate = e.at("replicate").get<std::size_t>();
    row.block_count = e.at("block_count").get<std::uint64_t>();
    row.trajectory_length = e.at("trajectory_length").get<std::size_t>();
    row.sample_length = e.at("sample_length").get<std::size_t>();
    row.sample_mean = e.at("sample_mean").get<double>();
    row.exact_mean = e.at("exact_mean").get<double>();
    row.lindeberg_ratio = e.at("lindeberg_ratio").get<double>();
    row.centering_ratio = opt_double(e, "centering_ratio");
    row.ks_distance = e.at("ks_distance").get<double>();
    r.replicates.push_back(row);
  }
  for (const auto& e : j.at("tail")) {
    r.tail.push_back({e.at("t").get<double>(), e.at("empirical").get<double>(),
                      e.at("se").get<double>(), e.at("bound").get<double>(),
                      e.at("violation").get<bool>()});
  }
  for (const auto& e : j.at("moments")) {
    r.moments.push_back({e.at("r").get<int>(), e.at("empirical").get<double>(),
                         e.at("se").get<double>(), e.at("bound").get<double>(),
                         e.at("violation").get<bool>()});
  }
  for (const auto& e : j.at("mean_scaling")) {
    r.mean_scaling.push_back({e.at("m").get<std::uint64_t>(),
                              e.at("scaled_mse").get<double>(),
                              e.at("se").get<double>()});
  }
  for (const auto& e : j.at("coupling")) {
    CouplingRow row;
    row.k = e.at("k").get<int>();
    row.beta = e.at("beta").get<double>();
    row.single_rate = e.at("single_rate").get<double>();
    row.single_se = e.at("single_se").get<double>();
    row.single_violation = e.at("single_violation").get<bool>();
    row.horizon = e.at("horizon").get<std::size_t>();
    row.horizon_rate = e.at("horizon_rate").get<double>();
    row.horizon_se = e.at("horizon_se").get<double>();
    row.ratio_to_horizon_beta = opt_double(e, "ratio_to_horizon_beta");
    r.coupling.push_back(row);
  }
  for (const auto& e : j.at("lindeberg")) {
    r.lindeberg.push_back({e.at("k").get<int>(), e.at("m").get<std::uint64_t>(),
                           e.at("mean_ratio").get<double>(), e.at("se").get<double>()});
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.conventions = j.at("conventions").get<std::vector<std::string>>();
  return r;
}

std::string emit_report(const ExperimentReport& report) {
  return to_json(report).dump(2) + "\n";
}

ExperimentReport parse_report(const std::string& text) {
  return report_from_json(json::parse(text));
}

}  // namespace rbb
