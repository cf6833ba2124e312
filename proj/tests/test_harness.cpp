#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "rbb/cli.hpp"
#include "rbb/config.hpp"
#include "rbb/errors.hpp"
#include "rbb/harness.hpp"
#include "rbb/parallel.hpp"
#include "rbb/regeneration.hpp"
#include "rbb/report.hpp"
#include "rbb/stats.hpp"

using namespace rbb;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json coin_config() {
  return json::parse(R"({
    "kernel": {"variant": "finite_order", "order": 1, "table": [[0.5, 0.5], [0.5, 0.5]]},
    "observable": "identity", "regime": "markov", "k": 3, "m": 500, "B": 2000, "seed": 7
  })");
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rbb_harness_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path p = scratch(name);
  std::ofstream(p) << j.dump();
  return p;
}

int run(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

}  // namespace

TEST(NormalCdf, WithinPublishedError) {
  for (double x = -8.0; x <= 8.0; x += 0.001) {
    EXPECT_NEAR(normal_cdf(x), oracle::phi(x), 1.5e-7) << x;
  }
}

TEST(KsDistance, PlugInQuantiles) {
  const int n = 1000;
  std::vector<double> q(n);
  for (int i = 1; i <= n; ++i) q[i - 1] = oracle::inverse_phi((i - 0.5) / n);
  EXPECT_LE(ks_distance(q), 0.5 / n + 2e-7);
}

TEST(KsDistance, PointMassAndShift) {
  EXPECT_NEAR(ks_distance(std::vector<double>(5000, 0.0)), 0.5, 1e-7);
  std::vector<double> shifted(1000);
  for (int i = 0; i < 1000; ++i) shifted[i] = 10.0 + oracle::inverse_phi((i + 0.5) / 1000);
  EXPECT_NEAR(ks_distance(shifted), 1.0, 1e-6);
  EXPECT_THROW(ks_distance(std::vector<double>{}), std::invalid_argument);
}

TEST(KsDistance, MatchesDirectSupremum) {
  Rng rng({3, 0});
  std::vector<double> x(300);
  for (double& v : x) v = std::round((rng.uniform() * 4 - 2) * 10) / 10;  // many ties
  double direct = 0.0;
  for (double t : x) {
    for (double eps : {-1e-12, 0.0}) {
      const double at = t + eps;
      double below = 0;
      for (double v : x) below += v <= at;
      direct = std::max(direct, std::abs(below / x.size() - normal_cdf(at)));
    }
  }
  EXPECT_NEAR(ks_distance(x), direct, 1e-9);
}

TEST(Summarize, Moments) {
  const std::vector<double> v{1, 2, 3, 4, 10};
  const SampleSummary s = summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 4.0);
  EXPECT_NEAR(s.sd, std::sqrt(50.0 / 4), 1e-12);
  EXPECT_GT(s.skewness, 0.0);
}

TEST(Config, ParsesAndDefaults) {
  const ExperimentConfig cfg = parse_config(coin_config());
  EXPECT_EQ(cfg.k, 3);
  EXPECT_EQ(cfg.block_count_for(3), 500u);
  EXPECT_EQ(cfg.bootstrap_replicates, 2000u);
  EXPECT_EQ(cfg.regime, Regime::markov);
  EXPECT_EQ(cfg.effective_burn_in(), 1000u);
  EXPECT_EQ(cfg.source, coin_config());
}

TEST(Config, AlphaSchedule) {
  json j = coin_config();
  j.erase("m");
  j["alpha"] = 1.0;
  EXPECT_EQ(parse_config(j).block_count_for(2), 7u);
  j["m"] = 10;
  EXPECT_THROW(parse_config(j), ConfigError);
  j.erase("m");
  j["alpha"] = 40.0;
  j["k"] = 1;
  EXPECT_THROW(parse_config(j), ResourceCapError);
}

TEST(Config, Rejections) {
  auto broken = [](auto edit) {
    json j = coin_config();
    edit(j);
    return j;
  };
  EXPECT_THROW(parse_config(broken([](json& j) { j.erase("kernel"); })), ConfigError);
  EXPECT_THROW(parse_config(broken([](json& j) { j["k"] = 0; })), ConfigError);
  EXPECT_THROW(parse_config(broken([](json& j) { j["B"] = 0; })), ConfigError);
  EXPECT_THROW(parse_config(broken([](json& j) { j["regime"] = "other"; })), ConfigError);
  EXPECT_THROW(parse_config(broken([](json& j) { j["kernel"]["table"] = {{0.5, 0.6}, {0.5, 0.5}}; })),
               ConfigError);
  EXPECT_THROW(parse_config(broken([](json& j) { j["kernel"]["variant"] = "x"; })), ConfigError);
  EXPECT_THROW(parse_config(broken([](json& j) { j["observable"] = {1.0}; })), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Report, JsonRoundTrip) {
  const ExperimentConfig cfg = parse_config(coin_config());
  ExperimentConfig small = cfg;
  small.bootstrap_replicates = 50;
  small.replicates = 2;
  CltResult r = clt_experiment(small);
  r.report.tail.push_back({3.0, 0.12, 0.01, 0.125, false});
  r.report.moments.push_back({1, 2.0, 0.1, 2.0, false});
  r.report.mean_scaling.push_back({100, 0.25, 0.01});
  CouplingRow c;
  c.k = 2;
  r.report.coupling.push_back(c);
  r.report.lindeberg.push_back({2, 7, 0.1, 0.01});
  const std::string text = emit_report(r.report);
  EXPECT_EQ(parse_report(text), r.report);
  EXPECT_EQ(emit_report(parse_report(text)), text);
  // Finite-memory kernels have an unbounded window; it is stored as null.
  EXPECT_TRUE(json::parse(text)["window"]["upper"].is_null());
}

TEST(Harness, TailAndMomentsForFairCoin) {
  const ChainSource coin = ChainSource::from_config(parse_config(coin_config()), 1);
  const std::vector<double> ts{3.0};
  const BoundTables t = tail_and_moment_check(coin, 1, ts, 2, 20'000, 5, 1u << 20);
  ASSERT_EQ(t.tail.size(), 1u);
  EXPECT_DOUBLE_EQ(t.tail[0].bound, 0.125);
  EXPECT_NEAR(t.tail[0].empirical, 0.125, 4 * t.tail[0].se);
  EXPECT_FALSE(t.tail[0].violation);
  EXPECT_DOUBLE_EQ(t.moments[0].bound, 2.0);
  EXPECT_NEAR(t.moments[0].empirical, 2.0, 4 * t.moments[0].se);
  EXPECT_DOUBLE_EQ(t.moments[1].bound, 8.0);
  EXPECT_THROW(tail_and_moment_check(coin, 1, ts, 2, 100, 5, 1u << 20), std::invalid_argument);
}

TEST(Harness, TailBoundNonincreasing) {
  const ChainSource src = ChainSource::from_config(parse_config(coin_config()), 2);
  std::vector<double> ts;
  for (int t = 1; t <= 12; ++t) ts.push_back(t);
  const BoundTables t = tail_and_moment_check(src, 2, ts, 1, 10'000, 1, 1u << 20);
  for (std::size_t i = 1; i < t.tail.size(); ++i) EXPECT_LE(t.tail[i].bound, t.tail[i - 1].bound);
}

TEST(Harness, MeanScaling) {
  const ExperimentConfig cfg = parse_config(coin_config());
  const ChainSource src = ChainSource::from_config(cfg, 1);
  const std::vector<std::uint64_t> ms{100, 400, 1600};
  const auto zero = mean_scaling_check(src, Observable({2.0, 2.0}), 1, ms, 200, 3, 1u << 24);
  for (const auto& row : zero) EXPECT_EQ(row.scaled_mse, 0.0);
  const auto rows = mean_scaling_check(src, Observable::identity(2), 1, ms, 2000, 3, 1u << 24);
  double lo = 1e300, hi = 0;
  for (const auto& row : rows) {
    EXPECT_GE(row.scaled_mse, 0.0);
    lo = std::min(lo, row.scaled_mse);
    hi = std::max(hi, row.scaled_mse);
  }
  EXPECT_LE(hi, 2 * lo);
}

TEST(Harness, CouplingFiniteOrderIsExact) {
  const Kernel k = Kernel::finite_order(2, 2, {0.9, 0.1, 0.6, 0.4, 0.5, 0.5, 0.2, 0.8});
  const std::vector<int> ks{2, 3};
  for (const auto& row : coupling_check(k, ks, 3, 2000, 1000, 0, 1)) {
    EXPECT_EQ(row.single_rate, 0.0);
    EXPECT_EQ(row.horizon_rate, 0.0);
    EXPECT_EQ(row.beta, 0.0);
    EXPECT_FALSE(row.ratio_to_horizon_beta);
  }
}

TEST(Harness, CouplingHorizonOneEqualsSingle) {
  const Kernel k = Kernel::geometric_mixture(2, 0.5, {0.8, 0.2, 0.2, 0.8});
  const std::vector<int> ks{1, 2};
  for (const auto& row : coupling_check(k, ks, 1, 5000, 1000, 200'000, 4)) {
    EXPECT_EQ(row.horizon_rate, row.single_rate);
    EXPECT_EQ(row.horizon_se, row.single_se);
  }
}

TEST(Harness, GenerationDoublesUntilCap) {
  const ChainSource src = ChainSource::from_config(parse_config(coin_config()), 3);
  const Trajectory t = generate_regenerative_sample(src, 3, 2000, {1, 0}, 1u << 20);
  EXPECT_NO_THROW(return_times(t, 3, 2000));
  EXPECT_THROW(generate_regenerative_sample(src, 3, 2000, {1, 0}, 3000), ResourceCapError);
}

TEST(Harness, CltFairCoin) {
  const CltResult r = clt_experiment(parse_config(coin_config()));
  ASSERT_TRUE(r.report.statistics);
  EXPECT_EQ(r.statistics.size(), 2000u);
  EXPECT_LT(r.report.statistics->ks_distance, 0.05);
  EXPECT_TRUE(r.report.statistics->ks_pass);
  EXPECT_NEAR(r.report.replicates[0].exact_mean, 0.5, 1e-12);
  ASSERT_TRUE(r.report.hypotheses);
  EXPECT_TRUE(r.report.hypotheses->h3_ok);
}

TEST(Harness, CltConstantObservableIsDegenerate) {
  json j = coin_config();
  j["observable"] = {1.0, 1.0};
  EXPECT_THROW(clt_experiment(parse_config(j)), DegenerateSampleError);
}

TEST(Harness, CltDeterministicAcrossThreads) {
  json j = coin_config();
  j["B"] = 300;
  j["replicates"] = 3;
  const ExperimentConfig cfg = parse_config(j);
  const int before = thread_count();
  set_thread_count(1);
  const std::string one = emit_report(clt_experiment(cfg).report);
  set_thread_count(4);
  const std::string four = emit_report(clt_experiment(cfg).report);
  set_thread_count(before);
  EXPECT_EQ(one, four);
}

TEST(Harness, InfiniteOrderAdmissibilityWarning) {
  json j = coin_config();
  j["kernel"] = json::parse(R"({"variant": "geometric_mixture", "theta": 0.2,
                               "table": [[0.7, 0.3], [0.3, 0.7]]})");
  j["regime"] = "infinite_order";
  j["B"] = 100;
  const CltResult r = clt_experiment(parse_config(j));
  EXPECT_FALSE(r.report.window->infinite_order_ok);
  EXPECT_FALSE(r.report.window->alpha_admissible);
  EXPECT_FALSE(r.report.warnings.empty());
}

TEST(Cli, WindowPrintsInterval) {
  std::string out;
  EXPECT_EQ(run({"window", "--delta", "0.45", "--c", "15"}, &out), 0);
  EXPECT_NE(out.find("(3.99254, 14.20149)"), std::string::npos) << out;
  EXPECT_EQ(run({"window", "--delta", "0.5", "--c", "inf"}, &out), 0);
  EXPECT_NE(out.find("inf)"), std::string::npos);
  EXPECT_EQ(run({"window", "--delta", "0.5", "--c", "abc"}), 1);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"clt-check", "--config", "/nonexistent.json"}), 1);
  EXPECT_EQ(run({"clt-check"}), 1);
  EXPECT_EQ(run({"no-such-command"}), 1);
  EXPECT_EQ(run({"--help"}), 0);

  json constant = coin_config();
  constant["observable"] = {1.0, 1.0};
  EXPECT_EQ(run({"clt-check", "--config", write_config("constant.json", constant).string()}), 2);

  json capped = coin_config();
  capped["caps"] = {{"trajectory", 100}};
  EXPECT_EQ(run({"clt-check", "--config", write_config("capped.json", capped).string()}), 3);

  json bad = coin_config();
  bad["kernel"]["table"] = {{0.5, 0.6}, {0.5, 0.5}};
  EXPECT_EQ(run({"simulate", "--config", write_config("bad.json", bad).string()}), 1);
}

TEST(Cli, SubcommandsWriteOutputs) {
  json j = coin_config();
  j["B"] = 200;
  j["replicates"] = 10'000;
  j["length"] = 2000;
  j["t_grid"] = {1, 2, 3};
  j["m_grid"] = {50, 100};
  j["k_grid"] = {1, 3};
  for (const std::string cmd : {"simulate", "blocks", "bootstrap", "bounds-check", "coupling-check"}) {
    json c = j;
    c["output"] = {{"csv", scratch(cmd + ".csv").string()}, {"json", scratch(cmd + ".json").string()}};
    if (cmd == "bootstrap") c["replicates"] = 1;
    const fs::path cfg = write_config(cmd + "_config.json", c);
    ASSERT_EQ(run({cmd, "--config", cfg.string(), "--threads", "2"}), 0) << cmd;
    const std::string csv = slurp(scratch(cmd + ".csv"));
    const ExperimentReport rep = parse_report(slurp(scratch(cmd + ".json")));
    EXPECT_EQ(rep.command, cmd);
    EXPECT_EQ(rep.seed, 7u);
    if (cmd == "simulate") EXPECT_EQ(csv.rfind("symbol\n", 0), 0u);
    if (cmd == "blocks") EXPECT_EQ(csv.rfind("index,start,length,centered_sum\n", 0), 0u);
    if (cmd == "bootstrap") EXPECT_EQ(csv.rfind("statistic\n", 0), 0u);
    if (cmd == "bounds-check") {
      EXPECT_EQ(csv.rfind("t,empirical,se,bound,violation\n", 0), 0u);
      EXPECT_EQ(rep.tail.size(), 3u);
      EXPECT_EQ(rep.mean_scaling.size(), 2u);
    }
    if (cmd == "coupling-check") EXPECT_EQ(rep.coupling.size(), 2u);
  }
}

TEST(Cli, SeedOverrideChangesOutput) {
  json j = coin_config();
  j["B"] = 100;
  j["output"] = {{"csv", scratch("seed.csv").string()}};
  const fs::path cfg = write_config("seed_config.json", j);
  ASSERT_EQ(run({"clt-check", "--config", cfg.string()}), 0);
  const std::string a = slurp(scratch("seed.csv"));
  ASSERT_EQ(run({"clt-check", "--config", cfg.string(), "--seed", "8"}), 0);
  EXPECT_NE(a, slurp(scratch("seed.csv")));
  ASSERT_EQ(run({"clt-check", "--config", cfg.string(), "--seed", "7"}), 0);
  EXPECT_EQ(a, slurp(scratch("seed.csv")));
}
