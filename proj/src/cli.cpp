#include "rbb/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "rbb/errors.hpp"
#include "rbb/harness.hpp"
#include "rbb/parallel.hpp"
#include "rbb/regeneration.hpp"
#include "rbb/schedule.hpp"

namespace rbb {
namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

struct WindowOptions {
  double delta = 0.0;
  std::string c = "inf";
  std::optional<double> delta_underbar;
  std::optional<double> alpha;
};

std::string fixed5(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file '" + path + "'");
  f << content;
  if (!f) throw ConfigError("failed writing output file '" + path + "'");
}

template <class Writer>
std::string render(Writer&& writer) {
  std::ostringstream s;
  writer(s);
  return s.str();
}

ExperimentConfig load(const Options& opt) {
  if (opt.config_path.empty()) throw ConfigError("--config is required");
  ExperimentConfig cfg = load_config(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  return cfg;
}

ExperimentReport base_report(const ExperimentConfig& cfg, const std::string& command) {
  ExperimentReport r;
  r.command = command;
  r.config = cfg.source;
  r.seed = cfg.seed;
  return r;
}

void print_window(std::ostream& out, const WindowSection& w) {
  out << "alpha window (" << fixed5(w.lower) << ", "
      << fixed5(w.upper.value_or(std::numeric_limits<double>::infinity())) << ")\n";
  out << "markov-regime lower bound " << fixed5(w.markov_lower) << "\n";
  out << "infinite-order condition c > 18 ln(1/delta): "
      << (w.infinite_order_ok ? "holds" : "fails") << "\n";
  if (w.alpha) {
    out << "alpha " << fixed5(*w.alpha) << ": "
        << (w.alpha_admissible ? "admissible" : "outside the window") << "\n";
  }
}

void print_warnings(std::ostream& out, const ExperimentReport& r) {
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
}

int cmd_window(const WindowOptions& w, std::ostream& out) {
  double c = 0.0;
  try {
    std::size_t used = 0;
    c = std::stod(w.c, &used);
    if (used != w.c.size()) throw std::invalid_argument(w.c);
  } catch (const std::exception&) {
    throw ConfigError("--c must be a number or 'inf'");
  }
  if (!(w.delta > 0.0 && w.delta <= 1.0)) throw ConfigError("--delta must lie in (0, 1]");
  if (!(c > 0.0)) throw ConfigError("--c must be positive");
  const double underbar = w.delta_underbar.value_or(w.delta);
  if (!(underbar > 0.0 && underbar <= 1.0)) {
    throw ConfigError("--delta-underbar must lie in (0, 1]");
  }
  const AdmissibilityWindow a = alpha_window(w.delta, c, underbar);
  out << "(" << fixed5(a.lower) << ", " << fixed5(a.upper) << ")\n";
  out << "nonempty: " << (a.nonempty() ? "yes" : "no") << "\n";
  out << "infinite-order condition: " << (a.infinite_order_ok ? "holds" : "fails") << "\n";
  out << "markov-regime lower bound: " << fixed5(a.markov_lower) << "\n";
  if (w.alpha) {
    out << "alpha " << fixed5(*w.alpha) << " in window: "
        << (a.contains(*w.alpha) ? "yes" : "no") << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  const ExperimentConfig cfg = load(opt);
  const ChainSource source = ChainSource::from_config(cfg, cfg.k);
  Trajectory t{source.alphabet_size(), {}};
  source.sampler(SeedSpec{derive_seed(cfg.seed, kTrajectoryStream), 0})
      ->extend(t.symbols, cfg.length);

  ExperimentReport r = base_report(cfg, "simulate");
  r.window = window_section(cfg, source);
  r.hypotheses = hypothesis_section(cfg.kernel, cfg.observable, t, cfg.lag_window);
  write_file(cfg.csv_path, render([&](std::ostream& s) { write_trajectory_csv(s, t); }));
  write_file(cfg.json_path, emit_report(r));

  out << "simulated " << t.size() << " symbols (" << to_string(cfg.regime) << ")\n";
  const auto& h = *r.hypotheses;
  out << "delta " << h.delta << ", long-run variance estimate " << h.sigma2_estimate
      << " (lag window " << h.lag_window << ")\n";
  out << "H1 " << (h.h1_ok ? "ok" : "fails") << ", H2 " << (h.h2_ok ? "ok" : "fails")
      << ", H3 " << (h.h3_ok ? "ok" : "fails") << "\n";
  return kExitOk;
}

int cmd_blocks(const Options& opt, std::ostream& out) {
  const ExperimentConfig cfg = load(opt);
  const ChainSource source = ChainSource::from_config(cfg, cfg.k);
  const std::uint64_t m = cfg.block_count_for(cfg.k);
  const Trajectory t = generate_regenerative_sample(
      source, cfg.k, m, SeedSpec{derive_seed(cfg.seed, kTrajectoryStream), 0},
      cfg.trajectory_cap);
  const RegenerationDecomposition d = decompose(t, cfg.k, m);
  const double mu = source.exact_mean(cfg.observable);
  const BlockStats stats = block_statistics(d.blocks, cfg.observable, mu);
  const RegenerationDiagnostics diag =
      regeneration_diagnostics(stats.centered_sums, *stats.reference_centered_sums);

  ExperimentReport r = base_report(cfg, "blocks");
  r.window = window_section(cfg, source);
  ReplicateRow row;
  row.block_count = m;
  row.trajectory_length = t.size();
  row.sample_length = d.return_times.back() - 1;
  row.sample_mean = stats.sample_mean;
  row.exact_mean = mu;
  row.lindeberg_ratio = diag.lindeberg_ratio;
  row.centering_ratio = diag.centering_ratio;
  r.replicates.push_back(row);
  write_file(cfg.csv_path,
             render([&](std::ostream& s) { write_blocks_csv(s, d, stats); }));
  write_file(cfg.json_path, emit_report(r));

  out << m << " blocks from " << row.sample_length << " symbols\n";
  out << "sample mean " << stats.sample_mean << ", exact mean " << mu << "\n";
  out << "lindeberg ratio " << diag.lindeberg_ratio;
  if (diag.centering_ratio) out << ", centering ratio " << *diag.centering_ratio;
  out << "\n";
  return kExitOk;
}

int cmd_clt(const Options& opt, const std::string& command, std::ostream& out) {
  ExperimentConfig cfg = load(opt);
  if (command == "bootstrap") cfg.replicates = 1;
  CltResult result = clt_experiment(cfg, command);
  if (command == "clt-check" && !cfg.k_grid.empty()) {
    result.report.lindeberg = lindeberg_trend(cfg, cfg.k_grid, cfg.replicates);
  }
  write_file(cfg.csv_path, render([&](std::ostream& s) {
               write_statistics_csv(s, result.statistics);
             }));
  write_file(cfg.json_path, emit_report(result.report));

  const ExperimentReport& r = result.report;
  print_window(out, *r.window);
  const StatisticSection& st = *r.statistics;
  out << "statistics: n " << st.count << ", mean " << st.mean << ", sd " << st.sd
      << ", skewness " << st.skewness << "\n";
  for (const auto& row : r.replicates) {
    out << "replicate " << row.replicate << ": m " << row.block_count << ", KS "
        << row.ks_distance << ", lindeberg ratio " << row.lindeberg_ratio << "\n";
  }
  for (const auto& row : r.lindeberg) {
    out << "k " << row.k << " (m " << row.m << "): mean lindeberg ratio "
        << row.mean_ratio << " +- " << row.se << "\n";
  }
  out << "KS " << (st.ks_pass ? "PASS" : "FAIL") << " (threshold " << st.ks_threshold
      << ")\n";
  print_warnings(out, r);
  return kExitOk;
}

int cmd_bounds(const Options& opt, std::ostream& out) {
  const ExperimentConfig cfg = load(opt);
  const ChainSource source = ChainSource::from_config(cfg, cfg.k);
  const BoundTables tables = tail_and_moment_check(
      source, cfg.k, cfg.t_grid, cfg.max_moment, cfg.replicates, cfg.seed,
      cfg.trajectory_cap);

  ExperimentReport r = base_report(cfg, "bounds-check");
  r.tail = tables.tail;
  r.moments = tables.moments;
  if (!cfg.m_grid.empty()) {
    r.mean_scaling = mean_scaling_check(source, cfg.observable, cfg.k, cfg.m_grid,
                                        cfg.replicates, cfg.seed, cfg.trajectory_cap);
  }
  r.conventions = {"violations are flagged only beyond 4 standard errors"};
  write_file(cfg.csv_path, render([&](std::ostream& s) { write_tail_csv(s, r.tail); }));
  write_file(cfg.json_path, emit_report(r));

  bool any = false;
  out << "t  empirical  se  bound\n";
  for (const auto& row : r.tail) {
    out << row.t << "  " << row.empirical << "  " << row.se << "  " << row.bound
        << (row.violation ? "  VIOLATION" : "") << "\n";
    any = any || row.violation;
  }
  out << "r  empirical  se  bound\n";
  for (const auto& row : r.moments) {
    out << row.r << "  " << row.empirical << "  " << row.se << "  " << row.bound
        << (row.violation ? "  VIOLATION" : "") << "\n";
    any = any || row.violation;
  }
  for (const auto& row : r.mean_scaling) {
    out << "m " << row.m << ": m E[(mean error)^2] " << row.scaled_mse << " +- "
        << row.se << "\n";
  }
  out << (any ? "bound violations found\n" : "no bound violations\n");
  return kExitOk;
}

int cmd_coupling(const Options& opt, std::ostream& out) {
  const ExperimentConfig cfg = load(opt);
  const std::vector<int> k_grid = cfg.k_grid.empty() ? std::vector<int>{cfg.k} : cfg.k_grid;
  ExperimentReport r = base_report(cfg, "coupling-check");
  r.coupling = coupling_check(cfg.kernel, k_grid, cfg.horizon, cfg.replicates,
                              cfg.effective_burn_in(), cfg.approx_length, cfg.seed);
  r.conventions = {"violations are flagged only beyond 4 standard errors",
                   "the horizon ratio has no absolute bound and is monitored as a trend"};
  write_file(cfg.csv_path,
             render([&](std::ostream& s) { write_coupling_csv(s, r.coupling); }));
  write_file(cfg.json_path, emit_report(r));

  for (const auto& row : r.coupling) {
    out << "k " << row.k << ": single-symbol rate " << row.single_rate << " +- "
        << row.single_se << " vs beta " << row.beta
        << (row.single_violation ? "  VIOLATION" : "") << "; horizon " << row.horizon
        << " rate " << row.horizon_rate;
    if (row.ratio_to_horizon_beta) out << " (ratio " << *row.ratio_to_horizon_beta << ")";
    out << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regeneration-block bootstrap experiments", "rbboot"};
  app.require_subcommand(1);
  Options opt;
  WindowOptions wopt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "experiment config (JSON)");
    sub->add_option("--seed", opt.seed, "overrides the config seed");
    sub->add_option("--threads", opt.threads, "worker threads; never changes results")
        ->check(CLI::NonNegativeNumber);
  };
  std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "sample a trajectory and check the kernel hypotheses"},
      {"blocks", "decompose a sample into excursion blocks"},
      {"bootstrap", "bootstrap statistics for one sample"},
      {"clt-check", "KS distance of the bootstrap statistic to N(0, 1)"},
      {"bounds-check", "return-time tail, moment and mean-scaling checks"},
      {"coupling-check", "discrepancy rates of coupled approximations"}};
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

  CLI::App* window = app.add_subcommand("window", "admissible alpha range");
  window->add_option("--delta", wopt.delta, "lower bound on transition probabilities")
      ->required();
  window->add_option("--c", wopt.c, "mixing exponent, or 'inf'");
  window->add_option("--delta-underbar", wopt.delta_underbar,
                     "lower bound for the approximating chains");
  window->add_option("--alpha", wopt.alpha, "schedule exponent to test");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitConfig;
  }

  const auto started = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    set_thread_count(opt.threads);
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "window") code = cmd_window(wopt, out);
    else if (name == "simulate") code = cmd_simulate(opt, out);
    else if (name == "blocks") code = cmd_blocks(opt, out);
    else if (name == "bootstrap" || name == "clt-check") code = cmd_clt(opt, name, out);
    else if (name == "bounds-check") code = cmd_bounds(opt, out);
    else code = cmd_coupling(opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DegenerateSampleError& e) {
    err << "hypothesis violation: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const ConvergenceError& e) {
    err << "hypothesis violation: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const ResourceCapError& e) {
    err << "resource cap exceeded: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const InsufficientReturnsError& e) {
    err << "resource cap exceeded: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  // Timing goes to the console only so that written reports stay reproducible.
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  out << "wall-clock " << elapsed.count() << " s\n";
  return code;
}

}  // namespace rbb
