#include "eocp/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "eocp/confidence.hpp"

namespace eocp {
namespace {

namespace fs = std::filesystem;

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join_params(const std::vector<std::pair<std::string, double>>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + "=" + shortest(v);
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

unsigned resolve_threads(const std::optional<unsigned>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kThreadsEnv)) {
    unsigned v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc{} && res.ptr == s.data() + s.size()) return v;
    throw ConfigError(kThreadsEnv, "must be a non-negative integer");
  }
  return 0;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

int cmd_run(const RunOptions& options, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentConfig cfg = load_config(options.config);
    if (options.seed) cfg.master_seed = *options.seed;
    if (options.iterations) cfg.iterations = *options.iterations;
    if (options.horizon) cfg.horizon = *options.horizon;
    cfg.validate_run();
    const unsigned threads = resolve_threads(options.threads);
    prepare_out_dir(options.out_dir);

    const BanditInstance instance = cfg.instance();
    const auto checkpoints = default_checkpoints(instance.arms(), cfg.horizon, cfg.checkpoint_count);
    const AggregateStats stats =
        run_batch(cfg.policies, instance, cfg.horizon, cfg.iterations, checkpoints, cfg.master_seed,
                  BatchOptions{threads, cfg.paired_streams});

    std::string regret = "policy,checkpoint_t,mean_regret,stderr,iterations\n";
    std::string commit = "policy,mean_tc,median_tc,p95_tc,miscommit_rate,miscommit_stderr\n";
    for (const auto& p : stats.policies) {
      for (const auto& c : p.checkpoints) {
        regret += p.policy + "," + std::to_string(c.round) + "," + format_real(c.mean_regret) + "," +
                  format_real(c.std_error) + "," + std::to_string(c.iterations) + "\n";
      }
      if (p.commit) {
        const auto& s = *p.commit;
        commit += p.policy + "," + format_real(s.mean_tc) + "," + format_real(s.median_tc) + "," +
                  format_real(s.p95_tc) + "," + format_real(s.miscommit_rate) + "," +
                  format_real(s.miscommit_std_error) + "\n";
      }
    }

    nlohmann::ordered_json meta;
    meta["artifact"] = "eocp";
    meta["artifact_version"] = kArtifactVersion;
    meta["csv_schema_version"] = kCsvSchemaVersion;
    meta["regret_definition"] = "pseudo-regret";
    meta["config"] = to_json(cfg);
    auto resolved = nlohmann::ordered_json::array();
    for (const auto& spec : cfg.policies) {
      const Policy probe(spec, cfg.family, instance.arms(), cfg.horizon);
      nlohmann::ordered_json pj;
      pj["label"] = spec.name();
      pj["algorithm"] = std::string(to_string(spec.algorithm));
      pj["l"] = probe.exploration_rate();
      pj["l_source"] = spec.rate ? spec.rate->describe() : "default";
      if (probe.planned_stop()) {
        pj["stop_time"] = *probe.planned_stop();
      } else {
        pj["stop_time"] = nullptr;
      }
      pj["commits"] = is_committing(spec.algorithm);
      pj["auxiliary_baseline"] = spec.algorithm == Algorithm::UniformEtc;
      resolved.push_back(std::move(pj));
    }
    meta["policies"] = std::move(resolved);
    meta["checkpoint_rounds"] = checkpoints;

    write_file(options.out_dir / "regret.csv", regret);
    write_file(options.out_dir / "commit.csv", commit);
    write_file(options.out_dir / "meta.json", meta.dump(2) + "\n");
    return kExitOk;
  });
}

std::vector<BoundReport> bound_table(const ExperimentConfig& config) {
  config.validate_bounds();
  const BanditInstance instance = config.instance();
  const std::vector<double> gaps = instance.suboptimal_gaps();
  const double dmin = instance.min_gap();
  const double rate = asymptotic_lb_rate(instance);
  std::vector<BoundReport> rows;
  auto add = [&](auto&& make) {
    for (double t : config.bound_horizons) rows.push_back(make(t));
  };
  add([&](double t) { return eocp_regret_bound(t, gaps); });
  add([&](double t) { return eocpug_regret_bound(t, gaps); });
  add([&](double t) { return kl_eocp_regret_bound(t, instance); });
  add([&](double t) { return scc_ug_bound(t, gaps, instance.arms()); });
  add([&](double t) {
    return scc_lower_bound(t, dmin, config.violation_exponent, StoppingMode::PreDetermined);
  });
  add([&](double t) {
    return scc_lower_bound(t, dmin, config.violation_exponent, StoppingMode::Adaptive);
  });
  add([&](double t) {
    return BoundReport{"asymptotic_regret_lower_bound", {{"T", t}}, rate * std::log(t), true,
                       "asymptotic rate times ln T"};
  });
  return rows;
}

int cmd_bounds(const fs::path& config, const fs::path& out_dir, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_config(config);
    std::vector<BoundReport> rows;
    try {
      rows = bound_table(cfg);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("bounds", e.what());
    }
    prepare_out_dir(out_dir);
    std::string csv = "bound,T,params,value,valid,note\n";
    for (const auto& r : rows) {
      csv += r.name + "," + shortest(r.params.front().second) + "," + join_params(r.params) + "," +
             format_real(r.value) + "," + (r.valid ? "true" : "false") + "," + r.note + "\n";
    }
    write_file(out_dir / "bounds.csv", csv);
    return kExitOk;
  });
}

int cmd_conc_check(const ConcCheckOptions& options, std::ostream& err) {
  return guarded(err, [&] {
    const auto lemma = parse_lemma(options.lemma);
    if (!lemma) throw ConfigError("lemma", "unknown lemma '" + options.lemma + "' (3a, 3b, 3c, 5)");
    if (options.trials == 0) throw ConfigError("trials", "must be at least 1");
    const RewardFamily family = parse_family(options.family);
    const auto& p = options.params;
    if (p.t1 == 0 || p.t1 > p.t2) throw ConfigError("t1", "need 1 <= t1 <= t2");
    ConcentrationResult res;
    try {
      res = mc_concentration(*lemma, p, family, options.trials, options.seed);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("params", e.what());
    }
    prepare_out_dir(options.out_dir);
    std::vector<std::pair<std::string, double>> params{
        {"l", p.l}, {"T1", static_cast<double>(p.t1)}, {"T2", static_cast<double>(p.t2)}};
    if (*lemma != ConcentrationLemma::L3a) params.emplace_back("delta", p.delta);
    if (*lemma == ConcentrationLemma::L5 || family == RewardFamily::Bernoulli) {
      params.emplace_back("mean", p.mean);
    }
    std::string csv = "lemma,params,empirical,stderr,analytic,dominated\n";
    csv += std::string(to_string(*lemma)) + "," + join_params(params) + "," +
           format_real(res.empirical) + "," + format_real(res.std_error) + "," +
           format_real(res.analytic) + "," + (res.dominated() ? "true" : "false") + "\n";
    write_file(options.out_dir / "conc.csv", csv);
    return kExitOk;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explore-then-commit bandit simulator and bound evaluator"};
  app.require_subcommand(1);

  RunOptions run;
  unsigned threads = 0;
  std::uint64_t seed = 0, iterations = 0, horizon = 0;
  auto* run_cmd = app.add_subcommand("run", "Simulate an experiment config");
  run_cmd->add_option("--config", run.config, "Experiment config (text or meta.json)")->required();
  run_cmd->add_option("--out", run.out_dir, "Output directory")->required();
  auto* threads_opt = run_cmd->add_option("--threads", threads, "Worker threads (0 = auto)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the master seed");
  auto* iter_opt = run_cmd->add_option("--iterations", iterations, "Override iterations");
  auto* horizon_opt = run_cmd->add_option("--horizon", horizon, "Override horizon T");

  fs::path bounds_config, bounds_out;
  auto* bounds_cmd = app.add_subcommand("bounds", "Tabulate theoretical bounds");
  bounds_cmd->add_option("--config", bounds_config)->required();
  bounds_cmd->add_option("--out", bounds_out)->required();

  ConcCheckOptions conc;
  auto* conc_cmd = app.add_subcommand("conc-check", "Monte Carlo check of a concentration bound");
  conc_cmd->add_option("--lemma", conc.lemma, "3a, 3b, 3c or 5")->required();
  conc_cmd->add_option("--l", conc.params.l, "Exploration level l")->required();
  conc_cmd->add_option("--t1", conc.params.t1)->required();
  conc_cmd->add_option("--t2", conc.params.t2)->required();
  conc_cmd->add_option("--delta", conc.params.delta);
  conc_cmd->add_option("--mean", conc.params.mean, "Distribution mean (lemma 5, Bernoulli noise)");
  conc_cmd->add_option("--family", conc.family, "gaussian or bernoulli");
  conc_cmd->add_option("--trials", conc.trials)->required();
  conc_cmd->add_option("--seed", conc.seed);
  conc_cmd->add_option("--out", conc.out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  if (*run_cmd) {
    if (*threads_opt) run.threads = threads;
    if (*seed_opt) run.seed = seed;
    if (*iter_opt) run.iterations = iterations;
    if (*horizon_opt) run.horizon = horizon;
    return cmd_run(run, err);
  }
  if (*bounds_cmd) return cmd_bounds(bounds_config, bounds_out, err);
  return cmd_conc_check(conc, err);
}

}  // namespace eocp
