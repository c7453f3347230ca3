// Command-line front end: draws weight ensembles, fits capital-distribution
// curves, runs named verification scenarios, and evaluates closed-form limits.
//
// Exit codes: 0 success, 1 a verification verdict failed, 2 usage/config/domain
// error, 3 the requested drift admits no stationary gap law.

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rankdiff/asymptotics.hpp"
#include "rankdiff/config.hpp"
#include "rankdiff/core_types.hpp"
#include "rankdiff/parallel.hpp"
#include "rankdiff/pd_sampler.hpp"
#include "rankdiff/report.hpp"
#include "rankdiff/rng.hpp"
#include "rankdiff/stationary_sampler.hpp"
#include "rankdiff/stats.hpp"
#include "rankdiff/verification.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace rankdiff;

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  bool threads_given = false;
  std::string out_dir = "rankdiff-out";
};

// precedence: --threads flag, then RANKDIFF_THREADS, then [run] threads, then auto
int resolve_threads(const Config* cfg, const CommonOpts& opts) {
  const int from_cfg = cfg != nullptr ? static_cast<int>(cfg->get_int_or("run", "threads", 0)) : 0;
  if (opts.threads_given) return opts.threads;
  if (const char* env = std::getenv("RANKDIFF_THREADS")) {
    int v = 0;
    const char* last = env + std::string(env).size();
    const auto res = std::from_chars(env, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
      throw ConfigError("RANKDIFF_THREADS must be an integer, got '" + std::string(env) + "'");
    }
    return v;
  }
  return from_cfg;
}

std::uint64_t resolve_seed(const Config* cfg, const CommonOpts& opts, bool required) {
  const bool cfg_has = cfg != nullptr && cfg->has("run", "seed");
  const std::uint64_t from_cfg = cfg != nullptr ? cfg->get_uint64_or("run", "seed", 0) : 0;
  if (opts.seed_given) return opts.seed;
  if (cfg_has) return from_cfg;
  if (required) {
    throw ConfigError("a master seed is required: pass --seed or set seed in [run]");
  }
  return 0;
}

void ensure_no_leftovers(const Config& cfg) {
  const auto leftovers = cfg.unconsumed();
  if (leftovers.empty()) return;
  std::string msg = "unknown key(s) in " + cfg.origin() + ":";
  for (const auto& k : leftovers) msg += " " + k;
  throw ConfigError(msg);
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// ---- weight sources -------------------------------------------------------------

struct WeightSource {
  std::string description;
  std::function<WeightSequence(Rng&)> draw;
};

WeightSource drift_source(const DriftModel& model, std::size_t n) {
  DriftSpec spec = model.generate(n);
  const StabilityCheck chk = check_stationarity_condition(spec);
  if (!chk.ok) throw ConditionViolated(chk.first_bad_index, chk.value);
  WeightSource src;
  src.description = model.name + ", n=" + std::to_string(n);
  auto shared = std::make_shared<DriftSpec>(std::move(spec));
  src.draw = [shared](Rng& rng) {
    return weights_from_spacings(sample_stationary_spacings(*shared, rng));
  };
  return src;
}

EtaRule eta_rule_from(const Config& cfg) {
  const std::string name = cfg.get_string_or("model", "eta_rule", "constant");
  EtaRule rule;
  if (name == "constant") {
    rule.kind = EtaRule::Kind::constant;
  } else if (name == "proportional") {
    rule.kind = EtaRule::Kind::proportional_to_n;
  } else if (name == "critical-log") {
    rule.kind = EtaRule::Kind::critical_log;
  } else {
    throw ConfigError("model.eta_rule must be constant, proportional, or critical-log; got '" +
                      name + "'");
  }
  if (rule.kind == EtaRule::Kind::critical_log) {
    rule.value = 0.0;
  } else {
    rule.value = cfg.get_double("model", "eta");
  }
  return rule;
}

WeightSource build_weight_source(const Config& cfg) {
  const std::string kind = cfg.get_string("model", "kind");
  if (kind == "atlas") {
    return drift_source(make_atlas_model(eta_rule_from(cfg)), cfg.get_size("run", "n"));
  }
  if (kind == "gravity") {
    return drift_source(make_gravity_model(eta_rule_from(cfg)), cfg.get_size("run", "n"));
  }
  if (kind == "custom") {
    const std::vector<double> deltas = cfg.get_double_list("model", "deltas");
    if (cfg.has("run", "n") && cfg.get_size("run", "n") != deltas.size()) {
      throw ConfigError("run.n disagrees with the number of entries in model.deltas");
    }
    return drift_source(make_custom_model(deltas), deltas.size());
  }
  if (kind == "top-push") {
    return drift_source(make_top_push_model(cfg.get_double_or("model", "push", 0.25)),
                        cfg.get_size("run", "n"));
  }
  if (kind == "two-block") {
    return drift_source(make_two_block_model(cfg.get_double("model", "eta")),
                        cfg.get_size("run", "n"));
  }
  if (kind == "pd-ppp") {
    PDConfig pd;
    pd.alpha = cfg.get_double("model", "alpha");
    const double floor = cfg.get_double_or("model", "atom_floor", 1e-8);
    pd.truncation = PppTruncation{floor};
    WeightSource src;
    src.description = "pd-ppp(alpha=" + format_double(pd.alpha) +
                      ", atom_floor=" + format_double(floor) + ")";
    src.draw = [pd](Rng& rng) { return sample_pd_ppp(pd, rng); };
    return src;
  }
  if (kind == "pd-stick") {
    PDConfig pd;
    pd.alpha = cfg.get_double("model", "alpha");
    const double tol = cfg.get_double_or("model", "residual_tol", 1e-9);
    pd.truncation = StickTruncation{tol};
    WeightSource src;
    src.description = "pd-stick(alpha=" + format_double(pd.alpha) +
                      ", residual_tol=" + format_double(tol) + ")";
    src.draw = [pd](Rng& rng) { return sample_pd_stick_breaking(pd, rng); };
    return src;
  }
  if (kind == "pd-exponentials") {
    const double beta = cfg.get_double("model", "beta");
    const std::size_t n = cfg.get_size("model", "n");
    if (!(beta > 1.0)) {
      throw InvalidBeta("model.beta must exceed 1 for a nondegenerate weight limit; got " +
                        format_double(beta));
    }
    WeightSource src;
    src.description = "pd-exponentials(beta=" + format_double(beta) +
                      ", n=" + std::to_string(n) + ")";
    src.draw = [beta, n](Rng& rng) { return sample_pd_via_ordered_exponentials(beta, n, rng); };
    return src;
  }
  throw ConfigError("unknown model.kind '" + kind + "'");
}

std::vector<WeightSequence> draw_ensemble(const WeightSource& src, std::size_t replicates,
                                          std::uint64_t seed, int threads) {
  std::vector<WeightSequence> ens;
  ens.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) ens.emplace_back(std::vector<double>{1.0});
  parallel_for(replicates, threads, [&](std::size_t r) {
    Rng rng = Rng::substream(seed, stream_id(0, r));
    ens[r] = src.draw(rng);
  });
  return ens;
}

// ---- sample ------------------------------------------------------------------------

int cmd_sample(const CommonOpts& opts) {
  const Config cfg = Config::parse_file(opts.config_path);
  const std::uint64_t seed = resolve_seed(&cfg, opts, true);
  const int threads = resolve_threads(&cfg, opts);
  const std::size_t replicates = cfg.get_size("run", "replicates");
  if (replicates < 1) throw ConfigError("run.replicates must be at least 1");
  const WeightSource src = build_weight_source(cfg);
  const std::size_t top_m = cfg.get_size_or("output", "top_m", 50);
  if (top_m < 1) throw ConfigError("output.top_m must be at least 1");
  const std::vector<double> p_list = cfg.has("output", "p_list")
                                         ? cfg.get_double_list("output", "p_list")
                                         : std::vector<double>{2.0};
  ensure_no_leftovers(cfg);

  const auto ensemble = draw_ensemble(src, replicates, seed, threads);
  const WeightEnsembleStats stats = empirical_weight_statistics(ensemble, p_list);

  std::size_t m = 0;
  for (const auto& w : ensemble) m = std::max(m, w.size());
  m = std::min(m, top_m);

  fs::create_directories(opts.out_dir);
  const fs::path csv_path = fs::path(opts.out_dir) / "weights.csv";
  {
    std::string text;
    text += "replicate";
    for (std::size_t j = 1; j <= m; ++j) text += ",w_" + std::to_string(j);
    text += ",truncated_mass\r\n";
    for (std::size_t r = 0; r < ensemble.size(); ++r) {
      const auto& w = ensemble[r];
      text += std::to_string(r + 1);
      double kept = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double v = j < w.size() ? w[j] : 0.0;
        kept += v;
        text += "," + format_double(v);
      }
      text += "," + format_double(std::max(0.0, 1.0 - kept)) + "\r\n";
    }
    write_text_file(csv_path, text);
  }

  ordered_json summary;
  summary["schema_version"] = kReportSchemaVersion;
  summary["command"] = "sample";
  summary["model"] = src.description;
  summary["seed"] = seed;
  summary["replicates"] = replicates;
  summary["top_m"] = m;
  summary["diversity"] = ordered_json::array();
  for (const MomentSummary& row : stats.diversity) {
    summary["diversity"].push_back(
        {{"p", row.p}, {"mean", row.mean}, {"std_error", row.std_error}});
  }
  summary["entropy"] = {{"mean", stats.entropy_mean}, {"std_error", stats.entropy_std_error}};
  summary["files"] = {"weights.csv"};
  const fs::path json_path = fs::path(opts.out_dir) / "summary.json";
  write_text_file(json_path, summary.dump(2) + "\n");

  std::cout << "model: " << src.description << "\n"
            << "replicates: " << replicates << "  seed: " << seed << "\n";
  for (const MomentSummary& row : stats.diversity) {
    std::cout << "D_" << format_double(row.p) << ": " << format_double(row.mean) << " (se "
              << format_double(row.std_error) << ")\n";
  }
  std::cout << "entropy: " << format_double(stats.entropy_mean) << " (se "
            << format_double(stats.entropy_std_error) << ")\n"
            << "wrote " << csv_path.string() << "\n"
            << "wrote " << json_path.string() << "\n";
  return 0;
}

// ---- capital-curve --------------------------------------------------------------------

int cmd_capital_curve(const CommonOpts& opts) {
  const Config cfg = Config::parse_file(opts.config_path);
  const std::uint64_t seed = resolve_seed(&cfg, opts, true);
  const int threads = resolve_threads(&cfg, opts);
  const std::size_t replicates = cfg.get_size("run", "replicates");
  if (replicates < 2) throw ConfigError("run.replicates must be at least 2");
  const WeightSource src = build_weight_source(cfg);
  const std::size_t ranks_requested = cfg.get_size_or("curve", "ranks", 200);
  const std::size_t fit_min = cfg.get_size_or("curve", "fit_min_rank", 10);
  const std::size_t fit_max_requested = cfg.get_size_or("curve", "fit_max_rank", 100);
  if (fit_min < 1) throw ConfigError("curve.fit_min_rank must be at least 1");
  ensure_no_leftovers(cfg);

  const auto ensemble = draw_ensemble(src, replicates, seed, threads);
  std::size_t available = ensemble.front().size();
  for (const auto& w : ensemble) available = std::min(available, w.size());
  const std::size_t ranks = std::min(ranks_requested, available);
  if (ranks < 2) throw ConfigError("fewer than 2 ranks available for the curve");

  bool clamped = false;
  std::vector<double> mean_log(ranks), q05(ranks), q95(ranks);
  {
    std::vector<double> col(replicates);
    for (std::size_t k = 0; k < ranks; ++k) {
      for (std::size_t r = 0; r < replicates; ++r) {
        double w = ensemble[r][k];
        if (w <= 0.0) {
          w = std::numeric_limits<double>::denorm_min();
          clamped = true;
        }
        col[r] = std::log(w);
      }
      mean_log[k] = mean(col);
      q05[k] = quantile(col, 0.05);
      q95[k] = quantile(col, 0.95);
    }
  }

  fs::create_directories(opts.out_dir);
  const fs::path csv_path = fs::path(opts.out_dir) / "curve.csv";
  {
    std::string text = "rank,mean_log_weight,q05,q95\r\n";
    for (std::size_t k = 0; k < ranks; ++k) {
      text += std::to_string(k + 1) + "," + format_double(mean_log[k]) + "," +
              format_double(q05[k]) + "," + format_double(q95[k]) + "\r\n";
    }
    write_text_file(csv_path, text);
  }

  const std::size_t fit_max = std::min(fit_max_requested, ranks);
  if (fit_max < fit_min + 1) {
    throw ConfigError("curve fit window [" + std::to_string(fit_min) + ", " +
                      std::to_string(fit_max) + "] has fewer than 2 ranks");
  }
  std::vector<double> xs, ys;
  for (std::size_t k = fit_min; k <= fit_max; ++k) {
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(mean_log[k - 1]);
  }
  const LinearFit fit = fit_line(xs, ys);

  ordered_json summary;
  summary["schema_version"] = kReportSchemaVersion;
  summary["command"] = "capital-curve";
  summary["model"] = src.description;
  summary["seed"] = seed;
  summary["replicates"] = replicates;
  summary["ranks"] = ranks;
  summary["fit"] = {{"min_rank", fit_min},
                    {"max_rank", fit_max},
                    {"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"r_squared", fit.r_squared}};
  summary["files"] = {"curve.csv"};
  if (clamped) {
    summary["notes"] = {"some weights underflowed to zero; their log was clamped"};
  }
  const fs::path json_path = fs::path(opts.out_dir) / "summary.json";
  write_text_file(json_path, summary.dump(2) + "\n");

  std::cout << "model: " << src.description << "\n"
            << "log-log slope over ranks [" << fit_min << ", " << fit_max
            << "]: " << format_double(fit.slope) << "  (R^2 " << format_double(fit.r_squared)
            << ")\n"
            << "wrote " << csv_path.string() << "\n"
            << "wrote " << json_path.string() << "\n";
  return 0;
}

// ---- verify -------------------------------------------------------------------------

int cmd_verify(const CommonOpts& opts, std::vector<std::string> names,
               std::optional<std::size_t> replicates_flag) {
  std::unique_ptr<Config> cfg;
  if (!opts.config_path.empty()) {
    cfg = std::make_unique<Config>(Config::parse_file(opts.config_path));
  }
  std::optional<std::size_t> replicates = replicates_flag;
  if (cfg) {
    if (names.empty()) names = cfg->get_string_list("verify", "scenarios");
    if (!replicates.has_value() && cfg->has("verify", "replicates")) {
      replicates = cfg->get_size("verify", "replicates");
    }
  }
  const std::uint64_t seed = resolve_seed(cfg.get(), opts, false);
  const int threads = resolve_threads(cfg.get(), opts);
  if (cfg) ensure_no_leftovers(*cfg);
  if (names.empty()) {
    throw ConfigError("no scenarios requested: pass --scenario or set scenarios in [verify]");
  }
  for (const auto& name : names) {
    if (!is_scenario_name(name)) {
      std::string msg = "unknown scenario '" + name + "'; valid names:";
      for (const auto& s : scenario_names()) msg += " " + s;
      throw std::invalid_argument(msg);
    }
  }

  fs::create_directories(opts.out_dir);
  bool all_ok = true;
  std::string first_fail;
  for (const auto& name : names) {
    ScenarioRequest req;
    req.name = name;
    req.seed = seed;  // 0 selects the scenario's pinned default
    req.threads = threads;
    req.replicates = replicates;
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentReport report = run_scenario(req);
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path json_path = fs::path(opts.out_dir) / (name + ".json");
    write_text_file(json_path, report_to_json(report));

    if (report.all_pass()) {
      std::cout << "[PASS] " << name << "  (seed " << report.seed << ", "
                << report.replicates << " replicates, "
                << format_double(report.runtime_seconds) << "s) -> " << json_path.string()
                << "\n";
    } else {
      const VerdictEntry* v = report.first_failure();
      std::cout << "[FAIL] " << name << ": verdict '" << v->name << "' = "
                << format_double(v->value) << " (want " << v->comparator << " "
                << format_double(v->threshold) << ") -> " << json_path.string() << "\n";
      if (all_ok) first_fail = name + ":" + v->name;
      all_ok = false;
    }
  }
  if (!all_ok) {
    std::cerr << "first failing verdict: " << first_fail << "\n";
    return 1;
  }
  return 0;
}

// ---- asymptotics ----------------------------------------------------------------------

int cmd_asymptotics(const CommonOpts& opts, double eta, bool eta_given, std::vector<double> ps,
                    bool ps_given, double tol, bool tol_given, bool out_given) {
  std::unique_ptr<Config> cfg;
  if (!opts.config_path.empty()) {
    cfg = std::make_unique<Config>(Config::parse_file(opts.config_path));
    if (!eta_given && cfg->has("asymptotics", "eta")) {
      eta = cfg->get_double("asymptotics", "eta");
      eta_given = true;
    }
    if (!ps_given && cfg->has("asymptotics", "p_list")) {
      ps = cfg->get_double_list("asymptotics", "p_list");
    }
    if (!tol_given) tol = cfg->get_double_or("asymptotics", "tol", tol);
    ensure_no_leftovers(*cfg);
  }
  if (!eta_given) {
    throw ConfigError("an eta value is required: pass --eta or set eta in [asymptotics]");
  }

  const double entropy = limit_entropy(eta);
  struct Row {
    double p;
    double moment;
    std::optional<double> dp;
  };
  std::vector<Row> rows;
  for (double p : ps) {
    Row row;
    row.p = p;
    row.moment = max_weight_moment(eta, p, tol);
    if (p > 2.0 * eta) row.dp = limit_dp(eta, p);
    rows.push_back(row);
  }

  std::cout << "eta: " << format_double(eta) << "\n"
            << "entropy limit: " << format_double(entropy) << "\n"
            << "p  mean_top_weight_moment  diversity_limit\n";
  for (const Row& row : rows) {
    std::cout << format_double(row.p) << "  " << format_double(row.moment) << "  "
              << (row.dp.has_value() ? format_double(*row.dp) : std::string("-")) << "\n";
  }

  if (out_given) {
    ordered_json summary;
    summary["schema_version"] = kReportSchemaVersion;
    summary["command"] = "asymptotics";
    summary["eta"] = eta;
    summary["tol"] = tol;
    summary["entropy_limit"] = entropy;
    summary["moments"] = ordered_json::array();
    for (const Row& row : rows) {
      ordered_json entry;
      entry["p"] = row.p;
      entry["mean_top_weight_moment"] = row.moment;
      if (row.dp.has_value()) {
        entry["diversity_limit"] = *row.dp;
      } else {
        entry["diversity_limit"] = nullptr;  // undefined for p <= 2*eta
      }
      summary["moments"].push_back(entry);
    }
    fs::create_directories(opts.out_dir);
    const fs::path json_path = fs::path(opts.out_dir) / "asymptotics.json";
    write_text_file(json_path, summary.dump(2) + "\n");
    std::cout << "wrote " << json_path.string() << "\n";
  }
  return 0;
}

void add_common(CLI::App* sub, CommonOpts& opts, bool config_required) {
  auto* config = sub->add_option("-c,--config", opts.config_path, "INI run configuration");
  if (config_required) config->required();
  sub->add_option("--seed", opts.seed, "master seed (overrides the config)")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
  sub->add_option("--threads", opts.threads, "worker threads (0 = all hardware threads)")
      ->each([&opts](const std::string&) { opts.threads_given = true; });
  sub->add_option("-o,--out", opts.out_dir, "output directory")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for Brownian particles interacting through their ranks"};
  app.require_subcommand(1);

  CommonOpts sample_opts, curve_opts, verify_opts, asym_opts;
  std::vector<std::string> verify_names;
  std::size_t verify_reps = 0;
  bool verify_reps_given = false;
  double eta = 0.0;
  bool eta_given = false;
  std::vector<double> ps = {1.0, 2.0, 3.0};
  bool ps_given = false;
  double tol = 1e-8;
  bool tol_given = false;
  bool asym_out_given = false;

  CLI::App* sample = app.add_subcommand("sample", "draw ranked weight ensembles");
  add_common(sample, sample_opts, true);

  CLI::App* curve = app.add_subcommand("capital-curve",
                                       "rank-vs-log-weight curve with a log-log fit");
  add_common(curve, curve_opts, true);

  CLI::App* verify = app.add_subcommand("verify", "run named verification scenarios");
  add_common(verify, verify_opts, false);
  verify->add_option("-s,--scenario", verify_names,
                     "scenario name (repeatable; overrides the config list)");
  verify->add_option("--replicates", verify_reps, "override the pinned replicate count")
      ->each([&verify_reps_given](const std::string&) { verify_reps_given = true; });

  CLI::App* asym = app.add_subcommand("asymptotics", "closed-form limit statistics");
  add_common(asym, asym_opts, false);
  asym->add_option("--eta", eta, "limiting top gap, in (0, 1/2)")
      ->each([&eta_given](const std::string&) { eta_given = true; });
  asym->add_option("--p", ps, "moment orders (comma separated)")
      ->delimiter(',')
      ->each([&ps_given](const std::string&) { ps_given = true; });
  asym->add_option("--tol", tol, "quadrature tolerance")
      ->each([&tol_given](const std::string&) { tol_given = true; });
  asym->get_option("-o")->each([&asym_out_given](const std::string&) { asym_out_given = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) return cmd_sample(sample_opts);
    if (curve->parsed()) return cmd_capital_curve(curve_opts);
    if (verify->parsed()) {
      return cmd_verify(verify_opts, verify_names,
                        verify_reps_given ? std::optional<std::size_t>(verify_reps)
                                          : std::nullopt);
    }
    if (asym->parsed()) {
      return cmd_asymptotics(asym_opts, eta, eta_given, ps, ps_given, tol, tol_given,
                             asym_out_given);
    }
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const ConditionViolated& e) {
    std::cerr << "stationarity failure: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidBeta& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const ModelMismatch& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
