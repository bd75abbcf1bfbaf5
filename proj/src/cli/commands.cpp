#include "lomd/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "lomd/error.hpp"
#include "lomd/geometry.hpp"
#include "lomd/harness.hpp"
#include "lomd/keys.hpp"
#include "lomd/legendre.hpp"
#include "lomd/omd.hpp"
#include "lomd/problems.hpp"
#include "lomd/report_io.hpp"
#include "lomd/sequences.hpp"
#include "lomd/tables.hpp"

namespace fs = std::filesystem;

namespace lomd::cli {

namespace {

constexpr double kLegendreTolerance = 0.05;
constexpr double kDescentSigma2 = 1e-4;

int default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

std::uint64_t resolve_seed(std::uint64_t fallback, const CLI::Option* flag, std::uint64_t flag_value) {
  if (flag->count() > 0) return flag_value;
  if (auto e = env_seed()) return *e;
  return fallback;
}

}  // namespace

int cmd_run(const RunSettings& s, const std::string& command_line, std::ostream& out) {
  ExperimentConfig cfg = s.experiment;
  if (cfg.threads == 0) cfg.threads = default_threads();
  const MeanCurve curve = run_trials(cfg);
  const RateEstimate rate = estimate_rate(curve.mean, cfg.window_lo(), cfg.window_hi());

  const ProblemSpec problem = parse_problem(cfg.problem);
  const GeometrySpec geometry = parse_geometry(cfg.geometry);
  const StepSchedule schedule(cfg.gamma, cfg.t0, cfg.eta);
  const OracleSpec trial0{cfg.sigma2, NoiseStream::substream_key(cfg.seed, 0)};

  const fs::path dir(s.out_dir);
  const std::string hash = hex64(cfg.hash());
  const fs::path curve_path = dir / fmt::format("curve_{}.csv", hash);
  write_file(curve_path, [&](std::ostream& f) { write_curve_csv(f, curve); });
  try {
    Trajectory traj = run_omd(problem, geometry, schedule, trial0, cfg.T, cfg.x_init);
    traj.set_identity(cfg.hash(), trial0.seed);
    write_file(dir / "trajectory.csv", [&](std::ostream& f) { write_trajectory_csv(f, traj); });
  } catch (const DivergenceError& e) {
    fmt::print(out, "trial 0 hit the blow-up guard; trajectory.csv not written ({})\n", e.what());
  }
  if (s.plot)
    write_file(dir / fmt::format("curve_{}.svg", hash), [&](std::ostream& f) {
      write_loglog_svg(f, curve, fmt::format("{} / {}", geometry.name(), cfg.problem), rate.nu);
    });

  KeyValues resolved{{"problem", cfg.problem},
                     {"geometry", cfg.geometry},
                     {"gamma", fmt::format("{}", cfg.gamma)},
                     {"t0", fmt::format("{}", cfg.t0)},
                     {"eta", fmt::format("{}", cfg.eta)},
                     {"T", std::to_string(cfg.T)},
                     {"sigma2", fmt::format("{}", cfg.sigma2)},
                     {"trials", std::to_string(cfg.trials)},
                     {"x_init", fmt::format("{}", fmt::join(cfg.x_init.begin(), cfg.x_init.end(), "|"))},
                     {"t_lo", std::to_string(cfg.window_lo())},
                     {"t_hi", std::to_string(cfg.window_hi())},
                     {"seed", std::to_string(cfg.seed)},
                     {"threads", std::to_string(cfg.threads)},
                     {"out", s.out_dir},
                     {"plot", s.plot ? "true" : "false"}};
  write_file(dir / "manifest.txt", [&](std::ostream& f) {
    write_manifest(f, resolved,
                   {fmt::format("command: {}", command_line), fmt::format("config_hash: {}", hash),
                    fmt::format("observed_nu: {:.6f} (r2 {:.6f}, stderr {:.2e}, {} points)", rate.nu, rate.r2,
                                rate.nu_stderr, rate.points),
                    fmt::format("trials_used: {}, blowups: {}", curve.trials_used, curve.blowups)});
  });
  fmt::print(out, "{} on {}: nu = {:.4f} (r2 = {:.4f}) over [{}, {}], {} trials, {} blow-ups\n", geometry.name(),
             cfg.problem, rate.nu, rate.r2, rate.t_lo, rate.t_hi, curve.trials_used, curve.blowups);
  fmt::print(out, "wrote {}\n", curve_path.string());
  return kExitOk;
}

std::vector<DescentCase> descent_cases() {
  return {
      {"euclidean", "linear1d:lambda=1", 0.25, 0.75, Point{0.1}},
      {"entropy", "linear1d:lambda=1", 0.25, 0.75, Point{0.1}},
      {"tsallis:q=1.5", "linear1d:lambda=1", 0.25, 0.75, Point{0.1}},
      {"entropy@interval", "linear1d:lambda=1,xstar=0.3@interval", 0.25, 0.75, Point{0.6}},
      {"tsallis:q=1.5@interval", "linear1d:lambda=1,xstar=0.3@interval", 0.25, 0.75, Point{0.6}},
      {"euclidean@full:d=2", "bilinear:a=1,mu=0.5", 0.2, 0.75, Point{0.5, -0.3}},
      {"euclidean@full:d=2", "affine:a=1|2", 0.125, 0.75, Point{0.5, 0.5}},
      {"entropy@simplex:d=3", "affine:a=1|2|3,xstar=0.2|0.3|0.5@simplex:d=3", 1.0 / 12.0, 0.75,
       Point{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}},
      {"hellinger@ball:d=2", "affine:a=1|2,xstar=0.3|0.2@ball:d=2", 0.125, 0.75, Point{0.0, 0.0}},
  };
}

std::vector<DescentRun> run_descent_suite(const std::vector<DescentCase>& cases, std::size_t seeds,
                                          std::uint64_t T) {
  std::vector<DescentRun> out;
  for (const auto& c : cases) {
    const ProblemSpec p = parse_problem(c.problem);
    const GeometrySpec g = parse_geometry(c.geometry);
    const StepSchedule s(c.gamma, 0.0, c.eta);
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
      const Trajectory traj = run_omd(p, g, s, OracleSpec{kDescentSigma2, seed}, T, c.x_init);
      out.push_back({c, seed, check_descent_inequality(traj, p)});
    }
  }
  return out;
}

int cmd_verify_lemmas(const std::string& out_dir, std::size_t draws, std::uint64_t T, std::uint64_t seed,
                      std::ostream& out) {
  std::size_t failures = 0;
  write_file(fs::path(out_dir) / "lemmas.csv", [&](std::ostream& f) {
    f << "lemma,params,pass,worst_margin\n";
    for (LemmaId id : {LemmaId::ChungA1, LemmaId::ChungA4, LemmaId::PolyakA3, LemmaId::A5, LemmaId::A6}) {
      std::size_t fails = 0;
      for (const auto& spec : random_hypothesis_draws(id, draws, seed)) {
        const LemmaReport r = verify_lemma_bound(id, spec, T);
        fails += r.pass ? 0 : 1;
        fmt::print(f, "{},\"{}\",{},{:.6e}\n", lemma_name(id), spec.describe(), r.pass ? "pass" : "fail",
                   r.worst_margin);
      }
      fmt::print(out, "{}: {} draws, {} failures\n", lemma_name(id), draws, fails);
      failures += fails;
    }
  });
  return failures == 0 ? kExitOk : kExitFailed;
}

int cmd_verify_descent(const std::string& out_dir, std::size_t seeds, std::uint64_t T, std::ostream& out) {
  const auto runs = run_descent_suite(descent_cases(), seeds, T);
  std::size_t violations = 0;
  write_file(fs::path(out_dir) / "descent.csv", [&](std::ostream& f) {
    f << "geometry,problem,seed,steps,violations,max_violation,pass\n";
    for (const auto& r : runs) {
      violations += r.report.violations;
      fmt::print(f, "{},\"{}\",{},{},{},{:.6e},{}\n", r.c.geometry, r.c.problem, r.seed, r.report.checked,
                 r.report.violations, r.report.max_violation, r.report.pass ? "pass" : "fail");
    }
  });
  fmt::print(out, "descent: {} trajectories, {} violations\n", runs.size(), violations);
  return violations == 0 ? kExitOk : kExitFailed;
}

int cmd_verify_legendre(const std::string& out_dir, std::ostream& out) {
  std::size_t failures = 0;
  write_file(fs::path(out_dir) / "legendre.csv", [&](std::ostream& f) {
    f << "case,beta,estimate,diff,pass\n";
    for (const auto& c : legendre_registry()) {
      const LegendreExponent a = legendre_exponent(c.geometry, c.base);
      if (!a.has_constant()) {
        fmt::print(f, "\"{}\",{},,,skipped\n", c.label, a.beta);
        continue;
      }
      const double est = estimate_legendre_exponent(c.geometry, c.base, default_radii());
      const bool ok = std::abs(est - a.beta) <= kLegendreTolerance;
      failures += ok ? 0 : 1;
      fmt::print(f, "\"{}\",{},{:.6f},{:.6f},{}\n", c.label, a.beta, est, std::abs(est - a.beta),
                 ok ? "pass" : "fail");
    }
  });
  fmt::print(out, "legendre: {} failures\n", failures);
  return failures == 0 ? kExitOk : kExitFailed;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimistic mirror descent experiments over Bregman geometries"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run trials for one configuration and write curve, trajectory and manifest");
  std::string config_path;
  std::vector<std::string> sets;
  std::string geometry, problem, x_init, window, out_dir;
  double gamma = 0, t0 = 0, eta = 0, sigma2 = 0;
  std::uint64_t T = 0, trials = 0, seed = 0;
  int threads = 0;
  bool plot = false;
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--set", sets, "Override, key=value (repeatable)");
  auto* o_geometry = run->add_option("--geometry", geometry, "Geometry key, e.g. entropy or tsallis:q=0.5");
  auto* o_problem = run->add_option("--problem", problem, "Problem key, e.g. linear1d:lambda=1");
  auto* o_gamma = run->add_option("--gamma", gamma, "Step-size scale");
  auto* o_t0 = run->add_option("--t0", t0, "Step-size offset");
  auto* o_eta = run->add_option("--eta", eta, "Step-size exponent in (1/2, 1]");
  auto* o_T = run->add_option("--T", T, "Horizon");
  auto* o_sigma2 = run->add_option("--sigma2", sigma2, "Noise variance");
  auto* o_trials = run->add_option("--trials", trials, "Number of trials");
  auto* o_x = run->add_option("--x-init", x_init, "Initial point, coordinates joined by |");
  auto* o_window = run->add_option("--window", window, "Regression window lo:hi");
  auto* o_seed = run->add_option("--seed", seed, "Master seed");
  auto* o_threads = run->add_option("--threads", threads, "Worker threads (default: logical cores)");
  auto* o_out = run->add_option("--out", out_dir, "Output directory");
  auto* o_plot = run->add_flag("--plot", plot, "Also write an SVG log-log plot");

  // table
  auto* table = app.add_subcommand("table", "Reproduce an observed-rate table");
  std::string table_id;
  std::uint64_t tb_trials = 0, tb_T = 0, tb_seed = 0;
  int tb_threads = 0;
  std::string tb_out = "out";
  bool tb_plot = false;
  table->add_option("which", table_id, "appendix-c or supplementary-0.7")->required();
  auto* tb_o_trials = table->add_option("--trials", tb_trials, "Trials per row (reduced run if < 100)");
  auto* tb_o_T = table->add_option("--T", tb_T, "Horizon (reduced run if < 100000)");
  auto* tb_o_seed = table->add_option("--seed", tb_seed, "Master seed");
  table->add_option("--threads", tb_threads, "Worker threads (default: logical cores)");
  table->add_option("--out", tb_out, "Output directory");
  table->add_flag("--plot", tb_plot, "Also write SVG plots");

  // verify
  auto* verify = app.add_subcommand("verify", "Check lemma bounds, descent inequality or Legendre exponents");
  std::string what;
  std::size_t v_seeds = 10, v_draws = 200;
  std::uint64_t v_T = 0, v_seed = 20240501;
  std::string v_out = "out";
  verify->add_option("what", what, "lemmas, descent or legendre")
      ->required()
      ->check(CLI::IsMember({"lemmas", "descent", "legendre"}));
  verify->add_option("--seeds", v_seeds, "Seeds per descent case");
  verify->add_option("--draws", v_draws, "Random draws per lemma");
  verify->add_option("--T", v_T, "Horizon (lemmas: 10000, descent: 2000)");
  auto* v_o_seed = verify->add_option("--seed", v_seed, "Seed for lemma parameter draws");
  verify->add_option("--out", v_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  const std::string command_line = join_args(argc, argv);
  try {
    if (run->parsed()) {
      KeyValues values;
      if (!config_path.empty()) merge_layer(values, read_key_value_file(config_path), config_path);
      if (auto e = env_seed()) values["seed"] = std::to_string(*e);
      KeyValues overrides;
      for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("--set expects key=value, got '{}'", kv));
        overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      merge_layer(values, overrides, "--set");
      const auto flag = [&](CLI::Option* o, const std::string& key, const std::string& v) {
        if (o->count() > 0) values[key] = v;
      };
      flag(o_geometry, "geometry", geometry);
      flag(o_problem, "problem", problem);
      flag(o_gamma, "gamma", fmt::format("{}", gamma));
      flag(o_t0, "t0", fmt::format("{}", t0));
      flag(o_eta, "eta", fmt::format("{}", eta));
      flag(o_T, "T", std::to_string(T));
      flag(o_sigma2, "sigma2", fmt::format("{}", sigma2));
      flag(o_trials, "trials", std::to_string(trials));
      flag(o_x, "x_init", x_init);
      flag(o_seed, "seed", std::to_string(seed));
      flag(o_threads, "threads", std::to_string(threads));
      flag(o_out, "out", out_dir);
      flag(o_plot, "plot", plot ? "true" : "false");
      if (o_window->count() > 0) {
        const auto colon = window.find(':');
        if (colon == std::string::npos) throw ConfigError("key 'window': expected lo:hi");
        values["t_lo"] = window.substr(0, colon);
        values["t_hi"] = window.substr(colon + 1);
      }
      return cmd_run(resolve_run(values), command_line, out);
    }
    if (table->parsed()) {
      const TableId id = parse_table_id(table_id);
      TableOptions opts;
      if (tb_o_trials->count() > 0) opts.trials = tb_trials;
      if (tb_o_T->count() > 0) opts.T = tb_T;
      opts.seed = resolve_seed(ExperimentConfig{}.seed, tb_o_seed, tb_seed);
      opts.threads = tb_threads > 0 ? tb_threads : default_threads();
      const TableReport rep = reproduce_table(id, opts);
      const fs::path dir(tb_out);
      write_file(dir / "rates.csv", [&](std::ostream& f) { write_rates_csv(f, rep); });
      std::vector<std::string> comments{fmt::format("command: {}", command_line),
                                        fmt::format("run: {}", rep.reduced ? "reduced" : "full")};
      KeyValues manifest{{"table", table_name(id)},
                         {"trials", std::to_string(rep.rows.front().config.trials)},
                         {"T", std::to_string(rep.rows.front().config.T)},
                         {"seed", std::to_string(*opts.seed)},
                         {"threads", std::to_string(opts.threads)},
                         {"reduced", rep.reduced ? "true" : "false"},
                         {"out", tb_out}};
      for (const auto& r : rep.rows) {
        const std::string hash = hex64(r.config.hash());
        write_file(dir / fmt::format("curve_{}.csv", hash), [&](std::ostream& f) { write_curve_csv(f, r.curve); });
        if (tb_plot)
          write_file(dir / fmt::format("curve_{}.svg", hash),
                     [&](std::ostream& f) { write_loglog_svg(f, r.curve, r.geometry, r.observed_nu); });
        comments.push_back(fmt::format("row {}: {} -> curve_{}.csv{}", r.geometry, r.config.canonical(), hash,
                                       r.note.empty() ? "" : " (" + r.note + ")"));
        fmt::print(out, "{:<18} beta={:.3f} eta={:.2f} theory={:.4f} observed={:.4f} band=[{:.2f}, {:.2f}] {}\n",
                   r.geometry, r.beta, r.config.eta, r.theory_nu, r.observed_nu, r.band_lo, r.band_hi,
                   r.pass ? "pass" : "FAIL");
      }
      write_file(dir / "manifest.txt", [&](std::ostream& f) { write_manifest(f, manifest, comments); });
      if (rep.reduced) fmt::print(out, "reduced run (reference setup: 100 trials, T = 100000)\n");
      return rep.all_pass() ? kExitOk : kExitFailed;
    }
    if (verify->parsed()) {
      if (what == "lemmas")
        return cmd_verify_lemmas(v_out, v_draws, v_T ? v_T : 10000,
                                 resolve_seed(v_seed, v_o_seed, v_seed), out);
      if (what == "descent") return cmd_verify_descent(v_out, v_seeds, v_T ? v_T : 2000, out);
      return cmd_verify_legendre(v_out, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitFailed;
}

}  // namespace lomd::cli
