#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gen.hpp"
#include "lomd/error.hpp"
#include "lomd/geometry.hpp"
#include "lomd/harness.hpp"
#include "lomd/omd.hpp"
#include "lomd/problems.hpp"
#include "lomd/report_io.hpp"
#include "lomd/stats.hpp"
#include "lomd/tables.hpp"

using namespace lomd;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.geometry = "entropy";
  c.eta = 0.55;
  c.T = 3000;
  c.trials = 20;
  return c;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("one noiseless trial is the deterministic trajectory") {
    ExperimentConfig c = small_config();
    c.sigma2 = 0.0;
    c.trials = 1;
    const MeanCurve m = run_trials(c);
    const auto curve = run_omd_curve(parse_problem(c.problem), parse_geometry(c.geometry),
                                     StepSchedule(c.gamma, c.t0, c.eta), OracleSpec{}, c.T, c.x_init);
    REQUIRE(m.mean.size() == curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) REQUIRE(m.mean[i] == curve[i]);
    CHECK(m.trials_used == 1);
    for (double s : m.stderr_of_mean) CHECK(s == 0.0);
  }

  TEST_CASE("parallel and serial runs are bit-identical for any thread count") {
    ExperimentConfig c = small_config();
    c.trials = 37;
    const MeanCurve serial = run_trials_serial(c);
    for (int threads : {1, 2, 3, 8}) {
      c.threads = threads;
      const MeanCurve par = run_trials(c);
      REQUIRE(par.mean == serial.mean);
      REQUIRE(par.stderr_of_mean == serial.stderr_of_mean);
    }
  }

  TEST_CASE("doubling the trials shrinks standard errors by about sqrt 2") {
    ExperimentConfig c = small_config();
    c.trials = 200;
    const MeanCurve a = run_trials(c);
    c.trials = 400;
    const MeanCurve b = run_trials(c);
    double sa = 0.0, sb = 0.0;
    for (std::size_t t = 100; t < c.T; ++t) {
      sa += a.stderr_of_mean[t];
      sb += b.stderr_of_mean[t];
    }
    CHECK(sa / sb == doctest::Approx(std::sqrt(2.0)).epsilon(0.15));
  }

  TEST_CASE("Euclidean at eta = 1 gives D t roughly constant") {
    ExperimentConfig c;
    const MeanCurve m = run_trials(c);
    // Over two decades a factor 2 allows |nu - 1| up to about 0.15.
    // Block averages of D t over successive octaves of the window.
    std::vector<double> blocks;
    for (std::uint64_t lo = c.window_lo(); 2 * lo <= c.T; lo *= 2) {
      double s = 0.0;
      for (std::uint64_t t = lo; t < 2 * lo; ++t) s += m.mean[t - 1] * static_cast<double>(t);
      blocks.push_back(s / static_cast<double>(lo));
    }
    REQUIRE(blocks.size() >= 5);
    const auto [lo, hi] = std::minmax_element(blocks.begin(), blocks.end());
    CHECK(*hi / *lo <= 2.0);
  }

  TEST_CASE("rate of an exact power law") {
    std::vector<double> curve(10000);
    for (std::size_t i = 0; i < curve.size(); ++i) curve[i] = 3.0 / std::pow(static_cast<double>(i + 1), 0.7);
    const RateEstimate r = estimate_rate(curve, 100, 10000);
    CHECK(r.nu == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(std::abs(r.nu - 0.7) <= 1e-9);
    CHECK(r.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::exp(r.intercept) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(r.points == 9901);
    std::vector<double> t, v;
    for (double s = 10; s < 10000; s *= 1.1) {
      t.push_back(s);
      v.push_back(2.0 / std::pow(s, 1.3));
    }
    CHECK(estimate_rate(t, v, 10, 10000).nu == doctest::Approx(1.3).epsilon(1e-9));
  }

  TEST_CASE("rate estimate invariants on noisy curves") {
    test::Gen gen(71);
    for (int i = 0; i < 200; ++i) {
      const double nu = gen.uniform(0.0, 2.0);
      std::vector<double> curve(2000);
      for (std::size_t k = 0; k < curve.size(); ++k)
        curve[k] = std::pow(static_cast<double>(k + 1), -nu) * std::exp(0.3 * gen.normal());
      const RateEstimate r = estimate_rate(curve, 20, 2000);
      REQUIRE(std::isfinite(r.nu));
      REQUIRE(r.r2 >= 0.0);
      REQUIRE(r.r2 <= 1.0);
      REQUIRE(std::abs(r.nu - nu) <= 6.0 * r.nu_stderr + 1e-12);
    }
  }

  TEST_CASE("rate estimate errors") {
    std::vector<double> curve(100, 1.0);
    CHECK_THROWS_AS(estimate_rate(curve, 10, 20), InsufficientData);
    CHECK_THROWS_AS(estimate_rate(curve, 10, 200), InsufficientData);
    curve[50] = 0.0;
    CHECK_THROWS_AS(estimate_rate(curve, 10, 100), NonPositiveValues);
    CHECK_THROWS_AS(ols(std::vector<double>{1.0}, std::vector<double>{2.0}), InsufficientData);
  }

  TEST_CASE("predicted exponents") {
    CHECK(predict_rate(0.0, 1.0).nu == 1.0);
    const auto p = predict_rate(0.75, 0.55, 0.0);
    CHECK(p.nu == doctest::Approx(0.15));
    CHECK(p.optimized_nu == doctest::Approx(1.0 / 6.0));
    CHECK(predict_rate(0.75, 0.55, 1e-9).optimized_nu == doctest::Approx(1.0 / 6.0));
    CHECK(predict_rate(0.75, 0.55, 0.05).optimized_nu < 1.0 / 6.0);
    CHECK(predict_rate(0.25, 0.75).nu == doctest::Approx(0.75));
    CHECK(predict_rate(0.5, 0.7).nu == doctest::Approx(0.3));
    const auto log_rate = predict_rate(0.5, 1.0);
    CHECK(log_rate.logarithmic);
    CHECK(log_rate.log_exponent == doctest::Approx(1.0));
    CHECK(log_rate.nu == 0.0);
    CHECK_THROWS_AS(predict_rate(1.0, 0.7), DomainError);
    CHECK_THROWS_AS(predict_rate(0.5, 0.5), DomainError);
    CHECK_THROWS_AS(predict_rate(0.5, 0.7, 1.0), DomainError);
  }

  TEST_CASE("tuned step exponent attains the optimized rate and nothing beats it") {
    test::Gen gen(72);
    for (int i = 0; i < 2000; ++i) {
      const double beta = gen.uniform(0.0, 0.99);
      const double eps = gen.uniform(0.0, 0.5);
      const auto p = predict_rate(beta, 0.75, eps);
      if (beta > 0.0 && p.optimal_eta == 1.0) continue;
      const auto at_opt = predict_rate(beta, p.optimal_eta, eps);
      REQUIRE(at_opt.nu == doctest::Approx(p.optimized_nu).epsilon(1e-12));
      const double sup = beta < 0.5 ? 1.0 - beta : (1.0 - beta) / (2.0 * beta);
      for (double eta = 0.51; eta < 1.0; eta += 0.01) REQUIRE(predict_rate(beta, eta, eps).nu <= sup + 1e-12);
    }
  }

  TEST_CASE("optimized exponent is continuous and decreasing across beta = 1/2") {
    const double below = predict_rate(0.5 - 1e-9, 0.75, 0.0).optimized_nu;
    const double at = predict_rate(0.5, 0.75, 0.0).optimized_nu;
    CHECK(below == doctest::Approx(at).epsilon(1e-8));
    CHECK(predict_rate(0.5, 0.75, 0.0).optimal_eta == doctest::Approx(0.5));
    CHECK(predict_rate(0.5 - 1e-9, 0.75, 0.0).optimal_eta == doctest::Approx(0.5));
    double prev = 2.0;
    for (double beta = 0.0; beta < 0.99; beta += 0.01) {
      const double v = predict_rate(beta, 0.75, 0.0).optimized_nu;
      CHECK(v < prev);
      prev = v;
    }
  }

  TEST_CASE("config validation and hashing") {
    ExperimentConfig c;
    c.validate();
    CHECK(c.window_lo() == 1000);
    CHECK(c.window_hi() == 100000);
    ExperimentConfig bad = c;
    bad.t_lo = 5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.t_hi = c.T + 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.trials = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    ExperimentConfig other = c;
    other.threads = 7;
    CHECK(other.hash() == c.hash());
    other.seed += 1;
    CHECK(other.hash() != c.hash());
  }

  TEST_CASE("all trials blowing up is a numerical error") {
    ExperimentConfig c;
    c.problem = "linear1d:lambda=1@full:d=1";
    c.geometry = "euclidean@full:d=1";
    c.gamma = 10.0;
    c.x_init = Point{1.0};
    c.T = 1000;
    c.trials = 9;
    CHECK_THROWS_AS(run_trials(c), NumericalError);
  }

  TEST_CASE("table definitions") {
    const auto c = table_rows(TableId::AppendixC);
    REQUIRE(c.size() == 4);
    CHECK(c[0].theory_nu == doctest::Approx(1.0));
    CHECK(c[1].theory_nu == doctest::Approx(0.5));
    CHECK(c[2].theory_nu == doctest::Approx(1.0 / 6.0));
    CHECK(c[3].theory_nu == doctest::Approx(0.75));
    CHECK(c[2].beta == doctest::Approx(0.75));
    CHECK(c[2].band_lo == 0.09);
    CHECK(c[2].band_hi == 0.25);
    for (const auto& r : c) {
      CHECK(r.config.trials == 100);
      CHECK(r.config.T == 100000);
      CHECK(r.config.sigma2 == 1e-4);
      CHECK(r.config.x_init == Point{0.1});
    }
    const auto s = table_rows(TableId::Supplementary07);
    REQUIRE(s.size() == 3);
    CHECK(s[0].theory_nu == doctest::Approx(0.7));
    CHECK(s[1].theory_nu == doctest::Approx(0.3));
    CHECK(s[2].theory_nu == doctest::Approx(0.1));
    CHECK(parse_table_id("appendix-c") == TableId::AppendixC);
    CHECK(parse_table_id(table_name(TableId::Supplementary07)) == TableId::Supplementary07);
    CHECK_THROWS_AS(parse_table_id("appendix-d"), ConfigError);
  }

  TEST_CASE("reduced table run and CSV output") {
    TableOptions o;
    o.trials = 4;
    o.T = 2000;
    const TableReport rep = reproduce_table(TableId::Supplementary07, o);
    CHECK(rep.reduced);
    REQUIRE(rep.rows.size() == 3);
    std::ostringstream csv;
    write_rates_csv(csv, rep);
    std::istringstream in(csv.str());
    std::string line;
    int lines = 0;
    std::getline(in, line);
    CHECK(line == "geometry,beta,eta,theory_nu,observed_nu,diff,r2,trials,blowups,pass");
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 3);
    std::ostringstream curve;
    write_curve_csv(curve, rep.rows[0].curve);
    CHECK(curve.str().rfind("t,mean_D,stderr\n", 0) == 0);
    std::ostringstream svg;
    write_loglog_svg(svg, rep.rows[0].curve, "Euclidean", rep.rows[0].observed_nu);
    CHECK(svg.str().find("<svg") != std::string::npos);
  }

  TEST_CASE("trajectory CSV carries its identity") {
    const Trajectory traj = run_omd(parse_problem("linear1d:lambda=1"), parse_geometry("entropy"),
                                    StepSchedule(1.0, 0.0, 0.7), OracleSpec{1e-4, 9}, 50, Point{0.1});
    std::ostringstream out;
    write_trajectory_csv(out, traj);
    std::istringstream in(out.str());
    std::string first, header, line;
    std::getline(in, first);
    std::getline(in, header);
    CHECK(first == "# config_hash=" + hex64(traj.config_hash()) + ",seed=9");
    CHECK(header == "t,X,D,phi");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 51);
  }
}
