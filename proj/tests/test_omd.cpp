#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "lomd/descent.hpp"
#include "lomd/error.hpp"
#include "lomd/geometry.hpp"
#include "lomd/omd.hpp"
#include "lomd/problems.hpp"

using namespace lomd;

namespace {

struct Setup {
  const char* geometry;
  const char* problem;
  Point x_init;
};

std::vector<Setup> setups() {
  return {{"euclidean", "linear1d:lambda=1", Point{0.1}},
          {"entropy", "linear1d:lambda=1", Point{0.1}},
          {"tsallis:q=1.5", "linear1d:lambda=1", Point{0.1}},
          {"tsallis:q=0.5", "linear1d:lambda=1", Point{0.1}},
          {"fracpow:p=0.5", "linear1d:lambda=1", Point{0.1}},
          {"sqrt", "linear1d:lambda=1", Point{0.1}},
          {"entropy@interval", "linear1d:lambda=1,xstar=0.3@interval", Point{0.6}},
          {"euclidean@full:d=2", "bilinear:a=1,mu=0.5", Point{0.5, -0.3}},
          {"entropy@simplex:d=3", "affine:a=1|2|3,xstar=0.2|0.3|0.5@simplex:d=3", Point{0.6, 0.2, 0.2}},
          {"hellinger@ball:d=2", "affine:a=1|2,xstar=0.3|0.2@ball:d=2", Point{0.0, 0.0}}};
}

}  // namespace

TEST_SUITE("omd") {
  TEST_CASE("step schedule is positive, non-increasing and square-summable") {
    test::Gen gen(51);
    for (int i = 0; i < 200; ++i) {
      const double gamma = gen.log_uniform(1e-3, 10.0);
      const double t0 = gen.index(3) == 0 ? 0.0 : gen.log_uniform(1e-2, 1e3);
      const double eta = gen.uniform(0.51, 1.0);
      const StepSchedule s(gamma, t0, eta);
      double sum = 0.0, prev = std::numeric_limits<double>::infinity();
      for (std::uint64_t t = 1; t <= 20000; ++t) {
        const double g = s.at(t);
        REQUIRE(g > 0.0);
        REQUIRE(g <= prev);
        prev = g;
        sum += g * g;
      }
      REQUIRE(sum <= s.square_sum_bound() * (1 + 1e-12));
      if (t0 > 0.0) REQUIRE(sum <= gamma * gamma * std::pow(t0, 1 - 2 * eta) / (2 * eta - 1));
    }
    CHECK_THROWS_AS(StepSchedule(1.0, 0.0, 0.5), ConfigError);
    CHECK_THROWS_AS(StepSchedule(1.0, 0.0, 1.1), ConfigError);
    CHECK_THROWS_AS(StepSchedule(0.0, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(StepSchedule(1.0, -1.0, 1.0), ConfigError);
  }

  TEST_CASE("first Euclidean step contracts by 1 - gamma + gamma^2") {
    const ProblemSpec p = parse_problem("linear1d:lambda=1@full:d=1");
    const GeometrySpec g = parse_geometry("euclidean@full:d=1");
    for (double gamma : {0.1, 0.25, 0.5}) {
      const double t0 = 1e12;
      const StepSchedule s(gamma * (1.0 + t0), t0, 1.0);
      const Trajectory traj = run_omd(p, g, s, OracleSpec{}, 2, Point{0.7});
      CHECK(traj.gamma(0) == doctest::Approx(gamma).epsilon(1e-12));
      CHECK(traj.state(1)[0] == doctest::Approx((1 - gamma + gamma * gamma) * 0.7).epsilon(1e-12));
    }
  }

  TEST_CASE("solution is a fixed point without noise") {
    for (const auto& c : setups()) {
      CAPTURE(c.geometry);
      const ProblemSpec p = parse_problem(c.problem);
      const GeometrySpec g = parse_geometry(c.geometry);
      if (!g.in_prox_domain(p.solution())) continue;
      const Trajectory traj = run_omd(p, g, StepSchedule(0.2, 0.0, 0.75), OracleSpec{}, 100, p.solution());
      for (std::size_t i = 0; i < traj.size(); ++i) {
        for (std::size_t k = 0; k < g.dimension(); ++k)
          REQUIRE(traj.state(i)[k] == doctest::Approx(p.solution()[k]).epsilon(1e-14));
        REQUIRE(traj.divergence(i) <= 1e-20);
      }
    }
  }

  TEST_CASE("trajectory invariants") {
    for (const auto& c : setups()) {
      CAPTURE(c.geometry);
      const ProblemSpec p = parse_problem(c.problem);
      const GeometrySpec g = parse_geometry(c.geometry);
      const double gamma = 0.2 / p.lipschitz();
      const OracleSpec o{1e-3, 17};
      const Trajectory traj = run_omd(p, g, StepSchedule(gamma, 0.0, 0.75), o, 2000, c.x_init);
      REQUIRE(traj.size() == 2000);
      CHECK_FALSE(traj.thinned());
      CHECK(traj.phi(0) == 0.0);
      CHECK(traj.state(0) == c.x_init);
      for (std::size_t i = 0; i < traj.size(); ++i) {
        REQUIRE(traj.step(i) == i + 1);
        REQUIRE(p.domain().contains(traj.state(i)));
        REQUIRE(p.domain().contains(traj.lead(i)));
        REQUIRE(g.in_prox_domain(traj.state(i)));
        const double d = divergence(g, p.solution(), traj.state(i));
        REQUIRE(std::abs(d - traj.divergence(i)) <= 1e-12 * std::max(1.0, d));
        REQUIRE(traj.gamma(i) == StepSchedule(gamma, 0.0, 0.75).at(i + 1));
        // Signals are V + U at the recorded states.
        const Dual v = eval_field(p, traj.lead(i));
        for (std::size_t k = 0; k < g.dimension(); ++k)
          REQUIRE(traj.signal_lead(i)[k] == doctest::Approx(v[k] + traj.noise_lead(i)[k]).epsilon(1e-12));
        if (i > 0) {
          const double jump = p.domain().dual_norm(traj.signal_prev(i) - traj.signal_prev(i - 1));
          REQUIRE(traj.phi(i) == doctest::Approx(0.5 * traj.gamma(i - 1) * traj.gamma(i - 1) * jump * jump));
          REQUIRE(traj.signal_prev(i) == traj.signal_lead(i - 1));
        }
      }
    }
  }

  TEST_CASE("runs replay bit-for-bit and curves match trajectories") {
    const ProblemSpec p = parse_problem("linear1d:lambda=1");
    const GeometrySpec g = parse_geometry("entropy");
    const StepSchedule s(1.0, 0.0, 0.55);
    const OracleSpec o{1e-4, 2024};
    const Trajectory a = run_omd(p, g, s, o, 5000, Point{0.1});
    const Trajectory b = run_omd(p, g, s, o, 5000, Point{0.1});
    const auto curve = run_omd_curve(p, g, s, o, 5000, Point{0.1});
    REQUIRE(curve.size() == 5000);
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(a.state(i) == b.state(i));
      REQUIRE(a.divergence(i) == curve[i]);
    }
    CHECK(a.config_hash() == b.config_hash());
    CHECK(a.final_state() == b.final_state());
    const Trajectory c = run_omd(p, g, s, OracleSpec{1e-4, 2025}, 5000, Point{0.1});
    CHECK_FALSE(c.final_state() == a.final_state());
  }

  TEST_CASE("observer can stop a run early") {
    const ProblemSpec p = parse_problem("linear1d:lambda=1");
    const GeometrySpec g = parse_geometry("euclidean");
    std::uint64_t last = 0;
    run_omd_observed(p, g, StepSchedule(0.5, 0.0, 1.0), OracleSpec{}, 1000, Point{0.1},
                     [&](const Trajectory::Row& r) {
                       last = r.t;
                       return r.t < 10;
                     });
    CHECK(last == 10);
  }

  TEST_CASE("long runs keep geometric checkpoints") {
    const ProblemSpec p = parse_problem("linear1d:lambda=1");
    const GeometrySpec g = parse_geometry("euclidean");
    const std::uint64_t T = kDenseLimit + 1000;
    const Trajectory traj = run_omd(p, g, StepSchedule(0.5, 0.0, 1.0), OracleSpec{1e-4, 3}, T, Point{0.1});
    CHECK(traj.thinned());
    const auto steps = thinned_steps(T);
    REQUIRE(traj.size() == steps.size());
    CHECK(traj.step(traj.size() - 1) == T);
    for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i] > steps[i - 1]);
    CHECK_THROWS_AS(check_descent_inequality(traj, p), PreconditionError);
  }

  TEST_CASE("input errors") {
    const ProblemSpec p = parse_problem("linear1d:lambda=1");
    const StepSchedule s(0.5, 0.0, 1.0);
    CHECK_THROWS_AS(run_omd(p, parse_geometry("entropy"), s, OracleSpec{}, 10, Point{0.0}), ProxDomainError);
    CHECK_THROWS_AS(run_omd(p, parse_geometry("entropy@interval"), s, OracleSpec{}, 10, Point{0.5}), ConfigError);
    CHECK_THROWS_AS(run_omd(p, parse_geometry("euclidean"), s, OracleSpec{}, 1, Point{0.5}), ConfigError);
    CHECK_THROWS_AS(run_omd(p, parse_geometry("euclidean"), s, OracleSpec{}, 10, Point{0.5, 0.5}), ConfigError);
    CHECK_THROWS_AS(run_mirror_prox(p, parse_geometry("euclidean"), -1.0, 10, Point{0.5}), ConfigError);
  }

  TEST_CASE("blow-up guard") {
    const ProblemSpec p = parse_problem("linear1d:lambda=1@full:d=1");
    const GeometrySpec g = parse_geometry("euclidean@full:d=1");
    CHECK_THROWS_AS(run_omd(p, g, StepSchedule(10.0, 0.0, 1.0), OracleSpec{}, 1000, Point{1.0}), DivergenceError);
  }

  TEST_CASE("mirror-prox closed forms") {
    const ProblemSpec p = parse_problem("linear1d:lambda=1");
    {
      const double gamma = 0.5;
      const auto traj = run_mirror_prox(p, parse_geometry("euclidean"), gamma, 200, Point{0.8});
      for (std::size_t i = 0; i < traj.size(); ++i)
        REQUIRE(traj.state(i)[0] ==
                doctest::Approx(std::pow(1 - gamma + gamma * gamma, static_cast<double>(i)) * 0.8).epsilon(1e-12));
    }
    {
      // X_{t+1} = X_t exp(-gamma X_t exp(-gamma X_t))
      const double gamma = 0.1;
      const auto traj = run_mirror_prox(p, parse_geometry("entropy"), gamma, 500, Point{0.1});
      double x = 0.1;
      for (std::size_t i = 0; i < traj.size(); ++i) {
        REQUIRE(traj.state(i)[0] == doctest::Approx(x).epsilon(1e-13));
        REQUIRE(traj.divergence(i) == doctest::Approx(x).epsilon(1e-13));
        x *= std::exp(-gamma * x * std::exp(-gamma * x));
      }
      const auto curve = run_mirror_prox_curve(p, parse_geometry("entropy"), gamma, 500, Point{0.1});
      for (std::size_t i = 0; i < curve.size(); ++i) REQUIRE(curve[i] == traj.divergence(i));
    }
  }

  TEST_CASE("descent inequality: noiseless trajectories") {
    for (const auto& c : setups()) {
      CAPTURE(c.geometry);
      const ProblemSpec p = parse_problem(c.problem);
      const GeometrySpec g = parse_geometry(c.geometry);
      const double gamma = 0.25 / p.lipschitz();
      const auto traj = run_omd(p, g, StepSchedule(gamma, 0.0, 0.75), OracleSpec{}, 2000, c.x_init);
      const auto rep = check_descent_inequality(traj, p);
      CHECK(rep.pass);
      CHECK(rep.violations == 0);
      CHECK(rep.checked == 2000);
    }
  }

  TEST_CASE("descent inequality: random compliant noisy runs") {
    test::Gen gen(52);
    const auto all = setups();
    for (int i = 0; i < 200; ++i) {
      const auto& c = all[gen.index(all.size())];
      CAPTURE(c.geometry);
      const ProblemSpec p = parse_problem(c.problem);
      const GeometrySpec g = parse_geometry(c.geometry);
      const double gamma = gen.uniform(0.01, 0.25) / p.lipschitz();
      const double t0 = gen.index(2) ? 0.0 : gen.uniform(0.0, 50.0);
      const double eta = gen.uniform(0.51, 1.0);
      const double sigma2 = gen.log_uniform(1e-8, 1e-2);
      try {
        const auto traj = run_omd(p, g, StepSchedule(gamma, t0, eta), OracleSpec{sigma2, gen.engine()()}, 500,
                                  c.x_init);
        const auto rep = check_descent_inequality(traj, p);
        CAPTURE(rep.max_violation);
        REQUIRE(rep.pass);
      } catch (const NumericalError&) {
        // Tsallis q < 1 and the fractional powers have no prox for large positive signals.
      }
    }
  }

  TEST_CASE("descent inequality rejects steps above 1/(4L)") {
    const ProblemSpec p = parse_problem("linear1d:lambda=1");
    const auto traj = run_omd(p, parse_geometry("euclidean"), StepSchedule(0.3, 0.0, 1.0), OracleSpec{}, 100,
                              Point{0.1});
    CHECK_THROWS_AS(check_descent_inequality(traj, p), PreconditionError);
  }
}
