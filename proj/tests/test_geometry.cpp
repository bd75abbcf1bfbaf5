#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "geometry_checks.hpp"
#include "lomd/error.hpp"
#include "lomd/geometry.hpp"

using namespace lomd;

using test::geometry_keys;

namespace {

constexpr int kSamples = 10000;

void require_clean(const test::Tally& t) {
  CAPTURE(t.first_failure);
  CHECK(t.failures == 0);
  CHECK(t.checked > t.samples / 10);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("closed-form values") {
    CHECK(eval_h(parse_geometry("euclidean@full:d=1"), Point{0.2}) == doctest::Approx(0.02));
    CHECK(eval_h(parse_geometry("entropy@interval"), Point{0.5}) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    CHECK(eval_h(parse_geometry("hellinger@ball:d=2"), Point{0.0, 0.0}) == doctest::Approx(-1.0));

    CHECK(grad_h(parse_geometry("euclidean"), Point{0.3})[0] == doctest::Approx(0.3));
    CHECK(grad_h(parse_geometry("fracpow:p=0.5"), Point{1.0})[0] == doctest::Approx(0.0));
    CHECK(grad_h(parse_geometry("fracpow:p=0.3"), Point{1.0})[0] == doctest::Approx(0.0));
    CHECK(grad_h(parse_geometry("entropy"), Point{1.0})[0] == doctest::Approx(1.0));

    for (double x : {0.1, 0.5, 0.9})
      CHECK(divergence(parse_geometry("entropy@interval"), Point{0.0}, Point{x}) ==
            doctest::Approx(-std::log(1.0 - x)).epsilon(1e-12));
    CHECK(divergence(parse_geometry("entropy"), Point{0.0}, Point{0.3}) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(divergence(parse_geometry("hellinger@ball:d=2"), Point{1.0, 0.0}, Point{0.6, 0.0}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // D(0, x) = x^q / q on the half-line, x^p for the fractional power.
    CHECK(divergence(parse_geometry("tsallis:q=0.5"), Point{0.0}, Point{0.04}) == doctest::Approx(0.4));
    CHECK(divergence(parse_geometry("fracpow:p=0.5"), Point{0.0}, Point{0.04}) == doctest::Approx(0.2));

    CHECK(prox(parse_geometry("entropy"), Point{0.1}, Dual{-0.5})[0] ==
          doctest::Approx(0.1 * std::exp(-0.5)).epsilon(1e-14));
    CHECK(prox(parse_geometry("euclidean@interval"), Point{0.5}, Dual{0.9})[0] == 1.0);
    for (double x : {0.0, 0.2, 0.7, 1.0})
      CHECK(prox(parse_geometry("tsallis:q=1.5@interval"), Point{x}, Dual{0.0})[0] ==
            doctest::Approx(x).epsilon(1e-10));
  }

  TEST_CASE("registry keys") {
    CHECK(parse_geometry("tsallis:q=0.5").key() == "tsallis:q=0.5@halfline");
    CHECK(parse_geometry("tsallis:q=1").key() == "entropy@halfline");
    CHECK(parse_geometry("hellinger").domain() == Domain::unit_ball(1));
    CHECK(parse_geometry("tsallis:q=0.5").name() == "Tsallis (q=0.5)");
    for (const auto& k : geometry_keys()) {
      const GeometrySpec g = parse_geometry(k);
      CHECK(parse_geometry(g.key()).key() == g.key());
    }
    CHECK_THROWS_AS(parse_geometry("euclidean@simplex:d=3"), ConfigError);
    CHECK_THROWS_AS(parse_geometry("tsallis:q=2.5"), ConfigError);
    CHECK_THROWS_AS(parse_geometry("tsallis:q=-1"), ConfigError);
    CHECK_THROWS_AS(parse_geometry("fracpow:p=1.5"), ConfigError);
    CHECK_THROWS_AS(parse_geometry("hellinger@halfline"), ConfigError);
    CHECK_THROWS_AS(parse_geometry("sqrt@interval"), ConfigError);
    CHECK_THROWS_AS(parse_geometry("entropy:q=2"), ConfigError);
    CHECK_THROWS_AS(parse_geometry("nope"), ConfigError);
  }

  TEST_CASE("prox-domain matches the subdifferential domain") {
    CHECK_FALSE(parse_geometry("entropy@interval").in_prox_domain(Point{0.0}));
    CHECK_FALSE(parse_geometry("entropy@interval").in_prox_domain(Point{1.0}));
    CHECK(parse_geometry("entropy@interval").in_prox_domain(Point{0.5}));
    CHECK(parse_geometry("tsallis:q=1.5@interval").in_prox_domain(Point{0.0}));
    CHECK(parse_geometry("tsallis:q=1.5@interval").in_prox_domain(Point{1.0}));
    CHECK_FALSE(parse_geometry("tsallis:q=0.5@interval").in_prox_domain(Point{0.0}));
    CHECK_FALSE(parse_geometry("entropy").in_prox_domain(Point{0.0}));
    CHECK_FALSE(parse_geometry("fracpow:p=0.5").in_prox_domain(Point{0.0}));
    CHECK_FALSE(parse_geometry("sqrt").in_prox_domain(Point{0.0}));
    CHECK(parse_geometry("euclidean").in_prox_domain(Point{0.0}));
    CHECK_FALSE(parse_geometry("hellinger@ball:d=2").in_prox_domain(Point{1.0, 0.0}));
    CHECK(parse_geometry("hellinger@ball:d=2").in_prox_domain(Point{0.6, 0.0}));
    CHECK_FALSE(parse_geometry("entropy@simplex:d=3").in_prox_domain(Point{0.0, 0.5, 0.5}));
    CHECK_THROWS_AS(grad_h(parse_geometry("entropy"), Point{0.0}), ProxDomainError);
    CHECK_THROWS_AS(grad_h(parse_geometry("hellinger"), Point{1.0}), ProxDomainError);
  }

  TEST_CASE("strong convexity lower bound") {
    for (const auto& k : geometry_keys()) {
      CAPTURE(k);
      require_clean(test::check_strong_convexity(parse_geometry(k), kSamples, 21));
    }
  }

  TEST_CASE("divergence agrees with its definition") {
    for (const auto& k : geometry_keys()) {
      CAPTURE(k);
      require_clean(test::check_divergence_definition(parse_geometry(k), kSamples, 22));
    }
  }

  TEST_CASE("gradient matches central differences") {
    for (const auto& k : geometry_keys()) {
      CAPTURE(k);
      require_clean(test::check_gradient(parse_geometry(k), kSamples, 23));
    }
  }

  TEST_CASE("prox first-order condition") {
    for (const auto& k : geometry_keys()) {
      CAPTURE(k);
      require_clean(test::check_prox_first_order(parse_geometry(k), kSamples, 24));
    }
  }

  TEST_CASE("prox is non-expansive from dual to primal") {
    for (const auto& k : geometry_keys()) {
      CAPTURE(k);
      require_clean(test::check_nonexpansive(parse_geometry(k), kSamples, 25));
    }
  }

  TEST_CASE("zero step is the identity") {
    test::Gen gen(26);
    for (const auto& k : geometry_keys()) {
      CAPTURE(k);
      const GeometrySpec g = parse_geometry(k);
      for (int i = 0; i < 1000; ++i) {
        const Point x = gen.in_prox_domain(g);
        const Point xp = prox(g, x, Dual(g.dimension()));
        for (std::size_t c = 0; c < x.size(); ++c) REQUIRE(xp[c] == doctest::Approx(x[c]).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("entropy prox is multiplicative on the half-line and stays positive") {
    const GeometrySpec g = parse_geometry("entropy");
    CHECK(prox(g, Point{2.0}, Dual{std::log(3.0)})[0] == doctest::Approx(6.0));
    CHECK(prox(g, Point{1.0}, Dual{-2000.0})[0] >= kStateFloor);
    CHECK(std::isfinite(prox(g, Point{1e-200}, Dual{-700.0})[0]));
  }
}
