#include <cmath>
#include <set>

#include "doctest.h"
#include "lomd/rng.hpp"

using namespace lomd;

TEST_SUITE("rng") {
  TEST_CASE("philox known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("step index keeps half-integers exact") {
    CHECK(StepIndex::half_after(3).value() == 3.5);
    CHECK(StepIndex::integer(3).value() == 3.0);
    CHECK(StepIndex::half_after(3).is_half());
    CHECK_FALSE(StepIndex::integer(3).is_half());
    CHECK(StepIndex::from_twice(7) == StepIndex::half_after(3));
  }

  TEST_CASE("noise is a pure function of key, step and coordinate") {
    const NoiseStream a(42), b(42), c(43);
    for (std::uint64_t t = 0; t < 50; ++t) {
      const auto s = StepIndex::half_after(t);
      CHECK(a.standard_normal(s, 0) == b.standard_normal(s, 0));
      CHECK(a.standard_normal(s, 1) == b.standard_normal(s, 1));
      CHECK(a.standard_normal(s, 0) != c.standard_normal(s, 0));
      CHECK(a.standard_normal(s, 0) != a.standard_normal(StepIndex::integer(t), 0));
    }
  }

  TEST_CASE("standard normal moments over 1e6 draws") {
    const NoiseStream s(7);
    const int n = 1000000;
    double sum = 0.0, sq = 0.0, fourth = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = s.standard_normal(StepIndex::from_twice(static_cast<std::uint64_t>(i)), i % 3);
      sum += z;
      sq += z * z;
      fourth += z * z * z * z;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    // 5 standard errors
    CHECK(std::abs(mean) <= 5.0 / std::sqrt(n));
    CHECK(std::abs(var - 1.0) <= 5.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(fourth / n - 3.0) <= 5.0 * std::sqrt(96.0 / n));
  }

  TEST_CASE("uniform stays in the open unit interval") {
    const NoiseStream s(9);
    double sum = 0.0;
    for (std::uint64_t i = 0; i < 100000; ++i) {
      const double u = s.uniform(StepIndex::from_twice(i), 0);
      REQUIRE(u > 0.0);
      REQUIRE(u < 1.0);
      sum += u;
    }
    CHECK(std::abs(sum / 100000 - 0.5) <= 5.0 * std::sqrt(1.0 / 12.0 / 100000));
  }

  TEST_CASE("substream keys are distinct and deterministic") {
    std::set<std::uint64_t> keys;
    for (std::uint64_t k = 0; k < 10000; ++k) keys.insert(NoiseStream::substream_key(20240501, k));
    CHECK(keys.size() == 10000);
    CHECK(NoiseStream::substream_key(1, 5) == NoiseStream::substream_key(1, 5));
    CHECK(NoiseStream::substream_key(1, 5) != NoiseStream::substream_key(2, 5));
  }
}
