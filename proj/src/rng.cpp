#include "lomd/rng.hpp"

#include <cmath>
#include <numbers>

namespace lomd {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

Philox4x32::Counter block(std::uint64_t key, StepIndex step, std::uint32_t lane) {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(step.twice()),
                                static_cast<std::uint32_t>(step.twice() >> 32), lane,
                                0x4E4F4953u};  // "NOIS"
  const Philox4x32::Key k{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  return Philox4x32::generate(ctr, k);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double NoiseStream::uniform(StepIndex step, std::uint32_t coord) const {
  const auto out = block(key_, step, coord);
  return to_unit(out[0], out[1]);
}

double NoiseStream::standard_normal(StepIndex step, std::uint32_t coord) const {
  // Box-Muller on one Philox block; even/odd coordinates share a block.
  const auto out = block(key_, step, 0x80000000u | (coord >> 1));
  const double u1 = to_unit(out[0], out[1]);
  const double u2 = to_unit(out[2], out[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (coord & 1u) ? radius * std::sin(angle) : radius * std::cos(angle);
}

std::uint64_t NoiseStream::substream_key(std::uint64_t master, std::uint64_t index) {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index),
                                static_cast<std::uint32_t>(index >> 32), 0u, 0x53554253u};  // "SUBS"
  const Philox4x32::Key k{static_cast<std::uint32_t>(master),
                          static_cast<std::uint32_t>(master >> 32)};
  const auto out = Philox4x32::generate(ctr, k);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace lomd
