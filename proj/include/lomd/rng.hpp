#pragma once

#include <array>
#include <cstdint>

namespace lomd {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Stateless: the output is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

/// Index of an oracle query. Integer and half-integer stages are both
/// valid; the value is stored doubled so t + 1/2 is exact.
class StepIndex {
 public:
  static constexpr StepIndex integer(std::uint64_t t) { return StepIndex(2 * t); }
  static constexpr StepIndex half_after(std::uint64_t t) { return StepIndex(2 * t + 1); }
  static constexpr StepIndex from_twice(std::uint64_t twice) { return StepIndex(twice); }

  constexpr std::uint64_t twice() const { return twice_; }
  constexpr double value() const { return 0.5 * static_cast<double>(twice_); }
  constexpr bool is_half() const { return (twice_ & 1u) != 0; }

  friend constexpr bool operator==(StepIndex, StepIndex) = default;

 private:
  constexpr explicit StepIndex(std::uint64_t twice) : twice_(twice) {}
  std::uint64_t twice_;
};

/// Replayable Gaussian noise: each (stream key, step index, coordinate)
/// maps to one standard normal draw, independent of call order.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }

  /// Standard normal draw for the given stage and coordinate.
  double standard_normal(StepIndex step, std::uint32_t coord) const;

  /// Uniform draw in (0, 1), 53-bit resolution.
  double uniform(StepIndex step, std::uint32_t coord) const;

  /// Key of an independent substream, e.g. one per Monte-Carlo trial.
  static std::uint64_t substream_key(std::uint64_t master, std::uint64_t index);

 private:
  std::uint64_t key_;
};

}  // namespace lomd
