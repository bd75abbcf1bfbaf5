#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lomd/cli/config.hpp"
#include "lomd/descent.hpp"

namespace lomd::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Parses argv and dispatches run / table / verify. Never throws.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

int cmd_run(const RunSettings& s, const std::string& command_line, std::ostream& out);

struct DescentCase {
  std::string geometry;
  std::string problem;
  double gamma;
  double eta;
  Point x_init;
};

/// Geometry/problem pairs with gamma_1 <= 1/(4L): the three half-line
/// geometries on V(x) = x, plus higher-dimensional pairs.
std::vector<DescentCase> descent_cases();

struct DescentRun {
  DescentCase c;
  std::uint64_t seed;
  DescentReport report;
};

/// Each case for seeds 1..seeds with sigma^2 = 1e-4.
std::vector<DescentRun> run_descent_suite(const std::vector<DescentCase>& cases, std::size_t seeds,
                                          std::uint64_t T);

int cmd_verify_lemmas(const std::string& out_dir, std::size_t draws, std::uint64_t T, std::uint64_t seed,
                      std::ostream& out);
int cmd_verify_descent(const std::string& out_dir, std::size_t seeds, std::uint64_t T, std::ostream& out);
int cmd_verify_legendre(const std::string& out_dir, std::ostream& out);

}  // namespace lomd::cli
