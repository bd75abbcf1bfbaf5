// Serial reference vs OpenMP trial runner on one rate-table configuration.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "lomd/harness.hpp"

using namespace lomd;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool identical(const MeanCurve& a, const MeanCurve& b) {
  return a.mean == b.mean && a.stderr_of_mean == b.stderr_of_mean && a.trials_used == b.trials_used &&
         a.blowups == b.blowups;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time run_trials_serial against run_trials"};
  ExperimentConfig cfg;
  cfg.geometry = "entropy";
  cfg.eta = 0.55;
  cfg.T = 20000;
  cfg.trials = 64;
  int reps = 3;
  app.add_option("--geometry", cfg.geometry);
  app.add_option("--eta", cfg.eta);
  app.add_option("--T", cfg.T);
  app.add_option("--trials", cfg.trials);
  app.add_option("--threads", cfg.threads, "0 uses the OpenMP default");
  app.add_option("--reps", reps)->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  MeanCurve serial, parallel;
  const double ts = best_of(reps, [&] { serial = run_trials_serial(cfg); });
  const double tp = best_of(reps, [&] { parallel = run_trials(cfg); });
  const bool same = identical(serial, parallel);

  std::cout << fmt::format("config    {} eta={} T={} trials={}\n", cfg.geometry, cfg.eta, cfg.T, cfg.trials);
  std::cout << fmt::format("cores     {}\n", std::thread::hardware_concurrency());
  std::cout << fmt::format("serial    {:.3f} s\n", ts);
  std::cout << fmt::format("parallel  {:.3f} s  (threads={})\n", tp, cfg.threads);
  std::cout << fmt::format("speedup   {:.2f}x\n", ts / tp);
  std::cout << fmt::format("identical {}\n", same ? "yes" : "NO");
  return same ? EXIT_SUCCESS : EXIT_FAILURE;
}
