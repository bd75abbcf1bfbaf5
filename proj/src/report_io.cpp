#include "lomd/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "lomd/error.hpp"

namespace lomd {

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

void write_rates_csv(std::ostream& out, const TableReport& rep) {
  out << "geometry,beta,eta,theory_nu,observed_nu,diff,r2,trials,blowups,pass\n";
  for (const auto& r : rep.rows)
    fmt::print(out, "{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{}\n", r.geometry, r.beta, r.config.eta,
               r.theory_nu, r.observed_nu, r.diff(), r.r2, r.trials_used, r.blowups, r.pass ? "pass" : "fail");
}

void write_curve_csv(std::ostream& out, const MeanCurve& curve) {
  out << "t,mean_D,stderr\n";
  for (std::size_t i = 0; i < curve.mean.size(); ++i)
    fmt::print(out, "{},{:.17g},{:.17g}\n", i + 1, curve.mean[i], curve.stderr_of_mean[i]);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  fmt::print(out, "# config_hash={},seed={}\n", hex64(traj.config_hash()), traj.seed());
  out << "t,X,D,phi\n";
  const auto coords = [](const Point& x) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) s += fmt::format("{}{:.17g}", i ? ";" : "", x[i]);
    return s;
  };
  for (std::size_t i = 0; i < traj.size(); ++i)
    fmt::print(out, "{},{},{:.17g},{:.17g}\n", traj.step(i), coords(traj.state(i)), traj.divergence(i),
               traj.phi(i));
  if (traj.size() > 0)
    fmt::print(out, "{},{},{:.17g},{:.17g}\n", traj.step(traj.size() - 1) + 1, coords(traj.final_state()),
               traj.final_divergence(), traj.final_phi());
}

void write_loglog_svg(std::ostream& out, const MeanCurve& curve, const std::string& title, double nu) {
  constexpr double W = 640, H = 420, M = 50;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < curve.mean.size(); ++i)
    if (curve.mean[i] > 0.0) pts.emplace_back(std::log10(double(i + 1)), std::log10(curve.mean[i]));
  fmt::print(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n", W, H);
  fmt::print(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  fmt::print(out, "<text x=\"{}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n", M, title);
  if (pts.size() >= 2) {
    double x0 = pts.front().first, x1 = pts.back().first;
    double y0 = pts.front().second, y1 = y0;
    for (const auto& p : pts) {
      y0 = std::min(y0, p.second);
      y1 = std::max(y1, p.second);
    }
    if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
    if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
    const auto sx = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
    const auto sy = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };
    fmt::print(out, "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", M, M,
               W - 2 * M, H - 2 * M);
    // At most ~2000 vertices: sample uniformly in log t.
    const std::size_t stride = std::max<std::size_t>(1, pts.size() / 2000);
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); i += stride)
      fmt::print(out, "{:.1f},{:.1f} ", sx(pts[i].first), sy(pts[i].second));
    out << "\"/>\n";
    const double ya = pts.back().second + nu * (x1 - x0);
    fmt::print(out,
               "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"gray\" "
               "stroke-dasharray=\"4 3\"/>\n",
               sx(x0), sy(std::clamp(ya, y0, y1)), sx(x1), sy(pts.back().second));
    fmt::print(out,
               "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">log10 t: {:.2f} .. {:.2f}; "
               "log10 D: {:.2f} .. {:.2f}; dashed slope -{:.3f}</text>\n",
               M, H - 15, x0, x1, y0, y1, nu);
  }
  out << "</svg>\n";
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error(fmt::format("cannot open {} for writing", path.string()));
  body(f);
  if (!f) throw Error(fmt::format("failed writing {}", path.string()));
}

}  // namespace lomd
