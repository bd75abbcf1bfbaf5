#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lomd/harness.hpp"
#include "lomd/omd.hpp"
#include "lomd/tables.hpp"

namespace lomd {

/// Header: geometry,beta,eta,theory_nu,observed_nu,diff,r2,trials,blowups,pass
void write_rates_csv(std::ostream& out, const TableReport& rep);

/// Header: t,mean_D,stderr
void write_curve_csv(std::ostream& out, const MeanCurve& curve);

/// First line "# config_hash=<hex>,seed=<n>", then t,X,D,phi with
/// semicolon-joined coordinates. The final state is written as row T+1.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Static log-log plot of the mean curve with a reference slope -nu.
void write_loglog_svg(std::ostream& out, const MeanCurve& curve, const std::string& title, double nu);

/// Opens `path` for writing; throws Error naming the path on failure.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

std::string hex64(std::uint64_t v);

}  // namespace lomd
