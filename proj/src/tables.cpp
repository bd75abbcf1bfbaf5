#include "lomd/tables.hpp"

#include <cmath>

#include "lomd/error.hpp"
#include "lomd/geometry.hpp"
#include "lomd/legendre.hpp"

namespace lomd {

namespace {

constexpr std::size_t kReferenceTrials = 100;
constexpr std::uint64_t kReferenceHorizon = 100000;

struct RowDef {
  const char* label;
  const char* geometry;
  double eta;
  double lo;
  double hi;
};

}  // namespace

TableId parse_table_id(const std::string& name) {
  if (name == "appendix-c") return TableId::AppendixC;
  if (name == "supplementary-0.7") return TableId::Supplementary07;
  throw ConfigError("unknown table '" + name + "' (expected appendix-c or supplementary-0.7)");
}

std::string table_name(TableId id) { return id == TableId::AppendixC ? "appendix-c" : "supplementary-0.7"; }

bool TableReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return !rows.empty();
}

std::vector<TableRow> table_rows(TableId id, const TableOptions& opts) {
  std::vector<RowDef> defs;
  if (id == TableId::AppendixC) {
    defs = {{"Euclidean", "euclidean", 1.0, 0.89, 1.09},
            {"Entropy", "entropy", 0.55, 0.38, 0.58},
            {"Tsallis (q=0.5)", "tsallis:q=0.5", 0.55, 0.09, 0.25},
            {"Tsallis (q=1.5)", "tsallis:q=1.5", 0.75, 0.61, 0.85}};
  } else {
    defs = {{"Euclidean", "euclidean", 0.7, 0.66, 0.86},
            {"Entropy", "entropy", 0.7, 0.19, 0.40},
            {"Square root", "sqrt", 0.7, 0.03, 0.17}};
  }
  std::vector<TableRow> rows;
  for (const auto& d : defs) {
    TableRow row;
    row.geometry = d.label;
    row.config.problem = "linear1d:lambda=1";
    row.config.geometry = d.geometry;
    row.config.gamma = 1.0;
    row.config.t0 = 0.0;
    row.config.eta = d.eta;
    row.config.sigma2 = 1e-4;
    row.config.T = opts.T.value_or(kReferenceHorizon);
    row.config.trials = opts.trials.value_or(kReferenceTrials);
    row.config.x_init = Point{0.1};
    if (opts.seed) row.config.seed = *opts.seed;
    row.config.threads = opts.threads;
    const GeometrySpec g = parse_geometry(d.geometry);
    row.beta = legendre_exponent(g, Point{0.0}).beta;
    const RatePrediction pred = predict_rate(row.beta, d.eta, 0.0);
    // Appendix C lists the tuned exponent in the limit eps -> 0; the 0.7 table
    // lists the exponent at the step exponent actually used.
    row.theory_nu = id == TableId::AppendixC ? pred.optimized_nu : pred.nu;
    row.band_lo = d.lo;
    row.band_hi = d.hi;
    if (id == TableId::AppendixC && d.eta == 1.0)
      row.note = "eta = 1 with gamma = 1 as in the reference setup; the theory asks for a large gamma here";
    rows.push_back(std::move(row));
  }
  return rows;
}

TableReport reproduce_table(TableId id, const TableOptions& opts) {
  TableReport rep;
  rep.id = id;
  rep.rows = table_rows(id, opts);
  for (auto& row : rep.rows) {
    if (row.config.trials < kReferenceTrials || row.config.T < kReferenceHorizon) rep.reduced = true;
    row.curve = run_trials(row.config);
    const RateEstimate est = estimate_rate(row.curve.mean, row.config.window_lo(), row.config.window_hi());
    row.observed_nu = est.nu;
    row.r2 = est.r2;
    row.trials_used = row.curve.trials_used;
    row.blowups = row.curve.blowups;
    row.pass = row.observed_nu >= row.band_lo && row.observed_nu <= row.band_hi;
  }
  return rep;
}

}  // namespace lomd
