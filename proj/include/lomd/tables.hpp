#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lomd/harness.hpp"

namespace lomd {

enum class TableId { AppendixC, Supplementary07 };

/// "appendix-c" or "supplementary-0.7"; ConfigError otherwise.
TableId parse_table_id(const std::string& name);
std::string table_name(TableId id);

struct TableRow {
  std::string geometry;
  ExperimentConfig config;
  double beta = 0.0;
  double theory_nu = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  std::string note;

  // Filled by reproduce_table.
  double observed_nu = 0.0;
  double r2 = 0.0;
  std::size_t trials_used = 0;
  std::size_t blowups = 0;
  bool pass = false;
  MeanCurve curve;

  double diff() const { return std::abs(observed_nu - theory_nu); }
};

struct TableOptions {
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> T;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

struct TableReport {
  TableId id = TableId::AppendixC;
  std::vector<TableRow> rows;
  /// Trials or horizon lowered below the reference setup.
  bool reduced = false;

  bool all_pass() const;
};

/// Row definitions with reference setup: gamma_t = 1/t^eta, sigma^2 = 1e-4,
/// x_init = 0.1, T = 1e5, 100 trials, window [T/100, T].
std::vector<TableRow> table_rows(TableId id, const TableOptions& opts = {});

/// Runs every row and regresses. A row passes when observed_nu lies in [band_lo, band_hi].
TableReport reproduce_table(TableId id, const TableOptions& opts = {});

}  // namespace lomd
