#pragma once

// Runs behind the command-line tool: single measurements, figure sweeps, the
// three-qubit table, certification reports and Schmidt decompositions. Every
// run is a function of its RunConfig, so equal configs give equal bytes.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superpos/roof.hpp"

namespace superpos {

struct RunConfig {
  std::string command;    // measure | sweep | table1 | certify | schmidt
  std::string state;      // JSON state file
  std::string catalog;    // catalog spec such as "fig1_state:0.2", used when `state` is empty
  std::string measure = "nls";  // ls | ls_sym | nls
  std::string block = "0";      // subsystem digits, e.g. "0" or "01"
  std::string partition;        // empty selects the finest partition
  std::optional<MeasureVariant> variant;
  std::string family;           // fig1 | fig2 | ghz_like | w_like
  int grid_points = 20;         // uniform points strictly inside (0, 1)
  std::vector<double> grid_values;  // explicit grid, overrides grid_points
  OptimizerConfig opt;
  RoofOptions roof;
  std::string out;              // CSV path; empty writes to stdout
};

/// key = value lines; '#' starts a comment. Keys match the RunConfig fields,
/// plus seed, restarts, max_iters, tol, simplex_scale, polish_rounds,
/// grid_resolution, rank_cap, ensemble_size. Values override `base`.
RunConfig parse_run_config(std::string_view text, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});
std::string to_config_text(const RunConfig& cfg);

/// %.15g, so values keep 15 significant digits.
std::string format_number(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  /// Column-aligned text for terminals.
  std::string to_text() const;
};

/// Grid used by sweeps: explicit values, else n uniform points (i+1)/(n+1).
std::vector<double> sweep_grid(const RunConfig& cfg);

struct MeasureOutcome {
  Table table;  // one row
  MeasureReport report;
  double wall_seconds = 0.0;
};

AnyState resolve_state(const RunConfig& cfg);
MeasureKind resolve_kind(const RunConfig& cfg, int n_subsystems);

MeasureOutcome run_measure(const RunConfig& cfg);

struct SweepOutcome {
  Table table;
  bool converged = true;
};

/// Columns per family:
///   fig1:     lambda, ls_a, ls_a_closed_sum, ls_a_closed_root, caption_curve
///   fig2:     alpha, nls, concurrence, closed
///   ghz_like: lambda, ls, nls, closed
///   w_like:   lambda, nls, ls_a, ls_b, ls_c, ls
SweepOutcome run_sweep(const RunConfig& cfg);

/// Rows: NLS A|B|C, AB|C, A|BC, AC|B and LS A, B, C, AB, AC, BC for GHZ and W.
SweepOutcome run_table1(const RunConfig& cfg);

/// Verdict lines: CQ on both sides, classical, PPT.
std::string run_certify(const RunConfig& cfg);

/// CSV of Schmidt coefficients across the configured partition (two blocks).
Table run_schmidt(const RunConfig& cfg);

}  // namespace superpos
