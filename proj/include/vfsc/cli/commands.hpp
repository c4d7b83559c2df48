#pragma once

#include <iosfwd>

#include "vfsc/cli/config.hpp"
#include "vfsc/cli/csv.hpp"

namespace vfsc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitFeasibility = 3,
  kExitNonConvergence = 4,
};

/// One R(D) row per D: `D,rate,v_disp,d_var`.
CsvTable cmd_rd(const RunConfig& cfg);
/// Random-code Monte Carlo rows, or exact no-hit rows with exact_only.
/// `wrapped` receives wrapper rows when epsilon > 0.
CsvTable cmd_simulate(const RunConfig& cfg, CsvTable* wrapped = nullptr);
/// Achievable / converse / comparator rates and exact no-hit bracket per N.
CsvTable cmd_sweep(const RunConfig& cfg);
/// `N,epsilon,D,converse,fv_approx,achievable,theorem_rate_x_N,B`.
CsvTable cmd_bounds(const RunConfig& cfg);
/// `M,expected_len,empirical_len,rate,entropy,gap`.
CsvTable cmd_tunstall(const RunConfig& cfg);

/// Dispatches cfg.command, writes CSV to `out` (or cfg `out` path) and maps
/// failures to exit codes with a message on `err`.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace vfsc::cli
