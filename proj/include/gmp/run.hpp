#pragma once

#include <string>

#include "gmp/coupler.hpp"
#include "gmp/output.hpp"
#include "gmp/scenario.hpp"

namespace gmp {

/// Worst values over every solve and step of a run.
struct RunSummary {
  double worst_divergence = 0.0;
  double worst_momentum = 0.0;
  double worst_energy = 0.0;  // relative energy identity residual
  long bounds_violations = 0;
  long range_violations = 0;
  double worst_range_excess = 0.0;
  double mass_rho = 0.0;  // ledger residual / initial mass
  double mass_nu = 0.0;
};

struct RunOutcome {
  Trajectory trajectory;
  RunSummary summary;
  std::vector<PicardRow> picard;  // empty in march mode
  bool picard_converged = false;
  Report report{""};
  std::string report_path;
};

/// Runs a scenario in its configured mode, checks every hard invariant
/// (divergence, solve residual, energy identity, admissible bounds, data
/// range, mass ledger) and writes into `out_dir`:
///   scenario.gmp, steps.csv, report.txt,
///   snapshots/index.csv and snapshots/snap_NNNNNN.csv (+ _faces.csv),
///   traces_rho.csv, traces_nu.csv (outflow), inflow_rho.csv, inflow_nu.csv,
///   picard.csv in Picard mode.
/// An empty out_dir skips all writing. Wall-clock time is never written.
RunOutcome run_scenario(const Scenario& scenario, const std::string& out_dir);

/// Parse-and-validate report used by the check subcommand.
Report check_scenario(const Scenario& scenario);

}  // namespace gmp
