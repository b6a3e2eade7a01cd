#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmp/brinkman.hpp"
#include "gmp/fields.hpp"
#include "gmp/grid.hpp"
#include "gmp/scenario.hpp"
#include "gmp/transport.hpp"

namespace gmp {

/// Boundary partition of the scenario's b at time t with its dead band.
BoundaryPartition boundary_partition(const StaggeredGrid& grid, const Scenario& scenario, double t);

/// Velocity and pressure solved from the state at time t.
VelocityPressure solve_momentum(const StaggeredGrid& grid, const Scenario& scenario, const MixtureState& state,
                                double t);

struct StepResult {
  MixtureState state;  // at t + dt
  VelocityPressure vp;  // solved at t from the incoming state
  BoundaryPartition partition;
  AdvectResult rho;
  AdvectResult nu;
};

/// One quasi-static step: Brinkman solve from the current state, then
/// upwind transport of rho and nu with that velocity. The step actually taken
/// is min(dt, cfl_dt, monotone_dt, dt_max) for the solved velocity. Solver
/// and step errors are rethrown with the time attached.
StepResult step(const StaggeredGrid& grid, const Scenario& scenario, const MixtureState& state, double t,
                double dt);

struct StepSummary {
  int index = 0;
  double t = 0.0;
  double dt = 0.0;
  SolveStats solve;
  double rho_min = 0.0, rho_max = 0.0, nu_min = 0.0, nu_max = 0.0;
};

struct Frame {
  double t = 0.0;
  MixtureState state;
  VelocityPressure vp;  // velocity used for the step leaving t
};

/// Discrete space-time solution: stored frames, full boundary records and
/// per-step summaries.
struct Trajectory {
  std::vector<Frame> frames;
  TraceRecord rho_out, nu_out, rho_in, nu_in;
  std::vector<StepSummary> steps;
  bool complete = true;  // false when the run aborted
  std::string error;
};

/// Called after every step with the step's start time, size and result.
using StepObserver = std::function<void(int index, const MixtureState& before, const StepResult& result)>;

struct MarchOptions {
  int store_every = 0;  // 0: scenario.output_every. The final frame is always stored.
  StepObserver observer;
};

/// Time marching over [0, T]. On a solver or step error the partial
/// trajectory is returned with complete = false and the message in error.
Trajectory run_march(const Scenario& scenario, const MarchOptions& options = {});

/// Frame times shared by all Picard iterates: uniform steps sized from the
/// velocity of the first iterate sampled at eleven times, reduced by
/// picard_dt_margin.
std::vector<double> picard_time_grid(const Scenario& scenario);

/// The fixed-point map: velocities at every time from the guess states,
/// then transport of the initial data over all of [0, T] with them. Throws
/// DataError if a guess state leaves the admissible bounds.
Trajectory picard_map(const Scenario& scenario, const std::vector<double>& times,
                      const std::vector<MixtureState>& guess);

/// sqrt(int_0^T ||a - b||^2 dt) over rho and nu together, trapezoidal in time.
double trajectory_distance(const StaggeredGrid& grid, const std::vector<double>& times,
                           const std::vector<MixtureState>& a, const std::vector<MixtureState>& b);

struct PicardRow {
  int k = 0;
  double distance = 0.0;
  double max_h1 = 0.0;  // max over time of the velocity H1 seminorm
  double max_speed = 0.0;
};

struct PicardHistory {
  std::vector<PicardRow> rows;
  std::vector<Trajectory> iterates;  // only with keep_iterates
  bool converged = false;
  int k_final = 0;
  double tol = 0.0;
};

enum class InitialGuess { ConstantInTime, March };

struct SchauderOptions {
  std::optional<double> tol;  // absolute; default tol_P * ||(rho0, nu0)||_{L2(Omega_T)}
  std::optional<int> max_iter;
  std::optional<double> relaxation;
  InitialGuess guess = InitialGuess::ConstantInTime;
  bool keep_iterates = false;
};

struct SchauderResult {
  Trajectory trajectory;
  PicardHistory history;
  std::vector<double> times;
};

/// Picard iteration on picard_map, optionally under-relaxed. Non-convergence
/// is reported in the history rather than thrown.
SchauderResult schauder_solve(const Scenario& scenario, const SchauderOptions& options = {});

/// Default absolute Picard tolerance for a scenario.
double picard_tolerance(const Scenario& scenario, const StaggeredGrid& grid);

/// States of a trajectory at arbitrary times by linear interpolation between
/// stored frames (constant beyond the ends).
MixtureState state_at(const Trajectory& tr, double t);

/// 2x2 cell average onto the grid with half the resolution.
CellField coarsen(const StaggeredGrid& fine, const CellField& f);

}  // namespace gmp
