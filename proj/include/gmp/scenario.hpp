#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmp/brinkman.hpp"
#include "gmp/expression.hpp"
#include "gmp/fields.hpp"
#include "gmp/grid.hpp"

namespace gmp {

inline constexpr std::string_view kScenarioHeader = "gmp-scenario 1";

enum class RunMode { March, Picard };

/// Solver and checking tolerances. tau_comp, tau_n and tol_P are relative
/// factors: tau_comp * perimeter * max|b|, tau_n * max|b| and
/// tol_P * ||(rho0, nu0)||_{L2(0,T)} respectively.
struct Tolerances {
  double tau_solve = 1e-9;
  double tau_div = 1e-8;
  double tau_comp = 1e-10;
  double tau_mp = 1e-9;
  double tau_n = 1e-12;
  double tol_P = 1e-6;
};

/// A fully resolved scenario: every key has a value after parsing.
struct Scenario {
  std::string name = "unnamed";
  Vec2 origin{0.0, 0.0};
  Vec2 extent{1.0, 1.0};
  int nx = 0;
  int ny = 0;
  double T = 0.0;
  double cfl = 0.5;
  double dt_max = 0.0;

  Expression rho0, nu0, rho_b, nu_b;
  Expression bx, by, gx, gy;
  Expression h0;
  double m = 0.0;

  AdmissibleBounds bounds;
  std::optional<PhaseSpec> phases;
  double mix_epsilon = 1e-9;  // relative to the phase gap

  Tolerances tol;
  int output_every = 10;
  RunMode mode = RunMode::March;
  std::uint64_t seed = 0;
  double q = 2.0;  // integrability exponent of g (metadata)
  double s = 2.0;  // integrability exponent of h0 (metadata)
  int picard_max_iter = 50;
  double relaxation = 1.0;
  double picard_dt_margin = 1.5;
  ViscosityAveraging averaging = ViscosityAveraging::Arithmetic;
  VelocityBlockSolver velocity_solver = VelocityBlockSolver::Cholesky;
};

/// Parses the documented key-value grammar. Throws ParseError carrying the
/// line/column for syntax errors, unknown keys, missing required keys and
/// unknown expression variables.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// Canonical text form with every key written out; parse_scenario of the
/// result reproduces the scenario.
std::string print_scenario(const Scenario& s);

StaggeredGrid make_grid(const Scenario& s);
BoundaryData boundary_data(const Scenario& s);
DragModel drag_model(const Scenario& s);
MixtureState initial_state(const Scenario& s, const StaggeredGrid& grid);
BrinkmanOptions brinkman_options(const Scenario& s);
/// Default output directory ("out") unless GMP_OUT_DIR is set.
std::string output_directory(const std::string& fallback);

struct Violation {
  std::string label;  // reg2, reg3, reg4, compatibility
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(std::string_view label) const;
};

/// Samples the data at cell centers and boundary midpoints at eleven evenly
/// spaced times in [0, T] and checks the standing assumptions: data ranges
/// (reg2), drag growth (reg3), phase separation (reg4, only with phases)
/// and zero net boundary flux.
ValidationReport validate(const Scenario& s, const StaggeredGrid& grid);

}  // namespace gmp
