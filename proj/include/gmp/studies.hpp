#pragma once

#include <string>
#include <vector>

#include "gmp/scenario.hpp"

namespace gmp {

/// Manufactured Brinkman problem on the unit square:
///   v* = (sin(pi x) cos(pi y), -cos(pi x) sin(pi y)),  p* = cos(pi x) cos(pi y),
///   mu = 1, h = 1, f = (h + pi^2) v* + grad p*, b = v* on the boundary.
/// bx, by hold v* itself, so the study measures the solution against them.
extern const char* const kMmsScenario;

struct MmsRow {
  int n = 0;
  double error = 0.0;  // face L2 norm of v - v*
  double ratio = 0.0;  // previous error / this error, 0 for the first level
  int outer_iterations = 0;
  double divergence_inf = 0.0;
  double momentum_residual = 0.0;
};

/// Solves the manufactured problem of `base` on n x n grids. Throws
/// ConfigError if base.T != 0 or the grid is not square.
std::vector<MmsRow> mms_study(const Scenario& base, const std::vector<int>& levels);

struct RefineRow {
  int nx = 0, ny = 0;
  int steps = 0;
  bool complete = true;
  double renormalization_defect = 0.0;  // accumulated L1, beta = r^2
  double mixed_area = -1.0;             // at final time, -1 without phases
  double disagreement = -1.0;
  double weak_rho = 0.0, weak_nu = 0.0, weak_momentum = 0.0;
  double mass_residual = 0.0;  // rho ledger, relative to initial mass
};

/// Copy of `base` with nx = n, ny scaled to keep the aspect ratio and dt_max
/// scaled like the cell size, so time and space refine together.
Scenario at_level(const Scenario& base, int n);

/// Marches one refinement level and evaluates the refinement diagnostics.
RefineRow refine_level(const Scenario& base, int n);

/// All levels, run concurrently; rows follow the order of `levels`.
std::vector<RefineRow> refine_study(const Scenario& base, const std::vector<int>& levels);

/// Parses "32,64,128". Throws ConfigError on malformed or nonpositive entries.
std::vector<int> parse_levels(const std::string& text);

}  // namespace gmp
