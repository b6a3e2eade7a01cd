#pragma once

#include <functional>
#include <vector>

#include "gmp/grid.hpp"
#include "gmp/types.hpp"

namespace gmp {

/// Admissible ranges [rho_min, rho_max] x [nu_min, nu_max]; the product of
/// these intervals over space-time is the convex set the fixed-point map acts on.
struct AdmissibleBounds {
  double rho_min = 1.0;
  double rho_max = 1.0;
  double nu_min = 1.0;
  double nu_max = 1.0;

  /// Throws ConfigError unless all values are positive and ordered.
  void validate() const;
  bool contains(double rho, double nu, double tol) const {
    return rho >= rho_min - tol && rho <= rho_max + tol && nu >= nu_min - tol && nu <= nu_max + tol;
  }
};

/// Density/viscosity intervals of two immiscible phases. Phase 1 lies
/// strictly below phase 2 in both density and viscosity.
struct PhaseSpec {
  struct Interval {
    double rho_lo = 0.0;
    double rho_hi = 0.0;
    double nu_lo = 0.0;
    double nu_hi = 0.0;
  };
  Interval phase[2];

  /// Throws ConfigError unless intervals are positive, ordered and separated
  /// by nonempty gaps in both rho and nu.
  void validate() const;
};

/// Density and kinematic viscosity at one time level.
struct MixtureState {
  CellField rho;
  CellField nu;
  AdmissibleBounds bounds;

  bool in_bounds(double tol) const;
};

/// Tangential velocity at boundary nodes. bottom/top hold u at nodes
/// (i, 0) and (i, ny) for i = 0..nx; left/right hold v at nodes (0, j) and
/// (nx, j) for j = 0..ny. Together with the boundary face values of a
/// FaceField they carry the full Dirichlet trace.
struct WallValues {
  std::vector<double> bottom;
  std::vector<double> top;
  std::vector<double> left;
  std::vector<double> right;
};

struct Velocity {
  FaceField faces;
  WallValues wall;
};

struct SolveStats {
  int outer_iterations = 0;
  double divergence_inf = 0.0;
  double momentum_residual = 0.0;  // relative
  std::vector<double> residual_history;
};

struct VelocityPressure {
  Velocity velocity;
  CellField p;  // zero mean
  SolveStats stats;
};

/// Boundary velocity, inflow data and body force of one scenario.
struct BoundaryData {
  VectorSampler b;
  ScalarSampler rho_b;
  ScalarSampler nu_b;
  VectorSampler g;  // force per unit mass
};

/// Drag coefficient h(t, x, r) with r = rho*nu. The default rule is
/// h0(t, x) * r^m; with m = 1 and h0 = 1/k this is the permeability law.
struct DragModel {
  ScalarSampler h0;
  double m = 0.0;
  std::function<double(double, Vec2, double)> custom;  // overrides the power law when set

  double operator()(double t, Vec2 x, double r) const;
};

/// Zero velocity everywhere except the boundary: boundary x-faces get b.x,
/// boundary y-faces get b.y, and wall nodes get the tangential component.
Velocity boundary_velocity(const StaggeredGrid& grid, const VectorSampler& b, double t);

/// mu = rho * nu per cell.
CellField mixture_viscosity(const MixtureState& state);

double l2_norm(const CellField& f, const StaggeredGrid& grid);
double linf_norm(const CellField& f);
double linf_norm(const FaceField& f);
/// L2 norm of face values with dual-cell weights (half cells on the boundary).
double l2_norm(const FaceField& f, const StaggeredGrid& grid);
/// sqrt(sum |Dv|^2 * area) with Dv the cell-centered symmetric gradient.
double h1_seminorm(const Velocity& v, const StaggeredGrid& grid);

/// Mean over cells (uniform grid, so unweighted).
double mean(const CellField& f);

}  // namespace gmp
