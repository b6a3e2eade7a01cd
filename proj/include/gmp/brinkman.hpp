#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "gmp/fields.hpp"
#include "gmp/grid.hpp"

namespace gmp {

struct SymTensor {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Cell-centered stretching tensor Dv = (grad v + grad v^T)/2. The diagonal
/// entries are exact cell differences; the shear entry averages the four
/// corner values, which use half-cell one-sided differences against the
/// wall values on the boundary. Exact for linear velocity fields.
std::vector<SymTensor> symmetric_gradient(const StaggeredGrid& grid, const Velocity& v);

enum class ViscosityAveraging { Arithmetic, Harmonic };
enum class VelocityBlockSolver { Cholesky, Pcg };

struct BrinkmanOptions {
  double tau_solve = 1e-9;  // relative
  double tau_div = 1e-8;    // absolute, max norm of div v
  double tau_comp_factor = 1e-10;  // tau_comp = factor * perimeter * max|b|
  ViscosityAveraging averaging = ViscosityAveraging::Arithmetic;
  VelocityBlockSolver velocity_solver = VelocityBlockSolver::Cholesky;
  int max_outer_iterations = 2000;
  int max_inner_iterations = 5000;
};

/// Discrete form of
///   h v - div(mu Dv) + grad p = f,  div v = 0,  v = b on the boundary,
/// with the viscous term taken from the energy
///   a(v, w) = sum_cells mu (Dxx Dxx' + Dyy Dyy') + sum_nodes mu_n 2 Dxy Dxy'
/// so the momentum block is symmetric by construction. Rows:
///   A v - B^T p = rhs_momentum,   B v = rhs_continuity,
/// with B the area-weighted divergence on interior face unknowns.
struct SaddleSystem {
  const StaggeredGrid* grid = nullptr;
  Eigen::SparseMatrix<double> A;
  Eigen::SparseMatrix<double> B;
  Eigen::VectorXd rhs_momentum;
  Eigen::VectorXd rhs_continuity;
  Velocity dirichlet;       // boundary faces and wall values; interior ignored
  CellField mu;             // cell viscosity, used by the pressure preconditioner
  double net_boundary_flux = 0.0;

  int unknown_count() const { return static_cast<int>(A.rows()); }
  int xunknowns() const { return (grid->nx() - 1) * grid->ny(); }
  /// Unknown index of interior x-face (i, j), 1 <= i <= nx-1.
  int ux_index(int i, int j) const { return (i - 1) + j * (grid->nx() - 1); }
  /// Unknown index of interior y-face (i, j), 1 <= j <= ny-1.
  int vy_index(int i, int j) const { return xunknowns() + i + (j - 1) * grid->nx(); }

  /// Full velocity from interior unknowns plus the Dirichlet data.
  Velocity expand(const Eigen::VectorXd& x) const;
  /// Interior unknowns of a full velocity.
  Eigen::VectorXd restrict_to_unknowns(const Velocity& v) const;
};

/// Assembles the saddle system. `forcing` is the body force density rho*g
/// sampled on faces; `dirichlet` carries the boundary velocity. Throws
/// DataError if mu <= 0 somewhere (loss of coercivity) or if the boundary
/// velocity has nonzero net flux beyond tau_comp.
SaddleSystem assemble(const StaggeredGrid& grid, const CellField& mu, const CellField& h,
                      const FaceField& forcing, const Velocity& dirichlet,
                      const BrinkmanOptions& options = {});

/// Convenience form sampling forcing rho*g and the boundary data at time t.
SaddleSystem assemble(const StaggeredGrid& grid, const CellField& mu, const CellField& h,
                      const CellField& rho, const BoundaryData& data, double t,
                      const BrinkmanOptions& options = {});

/// Pressure Schur-complement conjugate gradients with exact or PCG velocity
/// block solves. Throws SolverError (with residual history) when the
/// iteration cap is hit or a non-constant singular pressure mode shows up.
VelocityPressure solve(const SaddleSystem& system, const BrinkmanOptions& options = {});

/// Dense LU of the bordered saddle system with a zero-mean pressure
/// constraint. Meant for small oracle problems.
VelocityPressure solve_dense(const SaddleSystem& system);

/// Largest system solve_dense accepts.
inline constexpr int kDenseSolveLimit = 4000;

/// Canonical discrete extension of boundary data: constant-viscosity Stokes
/// solve (mu = 1, h = 0, f = 0) with the given Dirichlet values.
Velocity lift_boundary(const StaggeredGrid& grid, const Velocity& dirichlet,
                       const BrinkmanOptions& options = {});
Velocity lift_boundary(const StaggeredGrid& grid, const VectorSampler& b, double t,
                       const BrinkmanOptions& options = {});

/// rho*g at face centers; rho averaged from the adjacent cells (one-sided on
/// boundary faces).
FaceField body_force(const StaggeredGrid& grid, const CellField& rho, const VectorSampler& g,
                     double t);

/// Cell drag coefficients h(t, x_c, rho*nu).
CellField drag_field(const StaggeredGrid& grid, const DragModel& drag, const CellField& mu, double t);

/// Viscosity at grid nodes, averaged from the adjacent cells.
std::vector<double> node_viscosity(const StaggeredGrid& grid, const CellField& mu,
                                   ViscosityAveraging averaging);

/// Bilinear forms matching the assembled operator: viscous a(v, w) with the
/// wall values included, drag and forcing pairings over interior faces.
double viscous_form(const StaggeredGrid& grid, const CellField& mu, const Velocity& v,
                    const Velocity& w, ViscosityAveraging averaging = ViscosityAveraging::Arithmetic);
double drag_form(const StaggeredGrid& grid, const CellField& h, const FaceField& v, const FaceField& w);
double forcing_form(const StaggeredGrid& grid, const FaceField& f, const FaceField& w);

}  // namespace gmp
