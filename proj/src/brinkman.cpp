#include "gmp/brinkman.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace gmp {
namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Affine function of the interior unknowns: sum coef[k] * x[idx[k]] + constant.
struct LinearForm {
  std::array<int, 4> idx{};
  std::array<double, 4> coef{};
  int n = 0;
  double constant = 0.0;

  void add(int k, double c) {
    idx[n] = k;
    coef[n] = c;
    ++n;
  }
};

/// Builds strain forms for one system: knows which faces are unknowns.
class StrainStencil {
 public:
  explicit StrainStencil(const SaddleSystem& sys) : sys_(sys), g_(*sys.grid) {}

  void xface(LinearForm& f, int i, int j, double c) const {
    if (i >= 1 && i <= g_.nx() - 1)
      f.add(sys_.ux_index(i, j), c);
    else
      f.constant += c * sys_.dirichlet.faces.u[g_.xface(i, j)];
  }
  void yface(LinearForm& f, int i, int j, double c) const {
    if (j >= 1 && j <= g_.ny() - 1)
      f.add(sys_.vy_index(i, j), c);
    else
      f.constant += c * sys_.dirichlet.faces.v[g_.yface(i, j)];
  }

  LinearForm dxx(int i, int j) const {
    LinearForm f;
    xface(f, i + 1, j, 1.0 / g_.hx());
    xface(f, i, j, -1.0 / g_.hx());
    return f;
  }
  LinearForm dyy(int i, int j) const {
    LinearForm f;
    yface(f, i, j + 1, 1.0 / g_.hy());
    yface(f, i, j, -1.0 / g_.hy());
    return f;
  }
  /// du/dy + dv/dx at node (i, j), i.e. twice the shear strain.
  LinearForm shear(int i, int j) const {
    const int nx = g_.nx(), ny = g_.ny();
    const double hx = g_.hx(), hy = g_.hy();
    const auto& w = sys_.dirichlet.wall;
    LinearForm f;
    if (j == 0) {
      xface(f, i, 0, 2.0 / hy);
      f.constant -= 2.0 / hy * w.bottom[i];
    } else if (j == ny) {
      xface(f, i, ny - 1, -2.0 / hy);
      f.constant += 2.0 / hy * w.top[i];
    } else {
      xface(f, i, j, 1.0 / hy);
      xface(f, i, j - 1, -1.0 / hy);
    }
    if (i == 0) {
      yface(f, 0, j, 2.0 / hx);
      f.constant -= 2.0 / hx * w.left[j];
    } else if (i == nx) {
      yface(f, nx - 1, j, -2.0 / hx);
      f.constant += 2.0 / hx * w.right[j];
    } else {
      yface(f, i, j, 1.0 / hx);
      yface(f, i - 1, j, -1.0 / hx);
    }
    return f;
  }

 private:
  const SaddleSystem& sys_;
  const StaggeredGrid& g_;
};

double node_weight(const StaggeredGrid& g, int i, int j) {
  const double wx = (i == 0 || i == g.nx()) ? 0.5 * g.hx() : g.hx();
  const double wy = (j == 0 || j == g.ny()) ? 0.5 * g.hy() : g.hy();
  return wx * wy;
}

/// Strain samples of a full velocity: Dxx, Dyy per cell and du/dy + dv/dx per node.
struct StrainSamples {
  std::vector<double> dxx, dyy, shear;
};

StrainSamples strain_samples(const StaggeredGrid& g, const Velocity& vel) {
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  const auto& u = vel.faces.u;
  const auto& v = vel.faces.v;
  const auto& w = vel.wall;
  StrainSamples s;
  s.dxx.resize(static_cast<std::size_t>(g.cell_count()));
  s.dyy.resize(static_cast<std::size_t>(g.cell_count()));
  s.shear.resize(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      s.dxx[g.cell(i, j)] = (u[g.xface(i + 1, j)] - u[g.xface(i, j)]) / hx;
      s.dyy[g.cell(i, j)] = (v[g.yface(i, j + 1)] - v[g.yface(i, j)]) / hy;
    }
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      double dudy, dvdx;
      if (j == 0)
        dudy = (u[g.xface(i, 0)] - w.bottom[i]) / (0.5 * hy);
      else if (j == ny)
        dudy = (w.top[i] - u[g.xface(i, ny - 1)]) / (0.5 * hy);
      else
        dudy = (u[g.xface(i, j)] - u[g.xface(i, j - 1)]) / hy;
      if (i == 0)
        dvdx = (v[g.yface(0, j)] - w.left[j]) / (0.5 * hx);
      else if (i == nx)
        dvdx = (w.right[j] - v[g.yface(nx - 1, j)]) / (0.5 * hx);
      else
        dvdx = (v[g.yface(i, j)] - v[g.yface(i - 1, j)]) / hx;
      s.shear[i + j * (nx + 1)] = dudy + dvdx;
    }
  return s;
}

double max_boundary_speed(const StaggeredGrid& g, const Velocity& d) {
  double m = 0.0;
  for (const auto& f : g.boundary_faces()) {
    const double val = (f.side == Side::Left || f.side == Side::Right)
                           ? d.faces.u[f.id]
                           : d.faces.v[f.id - g.xface_count()];
    m = std::max(m, std::abs(val));
  }
  for (const auto* arr : {&d.wall.bottom, &d.wall.top, &d.wall.left, &d.wall.right})
    for (double x : *arr) m = std::max(m, std::abs(x));
  return m;
}

double boundary_net_flux(const StaggeredGrid& g, const Velocity& d) {
  double s = 0.0;
  for (const auto& f : g.boundary_faces()) {
    const double val = (f.side == Side::Left || f.side == Side::Right)
                           ? d.faces.u[f.id]
                           : d.faces.v[f.id - g.xface_count()];
    const double sign = (f.side == Side::Right || f.side == Side::Top) ? 1.0 : -1.0;
    s += sign * val * f.length;
  }
  return s;
}

void project_mean_zero(Eigen::VectorXd& x) {
  if (x.size() == 0) return;
  x.array() -= x.mean();
}

/// Solves with the velocity block, either by sparse Cholesky or by conjugate
/// gradients preconditioned with incomplete Cholesky.
class VelocityBlock {
 public:
  VelocityBlock(const SpMat& A, const BrinkmanOptions& opt) : A_(A), opt_(opt) {
    if (opt.velocity_solver == VelocityBlockSolver::Cholesky) {
      llt_.compute(A);
      if (llt_.info() != Eigen::Success)
        throw SolverError("velocity block is not positive definite", {});
    } else {
      ic_.compute(A);
      if (ic_.info() != Eigen::Success)
        throw SolverError("incomplete Cholesky of the velocity block failed", {});
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    if (opt_.velocity_solver == VelocityBlockSolver::Cholesky) return llt_.solve(rhs);
    return pcg(rhs);
  }

 private:
  Eigen::VectorXd pcg(const Eigen::VectorXd& b) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
    const double bnorm = b.norm();
    if (bnorm == 0.0) return x;
    const double tol = 1e-4 * opt_.tau_solve * bnorm;
    Eigen::VectorXd r = b;
    Eigen::VectorXd z = ic_.solve(r);
    Eigen::VectorXd d = z;
    double rz = r.dot(z);
    std::vector<double> history;
    for (int it = 0; it < opt_.max_inner_iterations; ++it) {
      const Eigen::VectorXd Ad = A_ * d;
      const double alpha = rz / d.dot(Ad);
      x += alpha * d;
      r -= alpha * Ad;
      const double rn = r.norm();
      history.push_back(rn / bnorm);
      if (rn <= tol) return x;
      z = ic_.solve(r);
      const double rz_new = r.dot(z);
      d = z + (rz_new / rz) * d;
      rz = rz_new;
    }
    throw SolverError("velocity block PCG hit its iteration cap", history);
  }

  const SpMat& A_;
  BrinkmanOptions opt_;
  Eigen::SimplicialLLT<SpMat> llt_;
  Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>> ic_;
};

VelocityPressure finish(const SaddleSystem& sys, const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                        SolveStats stats) {
  const StaggeredGrid& g = *sys.grid;
  VelocityPressure out;
  out.velocity = sys.expand(x);
  out.p.assign(p.data(), p.data() + p.size());
  const double pm = mean(out.p);
  for (double& v : out.p) v -= pm;

  const CellField div = discrete_divergence(g, out.velocity.faces);
  stats.divergence_inf = linf_norm(div);
  Eigen::Map<const Eigen::VectorXd> pv(out.p.data(), static_cast<Eigen::Index>(out.p.size()));
  const Eigen::VectorXd Ax = sys.A * x;
  const Eigen::VectorXd res = Ax - sys.B.transpose() * pv - sys.rhs_momentum;
  const double scale = std::max({sys.rhs_momentum.norm(), Ax.norm(), 1e-300});
  stats.momentum_residual = res.norm() / scale;
  out.stats = std::move(stats);
  return out;
}

}  // namespace

std::vector<SymTensor> symmetric_gradient(const StaggeredGrid& grid, const Velocity& v) {
  const auto s = strain_samples(grid, v);
  const int nx = grid.nx(), ny = grid.ny();
  std::vector<SymTensor> d(static_cast<std::size_t>(grid.cell_count()));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int c = grid.cell(i, j);
      const double shear = s.shear[i + j * (nx + 1)] + s.shear[(i + 1) + j * (nx + 1)] +
                           s.shear[i + (j + 1) * (nx + 1)] + s.shear[(i + 1) + (j + 1) * (nx + 1)];
      d[c] = {s.dxx[c], 0.125 * shear, s.dyy[c]};
    }
  return d;
}

std::vector<double> node_viscosity(const StaggeredGrid& g, const CellField& mu,
                                   ViscosityAveraging averaging) {
  const int nx = g.nx(), ny = g.ny();
  std::vector<double> out(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      double sum = 0.0, inv = 0.0;
      int n = 0;
      for (int dj = -1; dj <= 0; ++dj)
        for (int di = -1; di <= 0; ++di) {
          const int ci = i + di, cj = j + dj;
          if (ci < 0 || ci >= nx || cj < 0 || cj >= ny) continue;
          const double m = mu[g.cell(ci, cj)];
          sum += m;
          inv += 1.0 / m;
          ++n;
        }
      out[i + j * (nx + 1)] = averaging == ViscosityAveraging::Arithmetic ? sum / n : n / inv;
    }
  return out;
}

Velocity SaddleSystem::expand(const Eigen::VectorXd& x) const {
  const StaggeredGrid& g = *grid;
  Velocity v = dirichlet;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) v.faces.u[g.xface(i, j)] = x[ux_index(i, j)];
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) v.faces.v[g.yface(i, j)] = x[vy_index(i, j)];
  return v;
}

Eigen::VectorXd SaddleSystem::restrict_to_unknowns(const Velocity& v) const {
  const StaggeredGrid& g = *grid;
  Eigen::VectorXd x(unknown_count());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) x[ux_index(i, j)] = v.faces.u[g.xface(i, j)];
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) x[vy_index(i, j)] = v.faces.v[g.yface(i, j)];
  return x;
}

SaddleSystem assemble(const StaggeredGrid& grid, const CellField& mu, const CellField& h,
                      const FaceField& forcing, const Velocity& dirichlet,
                      const BrinkmanOptions& options) {
  const int nx = grid.nx(), ny = grid.ny();
  for (std::size_t c = 0; c < mu.size(); ++c)
    if (!(mu[c] > 0.0)) {
      std::ostringstream os;
      os << "viscosity must be positive for coercivity; cell " << c << " has mu = " << mu[c];
      throw DataError(os.str());
    }

  SaddleSystem sys;
  sys.grid = &grid;
  sys.dirichlet = dirichlet;
  sys.mu = mu;

  const double bmax = max_boundary_speed(grid, dirichlet);
  sys.net_boundary_flux = boundary_net_flux(grid, dirichlet);
  const double tau_comp = options.tau_comp_factor * grid.perimeter() * bmax;
  if (std::abs(sys.net_boundary_flux) > tau_comp) {
    std::ostringstream os;
    os << "boundary velocity is not in V^{1/2}: net flux " << sys.net_boundary_flux
       << " exceeds tau_comp = " << tau_comp;
    throw DataError(os.str());
  }

  const int n = (nx - 1) * ny + nx * (ny - 1);
  const double area = grid.cell_area();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(n) * 12);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  StrainStencil st(sys);

  auto accumulate = [&](const LinearForm& f, double weight) {
    for (int a = 0; a < f.n; ++a) {
      for (int b = 0; b < f.n; ++b) trip.emplace_back(f.idx[a], f.idx[b], weight * f.coef[a] * f.coef[b]);
      rhs[f.idx[a]] -= weight * f.coef[a] * f.constant;
    }
  };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double w = mu[grid.cell(i, j)] * area;
      accumulate(st.dxx(i, j), w);
      accumulate(st.dyy(i, j), w);
    }
  const auto mu_n = node_viscosity(grid, mu, options.averaging);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      accumulate(st.shear(i, j), 0.5 * mu_n[i + j * (nx + 1)] * node_weight(grid, i, j));

  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const int k = sys.ux_index(i, j);
      const double hf = 0.5 * (h[grid.cell(i - 1, j)] + h[grid.cell(i, j)]);
      if (hf != 0.0) trip.emplace_back(k, k, hf * area);
      rhs[k] += forcing.u[grid.xface(i, j)] * area;
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int k = sys.vy_index(i, j);
      const double hf = 0.5 * (h[grid.cell(i, j - 1)] + h[grid.cell(i, j)]);
      if (hf != 0.0) trip.emplace_back(k, k, hf * area);
      rhs[k] += forcing.v[grid.yface(i, j)] * area;
    }

  sys.A.resize(n, n);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  sys.rhs_momentum = std::move(rhs);

  // Area-weighted divergence: hy*(u_e - u_w) + hx*(v_n - v_s).
  std::vector<Triplet> btrip;
  btrip.reserve(static_cast<std::size_t>(4 * grid.cell_count()));
  Eigen::VectorXd c = Eigen::VectorXd::Zero(grid.cell_count());
  const double hx = grid.hx(), hy = grid.hy();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int cell = grid.cell(i, j);
      auto xterm = [&](int fi, double coef) {
        if (fi >= 1 && fi <= nx - 1)
          btrip.emplace_back(cell, sys.ux_index(fi, j), coef);
        else
          c[cell] -= coef * dirichlet.faces.u[grid.xface(fi, j)];
      };
      auto yterm = [&](int fj, double coef) {
        if (fj >= 1 && fj <= ny - 1)
          btrip.emplace_back(cell, sys.vy_index(i, fj), coef);
        else
          c[cell] -= coef * dirichlet.faces.v[grid.yface(i, fj)];
      };
      xterm(i + 1, hy);
      xterm(i, -hy);
      yterm(j + 1, hx);
      yterm(j, -hx);
    }
  sys.B.resize(grid.cell_count(), n);
  sys.B.setFromTriplets(btrip.begin(), btrip.end());
  sys.B.makeCompressed();
  // The compatible part of the data; the residual flux is within tau_comp.
  project_mean_zero(c);
  sys.rhs_continuity = std::move(c);
  return sys;
}

SaddleSystem assemble(const StaggeredGrid& grid, const CellField& mu, const CellField& h,
                      const CellField& rho, const BoundaryData& data, double t,
                      const BrinkmanOptions& options) {
  const FaceField f = body_force(grid, rho, data.g, t);
  return assemble(grid, mu, h, f, boundary_velocity(grid, data.b, t), options);
}

VelocityPressure solve(const SaddleSystem& sys, const BrinkmanOptions& options) {
  const StaggeredGrid& g = *sys.grid;
  const double area = g.cell_area();
  VelocityBlock block(sys.A, options);

  const Eigen::Index ncell = g.cell_count();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(ncell);
  Eigen::VectorXd x = block.solve(sys.rhs_momentum);
  Eigen::VectorXd r = sys.rhs_continuity - sys.B * x;
  project_mean_zero(r);

  // Pressure preconditioner: the Schur complement scales like area / mu.
  Eigen::VectorXd precond(ncell);
  for (Eigen::Index c = 0; c < ncell; ++c) precond[c] = sys.mu[static_cast<std::size_t>(c)] / area;
  const double mu_max = precond.maxCoeff() * area;

  const double r0 = r.norm();
  std::vector<double> history{1.0};
  SolveStats stats;
  const double target_rel = 1e-3 * options.tau_solve;
  const double target_div = 1e-2 * options.tau_div;
  auto converged = [&](double rel) { return rel <= target_rel || r.cwiseAbs().maxCoeff() / area <= 1e-6 * target_div; };

  if (r0 == 0.0 || r.cwiseAbs().maxCoeff() / area <= 1e-6 * target_div) {
    stats.outer_iterations = 0;
    stats.residual_history = history;
    return finish(sys, x, p, std::move(stats));
  }

  Eigen::VectorXd z = precond.cwiseProduct(r);
  project_mean_zero(z);
  Eigen::VectorXd d = z;
  double rz = r.dot(z);
  int it = 0;
  for (; it < options.max_outer_iterations; ++it) {
    const Eigen::VectorXd w = block.solve(sys.B.transpose() * d);
    Eigen::VectorXd Sd = sys.B * w;
    project_mean_zero(Sd);
    const double curvature = d.dot(Sd);
    if (!(curvature > 1e-14 * d.squaredNorm() * area / mu_max)) {
      history.push_back(r.norm() / r0);
      throw SolverError("singular pressure mode other than constants in the saddle system", history);
    }
    const double alpha = rz / curvature;
    p += alpha * d;
    x += alpha * w;
    r -= alpha * Sd;
    const double rel = r.norm() / r0;
    history.push_back(rel);
    if (converged(rel) && r.cwiseAbs().maxCoeff() / area <= target_div) {
      ++it;
      break;
    }
    z = precond.cwiseProduct(r);
    project_mean_zero(z);
    const double rz_new = r.dot(z);
    d = z + (rz_new / rz) * d;
    rz = rz_new;
  }

  // Recompute the velocity from the final pressure to shed accumulated drift.
  x = block.solve(sys.rhs_momentum + sys.B.transpose() * p);
  Eigen::VectorXd rfinal = sys.rhs_continuity - sys.B * x;
  project_mean_zero(rfinal);
  const double rel_final = rfinal.norm() / r0;
  const double div_final = rfinal.cwiseAbs().maxCoeff() / area;
  if (it >= options.max_outer_iterations && !(rel_final <= options.tau_solve && div_final <= options.tau_div)) {
    std::ostringstream os;
    os << "Schur complement iteration hit its cap of " << options.max_outer_iterations
       << " (relative residual " << rel_final << ", divergence " << div_final << ")";
    throw SolverError(os.str(), history);
  }
  stats.outer_iterations = it;
  stats.residual_history = std::move(history);
  return finish(sys, x, p, std::move(stats));
}

VelocityPressure solve_dense(const SaddleSystem& sys) {
  const Eigen::Index n = sys.A.rows();
  const Eigen::Index m = sys.B.rows();
  const Eigen::Index total = n + m + 1;
  if (total > kDenseSolveLimit) throw ConfigError("system too large for the dense solver");
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(total, total);
  const Eigen::MatrixXd A = Eigen::MatrixXd(sys.A);
  const Eigen::MatrixXd B = Eigen::MatrixXd(sys.B);
  K.topLeftCorner(n, n) = A;
  K.block(0, n, n, m) = -B.transpose();
  K.block(n, 0, m, n) = B;
  K.block(n, n + m, m, 1).setOnes();
  K.block(n + m, n, 1, m).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(total);
  rhs.head(n) = sys.rhs_momentum;
  rhs.segment(n, m) = sys.rhs_continuity;
  const Eigen::VectorXd sol = K.partialPivLu().solve(rhs);
  SolveStats stats;
  stats.outer_iterations = 0;
  return finish(sys, sol.head(n), sol.segment(n, m), std::move(stats));
}

Velocity lift_boundary(const StaggeredGrid& grid, const Velocity& dirichlet, const BrinkmanOptions& options) {
  const CellField mu = grid.make_cell_field(1.0);
  const CellField h = grid.make_cell_field(0.0);
  const FaceField f = grid.make_face_field(0.0);
  const SaddleSystem sys = assemble(grid, mu, h, f, dirichlet, options);
  return solve(sys, options).velocity;
}

Velocity lift_boundary(const StaggeredGrid& grid, const VectorSampler& b, double t,
                       const BrinkmanOptions& options) {
  return lift_boundary(grid, boundary_velocity(grid, b, t), options);
}

FaceField body_force(const StaggeredGrid& g, const CellField& rho, const VectorSampler& gfun, double t) {
  const int nx = g.nx(), ny = g.ny();
  FaceField f = g.make_face_field();
  if (!gfun) return f;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const double r = i == 0        ? rho[g.cell(0, j)]
                       : i == nx     ? rho[g.cell(nx - 1, j)]
                                     : 0.5 * (rho[g.cell(i - 1, j)] + rho[g.cell(i, j)]);
      f.u[g.xface(i, j)] = r * gfun(t, g.xface_center(i, j)).x;
    }
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double r = j == 0        ? rho[g.cell(i, 0)]
                       : j == ny     ? rho[g.cell(i, ny - 1)]
                                     : 0.5 * (rho[g.cell(i, j - 1)] + rho[g.cell(i, j)]);
      f.v[g.yface(i, j)] = r * gfun(t, g.yface_center(i, j)).y;
    }
  return f;
}

CellField drag_field(const StaggeredGrid& g, const DragModel& drag, const CellField& mu, double t) {
  CellField h = g.make_cell_field();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const int c = g.cell(i, j);
      h[c] = drag(t, g.cell_center(i, j), mu[c]);
    }
  return h;
}

double viscous_form(const StaggeredGrid& grid, const CellField& mu, const Velocity& v, const Velocity& w,
                    ViscosityAveraging averaging) {
  const auto sv = strain_samples(grid, v);
  const auto sw = strain_samples(grid, w);
  const auto mu_n = node_viscosity(grid, mu, averaging);
  const int nx = grid.nx(), ny = grid.ny();
  double cells = 0.0;
  for (std::size_t c = 0; c < mu.size(); ++c) cells += mu[c] * (sv.dxx[c] * sw.dxx[c] + sv.dyy[c] * sw.dyy[c]);
  cells *= grid.cell_area();
  double nodes = 0.0;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const int k = i + j * (nx + 1);
      nodes += 0.5 * mu_n[k] * node_weight(grid, i, j) * sv.shear[k] * sw.shear[k];
    }
  return cells + nodes;
}

double drag_form(const StaggeredGrid& g, const CellField& h, const FaceField& v, const FaceField& w) {
  const int nx = g.nx(), ny = g.ny();
  double s = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const int f = g.xface(i, j);
      s += 0.5 * (h[g.cell(i - 1, j)] + h[g.cell(i, j)]) * v.u[f] * w.u[f];
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int f = g.yface(i, j);
      s += 0.5 * (h[g.cell(i, j - 1)] + h[g.cell(i, j)]) * v.v[f] * w.v[f];
    }
  return s * g.cell_area();
}

double forcing_form(const StaggeredGrid& g, const FaceField& f, const FaceField& w) {
  const int nx = g.nx(), ny = g.ny();
  double s = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) s += f.u[g.xface(i, j)] * w.u[g.xface(i, j)];
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) s += f.v[g.yface(i, j)] * w.v[g.yface(i, j)];
  return s * g.cell_area();
}

}  // namespace gmp
