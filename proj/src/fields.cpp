#include "gmp/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gmp/brinkman.hpp"

namespace gmp {

void AdmissibleBounds::validate() const {
  if (!(rho_min > 0.0) || !(nu_min > 0.0))
    throw ConfigError("admissible bounds must be positive");
  if (!(rho_min <= rho_max)) throw ConfigError("rho bounds must satisfy rho_min <= rho_max");
  if (!(nu_min <= nu_max)) throw ConfigError("nu bounds must satisfy nu_min <= nu_max");
}

void PhaseSpec::validate() const {
  for (int i = 0; i < 2; ++i) {
    const auto& p = phase[i];
    const std::string name = "phase" + std::to_string(i + 1);
    if (!(p.rho_lo > 0.0) || !(p.nu_lo > 0.0)) throw ConfigError(name + " intervals must be positive");
    if (!(p.rho_lo <= p.rho_hi) || !(p.nu_lo <= p.nu_hi)) throw ConfigError(name + " intervals must be ordered");
  }
  if (!(phase[0].rho_hi < phase[1].rho_lo))
    throw ConfigError("phase density intervals must be separated: rho1_max < rho2_min");
  if (!(phase[0].nu_hi < phase[1].nu_lo))
    throw ConfigError("phase viscosity intervals must be separated: nu1_max < nu2_min");
}

bool MixtureState::in_bounds(double tol) const {
  for (std::size_t c = 0; c < rho.size(); ++c)
    if (!bounds.contains(rho[c], nu[c], tol)) return false;
  return true;
}

double DragModel::operator()(double t, Vec2 x, double r) const {
  if (custom) return custom(t, x, r);
  const double scale = h0 ? h0(t, x) : 0.0;
  if (m == 0.0) return scale;
  return scale * std::pow(r, m);
}

Velocity boundary_velocity(const StaggeredGrid& grid, const VectorSampler& b, double t) {
  const int nx = grid.nx(), ny = grid.ny();
  Velocity vel{grid.make_face_field(), {}};
  for (const auto& f : grid.boundary_faces()) {
    const Vec2 val = b(t, f.center);
    if (f.side == Side::Left || f.side == Side::Right)
      vel.faces.u[static_cast<std::size_t>(f.id)] = val.x;
    else
      vel.faces.v[static_cast<std::size_t>(f.id - grid.xface_count())] = val.y;
  }
  auto& w = vel.wall;
  w.bottom.resize(static_cast<std::size_t>(nx + 1));
  w.top.resize(static_cast<std::size_t>(nx + 1));
  w.left.resize(static_cast<std::size_t>(ny + 1));
  w.right.resize(static_cast<std::size_t>(ny + 1));
  for (int i = 0; i <= nx; ++i) {
    w.bottom[i] = b(t, grid.node(i, 0)).x;
    w.top[i] = b(t, grid.node(i, ny)).x;
  }
  for (int j = 0; j <= ny; ++j) {
    w.left[j] = b(t, grid.node(0, j)).y;
    w.right[j] = b(t, grid.node(nx, j)).y;
  }
  return vel;
}

CellField mixture_viscosity(const MixtureState& state) {
  CellField mu(state.rho.size());
  for (std::size_t c = 0; c < mu.size(); ++c) mu[c] = state.rho[c] * state.nu[c];
  return mu;
}

double l2_norm(const CellField& f, const StaggeredGrid& grid) {
  double s = 0.0;
  for (double x : f) s += x * x;
  return std::sqrt(s * grid.cell_area());
}

double linf_norm(const CellField& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

double linf_norm(const FaceField& f) { return std::max(linf_norm(f.u), linf_norm(f.v)); }

double l2_norm(const FaceField& f, const StaggeredGrid& grid) {
  const int nx = grid.nx(), ny = grid.ny();
  double s = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const double w = (i == 0 || i == nx) ? 0.5 : 1.0;
      const double x = f.u[grid.xface(i, j)];
      s += w * x * x;
    }
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double w = (j == 0 || j == ny) ? 0.5 : 1.0;
      const double x = f.v[grid.yface(i, j)];
      s += w * x * x;
    }
  return std::sqrt(s * grid.cell_area());
}

double h1_seminorm(const Velocity& v, const StaggeredGrid& grid) {
  const auto d = symmetric_gradient(grid, v);
  double s = 0.0;
  for (const auto& t : d) s += t.xx * t.xx + t.yy * t.yy + 2.0 * t.xy * t.xy;
  return std::sqrt(s * grid.cell_area());
}

double mean(const CellField& f) {
  if (f.empty()) return 0.0;
  return std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
}

}  // namespace gmp
