#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "gmp/fields.hpp"
#include "gmp/grid.hpp"
#include "gmp/scenario.hpp"

namespace testing {

inline gmp::StaggeredGrid unit_grid(int n) { return gmp::StaggeredGrid::build({0, 0}, {1, 1}, n, n); }

/// Normal components of f sampled at face centers.
inline gmp::FaceField sample_faces(const gmp::StaggeredGrid& g, const std::function<gmp::Vec2(gmp::Vec2)>& f) {
  gmp::FaceField out = g.make_face_field();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) out.u[g.xface(i, j)] = f(g.xface_center(i, j)).x;
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out.v[g.yface(i, j)] = f(g.yface_center(i, j)).y;
  return out;
}

/// Velocity with every face and wall value sampled from f.
inline gmp::Velocity full_velocity(const gmp::StaggeredGrid& g, const std::function<gmp::Vec2(gmp::Vec2)>& f) {
  gmp::Velocity v = gmp::boundary_velocity(g, [&](double, gmp::Vec2 x) { return f(x); }, 0.0);
  v.faces = sample_faces(g, f);
  return v;
}

inline gmp::CellField sample_cells(const gmp::StaggeredGrid& g, const std::function<double(gmp::Vec2)>& f) {
  gmp::CellField out = g.make_cell_field();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out[g.cell(i, j)] = f(g.cell_center(i, j));
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline std::string preset_path(const std::string& name) { return std::string(GMP_PRESET_DIR) + "/" + name + ".gmp"; }

/// Minimal scenario text; extra lines are appended verbatim. Lines for rho0
/// and nu0 are left out when `extra` sets them.
inline std::string scenario_text(const std::string& extra, int n = 8) {
  std::string s = "gmp-scenario 1\nextent = 1, 1\nnx = " + std::to_string(n) + "\nny = " + std::to_string(n) +
                  "\nT = 0.5\nrho_bounds = 1, 2\nnu_bounds = 1, 3\n";
  if (extra.find("rho0") == std::string::npos) s += "rho0 = 1\n";
  if (extra.find("nu0") == std::string::npos) s += "nu0 = 1\n";
  return s + extra;
}

}  // namespace testing
