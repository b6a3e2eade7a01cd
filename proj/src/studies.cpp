#include "gmp/studies.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "gmp/coupler.hpp"
#include "gmp/diagnostics.hpp"

namespace gmp {

const char* const kMmsScenario = R"(gmp-scenario 1
name = mms
extent = 1, 1
nx = 32
ny = 32
T = 0
rho0 = 1
nu0 = 1
rho_bounds = 1, 1
nu_bounds = 1, 1
bx = sin(pi*x)*cos(pi*y)
by = -cos(pi*x)*sin(pi*y)
gx = (1 + pi^2)*sin(pi*x)*cos(pi*y) - pi*sin(pi*x)*cos(pi*y)
gy = -(1 + pi^2)*cos(pi*x)*sin(pi*y) - pi*cos(pi*x)*sin(pi*y)
h0 = 1
m = 0
)";

std::vector<MmsRow> mms_study(const Scenario& base, const std::vector<int>& levels) {
  if (base.T != 0.0) throw ConfigError("mms study expects a steady scenario (T = 0)");
  std::vector<MmsRow> rows;
  for (int n : levels) {
    const Scenario s = at_level(base, n);
    const StaggeredGrid grid = make_grid(s);
    const MixtureState state = initial_state(s, grid);
    const VelocityPressure vp = solve_momentum(grid, s, state, 0.0);
    FaceField err = grid.make_face_field();
    const auto& f = vp.velocity.faces;
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i <= grid.nx(); ++i)
        err.u[grid.xface(i, j)] = f.u[grid.xface(i, j)] - s.bx(0.0, grid.xface_center(i, j));
    for (int j = 0; j <= grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i)
        err.v[grid.yface(i, j)] = f.v[grid.yface(i, j)] - s.by(0.0, grid.yface_center(i, j));
    MmsRow row;
    row.n = n;
    row.error = l2_norm(err, grid);
    row.ratio = rows.empty() ? 0.0 : rows.back().error / row.error;
    row.outer_iterations = vp.stats.outer_iterations;
    row.divergence_inf = vp.stats.divergence_inf;
    row.momentum_residual = vp.stats.momentum_residual;
    rows.push_back(row);
  }
  return rows;
}

Scenario at_level(const Scenario& base, int n) {
  Scenario s = base;
  s.nx = n;
  s.ny = std::max(2, static_cast<int>(std::lround(static_cast<double>(n) * base.ny / base.nx)));
  s.dt_max = base.dt_max * base.nx / n;
  return s;
}

RefineRow refine_level(const Scenario& base, int n) {
  const Scenario s = at_level(base, n);
  const StaggeredGrid grid = make_grid(s);
  RefineRow row;
  row.nx = s.nx;
  row.ny = s.ny;
  MarchOptions mo;
  mo.store_every = 1;
  mo.observer = renormalization_observer(grid, s, [](double r) { return r * r; }, row.renormalization_defect);
  const Trajectory tr = run_march(s, mo);
  row.steps = static_cast<int>(tr.steps.size());
  row.complete = tr.complete;
  if (s.phases) {
    const MixingRow m = mixing_measure(grid, tr.frames.back().state, *s.phases, s.mix_epsilon, tr.frames.back().t);
    row.mixed_area = m.area_mixed;
    row.disagreement = m.rho_nu_disagreement;
  }
  if (tr.complete) {
    const WeakFormReport w = weak_form_residual(grid, s, tr);
    row.weak_rho = w.rho_relative;
    row.weak_nu = w.nu_relative;
    row.weak_momentum = w.momentum_relative;
  }
  const MassBalance mb = mass_ledger(grid, tr.frames.front().state.rho, tr.frames.back().state.rho, tr.rho_out,
                                     tr.rho_in);
  row.mass_residual = mb.residual / std::abs(mb.initial);
  return row;
}

std::vector<RefineRow> refine_study(const Scenario& base, const std::vector<int>& levels) {
  std::vector<std::future<RefineRow>> jobs;
  for (int n : levels) jobs.push_back(std::async(std::launch::async, refine_level, std::cref(base), n));
  std::vector<RefineRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw ConfigError("malformed level '" + tok + "'");
    }
    if (used != tok.size() || v < 2) throw ConfigError("malformed level '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("no levels given");
  return out;
}

}  // namespace gmp
