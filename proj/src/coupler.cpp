#include "gmp/coupler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gmp {
namespace {

BoundaryPartition partition_at(const StaggeredGrid& grid, const Scenario& s, const VectorSampler& b, double t) {
  double bmax = 0.0;
  for (const auto& f : grid.boundary_faces()) {
    const Vec2 v = b(t, f.center);
    bmax = std::max({bmax, std::abs(v.x), std::abs(v.y)});
  }
  return classify_boundary(grid, b, t, s.tol.tau_n * bmax);
}

void field_range(const CellField& f, double& lo, double& hi) {
  const auto [mn, mx] = std::minmax_element(f.begin(), f.end());
  lo = *mn;
  hi = *mx;
}

std::string at_time(const char* what, double t, const std::exception& e) {
  std::ostringstream os;
  os << what << " at t = " << t << ": " << e.what();
  return os.str();
}

}  // namespace

BoundaryPartition boundary_partition(const StaggeredGrid& grid, const Scenario& s, double t) {
  return partition_at(grid, s, boundary_data(s).b, t);
}

VelocityPressure solve_momentum(const StaggeredGrid& grid, const Scenario& s, const MixtureState& state, double t) {
  const CellField mu = mixture_viscosity(state);
  const CellField h = drag_field(grid, drag_model(s), mu, t);
  const BrinkmanOptions opts = brinkman_options(s);
  const SaddleSystem sys = assemble(grid, mu, h, state.rho, boundary_data(s), t, opts);
  return solve(sys, opts);
}

StepResult step(const StaggeredGrid& grid, const Scenario& s, const MixtureState& state, double t, double dt) {
  const BoundaryData data = boundary_data(s);
  StepResult r;
  try {
    r.vp = solve_momentum(grid, s, state, t);
  } catch (const SolverError& e) {
    throw SolverError(at_time("momentum solve", t, e), e.residual_history);
  } catch (const DataError& e) {
    throw DataError(at_time("momentum assembly", t, e));
  }
  r.partition = partition_at(grid, s, data.b, t);
  const FaceField& v = r.vp.velocity.faces;
  dt = std::min({dt, cfl_dt(grid, v, s.cfl, s.dt_max), monotone_dt(grid, v, r.partition), s.dt_max});
  try {
    r.rho = advect(grid, state.rho, v, t, dt, data.rho_b, r.partition);
    r.nu = advect(grid, state.nu, v, t, dt, data.nu_b, r.partition);
  } catch (const StepRejected& e) {
    throw StepRejected(at_time("transport", t, e), e.admissible_dt);
  }
  r.state.rho = r.rho.field;
  r.state.nu = r.nu.field;
  r.state.bounds = state.bounds;
  return r;
}

Trajectory run_march(const Scenario& s, const MarchOptions& options) {
  const StaggeredGrid grid = make_grid(s);
  const int every = options.store_every > 0 ? options.store_every : s.output_every;
  Trajectory tr;
  MixtureState state = initial_state(s, grid);
  double t = 0.0;
  int n = 0;
  const double eps = 1e-12 * std::max(s.T, 1.0);
  try {
    while (s.T - t > eps) {
      StepResult r = step(grid, s, state, t, s.T - t);
      if (n % every == 0) tr.frames.push_back({t, state, r.vp});
      const double dt = r.rho.outflow.dt;
      if (options.observer) options.observer(n, state, r);
      StepSummary sum;
      sum.index = n;
      sum.t = t;
      sum.dt = dt;
      sum.solve = r.vp.stats;
      field_range(r.state.rho, sum.rho_min, sum.rho_max);
      field_range(r.state.nu, sum.nu_min, sum.nu_max);
      tr.steps.push_back(std::move(sum));
      tr.rho_out.append(std::move(r.rho.outflow));
      tr.rho_in.append(std::move(r.rho.inflow));
      tr.nu_out.append(std::move(r.nu.outflow));
      tr.nu_in.append(std::move(r.nu.inflow));
      state = std::move(r.state);
      // Land exactly on T when the last step was capped by the remaining time.
      t = (s.T - (t + dt) <= eps) ? s.T : t + dt;
      ++n;
    }
    tr.frames.push_back({t, state, solve_momentum(grid, s, state, t)});
  } catch (const std::exception& e) {
    tr.complete = false;
    std::ostringstream os;
    os << "step " << n << ": " << e.what();
    tr.error = os.str();
    if (tr.frames.empty() || tr.frames.back().t != t) tr.frames.push_back({t, state, {}});
  }
  return tr;
}

std::vector<double> picard_time_grid(const Scenario& s) {
  if (s.T <= 0.0) return {0.0};
  const StaggeredGrid grid = make_grid(s);
  const MixtureState init = initial_state(s, grid);
  const BoundaryData data = boundary_data(s);
  double dt = s.dt_max;
  for (int k = 0; k <= 10; ++k) {
    const double t = s.T * k / 10.0;
    const VelocityPressure vp = solve_momentum(grid, s, init, t);
    const BoundaryPartition part = partition_at(grid, s, data.b, t);
    dt = std::min({dt, cfl_dt(grid, vp.velocity.faces, s.cfl, s.dt_max),
                   monotone_dt(grid, vp.velocity.faces, part)});
  }
  dt /= s.picard_dt_margin;
  const int steps = std::max(1, static_cast<int>(std::ceil(s.T / dt - 1e-9)));
  std::vector<double> times(static_cast<std::size_t>(steps) + 1);
  for (int n = 0; n <= steps; ++n) times[n] = s.T * n / steps;
  times.back() = s.T;
  return times;
}

Trajectory picard_map(const Scenario& s, const std::vector<double>& times, const std::vector<MixtureState>& guess) {
  if (times.empty() || guess.size() != times.size())
    throw ConfigError("picard_map: guess must hold one state per time");
  for (std::size_t n = 0; n < guess.size(); ++n)
    if (!guess[n].in_bounds(s.tol.tau_mp)) {
      std::ostringstream os;
      os << "picard_map: guess at t = " << times[n] << " leaves the admissible bounds";
      throw DataError(os.str());
    }
  const StaggeredGrid grid = make_grid(s);
  const BoundaryData data = boundary_data(s);
  Trajectory tr;
  MixtureState state = initial_state(s, grid);
  for (std::size_t n = 0; n + 1 < times.size(); ++n) {
    const double t = times[n], dt = times[n + 1] - times[n];
    VelocityPressure vp = solve_momentum(grid, s, guess[n], t);
    const BoundaryPartition part = partition_at(grid, s, data.b, t);
    AdvectResult rho = advect(grid, state.rho, vp.velocity.faces, t, dt, data.rho_b, part);
    AdvectResult nu = advect(grid, state.nu, vp.velocity.faces, t, dt, data.nu_b, part);
    StepSummary sum;
    sum.index = static_cast<int>(n);
    sum.t = t;
    sum.dt = dt;
    sum.solve = vp.stats;
    field_range(rho.field, sum.rho_min, sum.rho_max);
    field_range(nu.field, sum.nu_min, sum.nu_max);
    tr.steps.push_back(std::move(sum));
    tr.frames.push_back({t, state, std::move(vp)});
    tr.rho_out.append(std::move(rho.outflow));
    tr.rho_in.append(std::move(rho.inflow));
    tr.nu_out.append(std::move(nu.outflow));
    tr.nu_in.append(std::move(nu.inflow));
    state.rho = std::move(rho.field);
    state.nu = std::move(nu.field);
  }
  tr.frames.push_back({times.back(), state, solve_momentum(grid, s, guess.back(), times.back())});
  return tr;
}

double trajectory_distance(const StaggeredGrid& grid, const std::vector<double>& times,
                           const std::vector<MixtureState>& a, const std::vector<MixtureState>& b) {
  const std::size_t n = times.size();
  if (a.size() != n || b.size() != n) throw ConfigError("trajectory_distance: size mismatch");
  auto sq = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t c = 0; c < a[k].rho.size(); ++c) {
      const double dr = a[k].rho[c] - b[k].rho[c], dn = a[k].nu[c] - b[k].nu[c];
      s += dr * dr + dn * dn;
    }
    return s * grid.cell_area();
  };
  if (n == 1) return std::sqrt(sq(0));
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) total += 0.5 * (times[k + 1] - times[k]) * (sq(k) + sq(k + 1));
  return std::sqrt(total);
}

double picard_tolerance(const Scenario& s, const StaggeredGrid& grid) {
  const MixtureState init = initial_state(s, grid);
  const double r = l2_norm(init.rho, grid), v = l2_norm(init.nu, grid);
  const double norm2 = r * r + v * v;
  return s.tol.tol_P * std::sqrt(s.T > 0.0 ? s.T * norm2 : norm2);
}

MixtureState state_at(const Trajectory& tr, double t) {
  const auto& f = tr.frames;
  if (f.empty()) throw ConfigError("state_at: empty trajectory");
  if (t <= f.front().t) return f.front().state;
  if (t >= f.back().t) return f.back().state;
  const auto it = std::upper_bound(f.begin(), f.end(), t, [](double x, const Frame& fr) { return x < fr.t; });
  const Frame& hi = *it;
  const Frame& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  MixtureState out = lo.state;
  for (std::size_t c = 0; c < out.rho.size(); ++c) {
    out.rho[c] = (1.0 - w) * lo.state.rho[c] + w * hi.state.rho[c];
    out.nu[c] = (1.0 - w) * lo.state.nu[c] + w * hi.state.nu[c];
  }
  return out;
}

CellField coarsen(const StaggeredGrid& fine, const CellField& f) {
  if (fine.nx() % 2 || fine.ny() % 2) throw ConfigError("coarsen: cell counts must be even");
  const int nx = fine.nx() / 2, ny = fine.ny() / 2;
  CellField out(static_cast<std::size_t>(nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      out[i + j * nx] = 0.25 * (f[fine.cell(2 * i, 2 * j)] + f[fine.cell(2 * i + 1, 2 * j)] +
                                f[fine.cell(2 * i, 2 * j + 1)] + f[fine.cell(2 * i + 1, 2 * j + 1)]);
  return out;
}

SchauderResult schauder_solve(const Scenario& s, const SchauderOptions& options) {
  const StaggeredGrid grid = make_grid(s);
  SchauderResult res;
  res.times = picard_time_grid(s);
  const double theta = options.relaxation.value_or(s.relaxation);
  const int max_iter = options.max_iter.value_or(s.picard_max_iter);
  auto& hist = res.history;
  hist.tol = options.tol.value_or(picard_tolerance(s, grid));

  std::vector<MixtureState> guess;
  if (options.guess == InitialGuess::March) {
    MarchOptions mo;
    mo.store_every = 1;
    const Trajectory m = run_march(s, mo);
    for (double t : res.times) guess.push_back(state_at(m, t));
  } else {
    guess.assign(res.times.size(), initial_state(s, grid));
  }

  for (int k = 1; k <= max_iter; ++k) {
    Trajectory tr = picard_map(s, res.times, guess);
    std::vector<MixtureState> next(guess.size());
    for (std::size_t n = 0; n < next.size(); ++n) {
      if (theta == 1.0) {
        next[n] = tr.frames[n].state;
      } else {
        next[n] = guess[n];
        for (std::size_t c = 0; c < next[n].rho.size(); ++c) {
          next[n].rho[c] = theta * tr.frames[n].state.rho[c] + (1.0 - theta) * guess[n].rho[c];
          next[n].nu[c] = theta * tr.frames[n].state.nu[c] + (1.0 - theta) * guess[n].nu[c];
        }
      }
    }
    PicardRow row;
    row.k = k;
    row.distance = trajectory_distance(grid, res.times, next, guess);
    for (const auto& fr : tr.frames) {
      row.max_h1 = std::max(row.max_h1, h1_seminorm(fr.vp.velocity, grid));
      row.max_speed = std::max(row.max_speed, linf_norm(fr.vp.velocity.faces));
    }
    hist.rows.push_back(row);
    guess = std::move(next);
    if (options.keep_iterates) hist.iterates.push_back(tr);
    res.trajectory = std::move(tr);
    hist.k_final = k;
    if (row.distance <= hist.tol) {
      hist.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace gmp
