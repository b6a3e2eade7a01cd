#include "gmp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gmp {

std::vector<BoundsViolation> bounds_check(const MixtureState& state, double tau_mp) {
  std::vector<BoundsViolation> out;
  const auto& b = state.bounds;
  for (std::size_t c = 0; c < state.rho.size(); ++c) {
    const double r = state.rho[c], n = state.nu[c];
    const double excess = std::max({b.rho_min - r, r - b.rho_max, b.nu_min - n, n - b.nu_max, 0.0});
    if (excess > tau_mp || !std::isfinite(r) || !std::isfinite(n))
      out.push_back({static_cast<int>(c), r, n, excess});
  }
  return out;
}

namespace {

struct PhaseClassifier {
  PhaseClassifier(const PhaseSpec& ph, double eps_rel)
      : p(ph),
        eps_rho(eps_rel * (ph.phase[1].rho_lo - ph.phase[0].rho_hi)),
        eps_nu(eps_rel * (ph.phase[1].nu_lo - ph.phase[0].nu_hi)) {}

  // 0 = neither phase, 1 or 2 otherwise.
  int by_rho(double r) const {
    for (int k = 0; k < 2; ++k)
      if (r >= p.phase[k].rho_lo - eps_rho && r <= p.phase[k].rho_hi + eps_rho) return k + 1;
    return 0;
  }
  int by_nu(double n) const {
    for (int k = 0; k < 2; ++k)
      if (n >= p.phase[k].nu_lo - eps_nu && n <= p.phase[k].nu_hi + eps_nu) return k + 1;
    return 0;
  }
  int joint(double r, double n) const {
    const int a = by_rho(r);
    return a != 0 && a == by_nu(n) ? a : 0;
  }

  const PhaseSpec& p;
  double eps_rho;
  double eps_nu;
};

}  // namespace

MixingRow mixing_measure(const StaggeredGrid& grid, const MixtureState& state, const PhaseSpec& phases,
                         double eps_rel, double t) {
  const PhaseClassifier cls(phases, eps_rel);
  long n1 = 0, n2 = 0, nm = 0, dis = 0;
  for (std::size_t c = 0; c < state.rho.size(); ++c) {
    const int a = cls.by_rho(state.rho[c]), b = cls.by_nu(state.nu[c]);
    if (a != b) ++dis;
    const int j = (a != 0 && a == b) ? a : 0;
    if (j == 1)
      ++n1;
    else if (j == 2)
      ++n2;
    else
      ++nm;
  }
  const double A = grid.cell_area();
  return {t, static_cast<double>(n1) * A, static_cast<double>(n2) * A, static_cast<double>(nm) * A,
          static_cast<double>(dis) * A};
}

TraceMixing trace_mixing(const TraceRecord& rho_out, const TraceRecord& nu_out, const PhaseSpec& phases,
                         double eps_rel) {
  const PhaseClassifier cls(phases, eps_rel);
  TraceMixing m;
  const std::size_t steps = std::min(rho_out.steps.size(), nu_out.steps.size());
  for (std::size_t s = 0; s < steps; ++s) {
    const auto& a = rho_out.steps[s].entries;
    const auto& b = nu_out.steps[s].entries;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
      const int j = cls.joint(a[k].value, b[k].value);
      (j == 1 ? m.weight_phase1 : j == 2 ? m.weight_phase2 : m.weight_mixed) += a[k].weight;
    }
  }
  return m;
}

double renormalization_step_defect(const std::function<double(double)>& beta, const StaggeredGrid& grid,
                                   const CellField& before, const FaceField& v, double t, double dt,
                                   const ScalarSampler& inflow, const BoundaryPartition& partition) {
  const AdvectResult renorm = renormalized_advect(beta, grid, before, v, t, dt, inflow, partition);
  const AdvectResult plain = advect(grid, before, v, t, dt, inflow, partition);
  double s = 0.0;
  for (std::size_t c = 0; c < before.size(); ++c) s += std::abs(renorm.field[c] - beta(plain.field[c]));
  return s * grid.cell_area();
}

StepObserver renormalization_observer(const StaggeredGrid& grid, const Scenario& scenario,
                                      std::function<double(double)> beta, double& total,
                                      std::vector<double>* per_step) {
  ScalarSampler rho_b = boundary_data(scenario).rho_b;
  return [&grid, rho_b, beta, &total, per_step](int, const MixtureState& before, const StepResult& r) {
    const double d = renormalization_step_defect(beta, grid, before.rho, r.vp.velocity.faces, r.rho.outflow.time,
                                                 r.rho.outflow.dt, rho_b, r.partition);
    total += d;
    if (per_step) per_step->push_back(d);
  };
}

std::vector<double> renormalization_defect(const StaggeredGrid& grid, const Scenario& scenario,
                                           const Trajectory& tr, const std::function<double(double)>& beta) {
  const ScalarSampler rho_b = boundary_data(scenario).rho_b;
  std::vector<double> out;
  for (std::size_t n = 0; n + 1 < tr.frames.size(); ++n) {
    const Frame& f = tr.frames[n];
    const double dt = tr.frames[n + 1].t - f.t;
    out.push_back(renormalization_step_defect(beta, grid, f.state.rho, f.vp.velocity.faces, f.t, dt, rho_b,
                                              boundary_partition(grid, scenario, f.t)));
  }
  return out;
}

const std::vector<TestFunction>& transport_test_functions() {
  using std::numbers::pi;
  static const std::vector<TestFunction> family = {
      {"interior_sine", [](double t, double T) { return T - t; },
       [](double t, double T) { return T * t - 0.5 * t * t; },
       [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); },
       [](double x, double y) {
         return Vec2{pi * std::cos(pi * x) * std::sin(pi * y), pi * std::sin(pi * x) * std::cos(pi * y)};
       }},
      {"boundary_cosine", [](double t, double T) { return (T - t) * (T - t); },
       [](double t, double T) { return -(T - t) * (T - t) * (T - t) / 3.0; },
       [](double x, double y) { return std::cos(0.5 * pi * x) * (1.0 + y); },
       [](double x, double y) {
         return Vec2{-0.5 * pi * std::sin(0.5 * pi * x) * (1.0 + y), std::cos(0.5 * pi * x)};
       }},
      {"boundary_bilinear", [](double t, double T) { return T - t; },
       [](double t, double T) { return T * t - 0.5 * t * t; },
       [](double x, double y) { return 1.0 + x + x * y; },
       [](double x, double y) { return Vec2{1.0 + y, x}; }},
  };
  return family;
}

namespace {

Vec2 face_center(const StaggeredGrid& g, int id) {
  if (id < g.xface_count()) return g.xface_center(id % (g.nx() + 1), id / (g.nx() + 1));
  const int k = id - g.xface_count();
  return g.yface_center(k % g.nx(), k / g.nx());
}

Vec2 normalized(const StaggeredGrid& g, Vec2 x) {
  return {(x.x - g.origin().x) / g.extent().x, (x.y - g.origin().y) / g.extent().y};
}

Vec2 cell_velocity(const StaggeredGrid& g, const FaceField& v, int i, int j) {
  return {0.5 * (v.u[g.xface(i, j)] + v.u[g.xface(i + 1, j)]), 0.5 * (v.v[g.yface(i, j)] + v.v[g.yface(i, j + 1)])};
}

double boundary_pairing(const StaggeredGrid& g, double T, const TraceRecord& rec, const TestFunction& phi) {
  double s = 0.0;
  for (const auto& st : rec.steps) {
    if (st.dt <= 0.0) continue;
    const double da = (phi.a_integral(st.time + st.dt, T) - phi.a_integral(st.time, T)) / st.dt;
    for (const auto& e : st.entries) {
      const Vec2 xh = normalized(g, face_center(g, e.face));
      s += e.value * e.weight * phi.s(xh.x, xh.y) * da;
    }
  }
  return s;
}

}  // namespace

TransportIdentity transport_identity(const StaggeredGrid& g, double T, const std::vector<Frame>& frames,
                                     bool density, const TraceRecord& out, const TraceRecord& in,
                                     const TestFunction& phi) {
  TransportIdentity r;
  r.test = phi.name;
  const double A = g.cell_area();
  const double Lx = g.extent().x, Ly = g.extent().y;
  const int nx = g.nx(), ny = g.ny();
  for (std::size_t n = 0; n + 1 < frames.size(); ++n) {
    const double t0 = frames[n].t, t1 = frames[n + 1].t;
    const CellField& q = density ? frames[n].state.rho : frames[n].state.nu;
    const FaceField& v = frames[n].vp.velocity.faces;
    const double dA = phi.a_integral(t1, T) - phi.a_integral(t0, T);
    const double da = phi.a(t1, T) - phi.a(t0, T);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const Vec2 xh = normalized(g, g.cell_center(i, j));
        const Vec2 gs = phi.grad_s(xh.x, xh.y);
        const Vec2 vc = cell_velocity(g, v, i, j);
        const double qi = q[g.cell(i, j)];
        r.volume += qi * (phi.s(xh.x, xh.y) * da + (vc.x * gs.x / Lx + vc.y * gs.y / Ly) * dA) * A;
      }
  }
  if (!frames.empty()) {
    const CellField& q0 = density ? frames.front().state.rho : frames.front().state.nu;
    const double a0 = phi.a(frames.front().t, T);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const Vec2 xh = normalized(g, g.cell_center(i, j));
        r.initial += q0[g.cell(i, j)] * a0 * phi.s(xh.x, xh.y) * A;
      }
  }
  r.outflow = boundary_pairing(g, T, out, phi);
  r.inflow = boundary_pairing(g, T, in, phi);
  r.residual = r.volume + r.initial - r.outflow + r.inflow;
  const double scale = std::abs(r.volume) + std::abs(r.initial) + std::abs(r.outflow) + std::abs(r.inflow);
  r.relative = scale > 0.0 ? std::abs(r.residual) / scale : 0.0;
  return r;
}

WeakFormReport weak_form_residual(const StaggeredGrid& g, const Scenario& s, const Trajectory& tr) {
  using std::numbers::pi;
  WeakFormReport rep;
  double num_r = 0.0, den_r = 0.0, num_n = 0.0, den_n = 0.0;
  for (const auto& phi : transport_test_functions()) {
    auto r = transport_identity(g, s.T, tr.frames, true, tr.rho_out, tr.rho_in, phi);
    auto n = transport_identity(g, s.T, tr.frames, false, tr.nu_out, tr.nu_in, phi);
    num_r += std::abs(r.residual);
    den_r += std::abs(r.volume) + std::abs(r.initial) + std::abs(r.outflow) + std::abs(r.inflow);
    num_n += std::abs(n.residual);
    den_n += std::abs(n.volume) + std::abs(n.initial) + std::abs(n.outflow) + std::abs(n.inflow);
    rep.rho.push_back(std::move(r));
    rep.nu.push_back(std::move(n));
  }
  rep.rho_relative = den_r > 0.0 ? num_r / den_r : 0.0;
  rep.nu_relative = den_n > 0.0 ? num_n / den_n : 0.0;

  const double Lx = g.extent().x, Ly = g.extent().y;
  const DragModel drag = drag_model(s);
  const VectorSampler gfun = boundary_data(s).g;
  double num_m = 0.0, den_m = 0.0;
  for (const auto& f : tr.frames) {
    if (f.vp.p.empty()) continue;
    const CellField mu = mixture_viscosity(f.state);
    const CellField h = drag_field(g, drag, mu, f.t);
    const auto D = symmetric_gradient(g, f.vp.velocity);
    double drag_term = 0.0, visc_term = 0.0, force_term = 0.0, magnitude = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const int c = g.cell(i, j);
        const Vec2 x = g.cell_center(i, j);
        const Vec2 xh = normalized(g, x);
        const double sx = std::sin(pi * xh.x), sy = std::sin(pi * xh.y);
        const double s2x = std::sin(2 * pi * xh.x), s2y = std::sin(2 * pi * xh.y);
        const Vec2 psi{pi * sx * sx * s2y / Ly, -pi * s2x * sy * sy / Lx};
        const double dxx = pi * pi * s2x * s2y / (Lx * Ly);
        const double dxy = 0.5 * (2 * pi * pi * sx * sx * std::cos(2 * pi * xh.y) / (Ly * Ly) -
                                  2 * pi * pi * std::cos(2 * pi * xh.x) * sy * sy / (Lx * Lx));
        const Vec2 vc = cell_velocity(g, f.vp.velocity.faces, i, j);
        const double dr = h[c] * dot(vc, psi);
        const double vi = mu[c] * (D[c].xx * dxx - D[c].yy * dxx + 2.0 * D[c].xy * dxy);
        const double fo = f.state.rho[c] * dot(gfun(f.t, x), psi);
        drag_term += dr;
        visc_term += vi;
        force_term += fo;
        magnitude += std::abs(dr) + std::abs(vi) + std::abs(fo);
      }
    const double A = g.cell_area();
    num_m += std::abs(drag_term + visc_term - force_term) * A;
    den_m += magnitude * A;
  }
  rep.momentum_relative = den_m > 0.0 ? num_m / den_m : 0.0;
  return rep;
}

std::vector<SymTensor> stress_field(const StaggeredGrid& grid, const VelocityPressure& vp, const CellField& mu) {
  auto D = symmetric_gradient(grid, vp.velocity);
  for (std::size_t c = 0; c < D.size(); ++c) {
    const double m2 = 2.0 * mu[c];
    D[c] = {-vp.p[c] + m2 * D[c].xx, m2 * D[c].xy, -vp.p[c] + m2 * D[c].yy};
  }
  return D;
}

EnergyIdentity energy_report(const StaggeredGrid& grid, const VelocityPressure& vp, const CellField& mu,
                             const CellField& h, const FaceField& forcing, const Velocity& lift,
                             ViscosityAveraging averaging) {
  Velocity z = vp.velocity;
  for (std::size_t k = 0; k < z.faces.u.size(); ++k) z.faces.u[k] -= lift.faces.u[k];
  for (std::size_t k = 0; k < z.faces.v.size(); ++k) z.faces.v[k] -= lift.faces.v[k];
  for (auto [a, b] : {std::pair{&z.wall.bottom, &lift.wall.bottom}, std::pair{&z.wall.top, &lift.wall.top},
                      std::pair{&z.wall.left, &lift.wall.left}, std::pair{&z.wall.right, &lift.wall.right}})
    for (std::size_t k = 0; k < a->size(); ++k) (*a)[k] -= (*b)[k];

  EnergyIdentity e;
  e.lhs = viscous_form(grid, mu, z, z, averaging) + drag_form(grid, h, z.faces, z.faces);
  const double f = forcing_form(grid, forcing, z.faces);
  const double avz = viscous_form(grid, mu, lift, z, averaging);
  const double hvz = drag_form(grid, h, lift.faces, z.faces);
  e.rhs = f - avz - hvz;
  const double scale = std::max({std::abs(e.lhs), std::abs(f), std::abs(avz), std::abs(hvz)});
  e.relative = scale > 0.0 ? std::abs(e.lhs - e.rhs) / scale : 0.0;
  return e;
}

EnergyChecker::EnergyChecker(const StaggeredGrid& grid, const Scenario& scenario)
    : grid_(grid), scenario_(scenario), steady_(!scenario.bx.depends_on_time() && !scenario.by.depends_on_time()) {}

EnergyIdentity EnergyChecker::operator()(const MixtureState& state, const VelocityPressure& vp, double t) {
  const BoundaryData data = boundary_data(scenario_);
  const BrinkmanOptions opts = brinkman_options(scenario_);
  if (!steady_ || !have_lift_) {
    lift_ = lift_boundary(grid_, data.b, t, opts);
    have_lift_ = true;
  }
  const CellField mu = mixture_viscosity(state);
  const CellField h = drag_field(grid_, drag_model(scenario_), mu, t);
  const FaceField f = body_force(grid_, state.rho, data.g, t);
  return energy_report(grid_, vp, mu, h, f, lift_, opts.averaging);
}

}  // namespace gmp
