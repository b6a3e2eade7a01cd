#include "gmp/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "gmp/diagnostics.hpp"

namespace gmp {
namespace {

namespace fs = std::filesystem;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  void add(const CellField& f) {
    for (double x : f) add(x);
  }
  void add(const TraceStep& s) {
    for (const auto& e : s.entries) add(e.value);
  }
};

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06zu.csv", k);
  return buf;
}

/// Per-step records shared by both drivers.
struct StepChecks {
  std::vector<double> energy;
  double worst_energy = 0.0;
  double worst_div = 0.0;
  double worst_momentum = 0.0;
  long bounds_violations = 0;
  long range_violations = 0;
  double worst_range_excess = 0.0;
};

/// Data-range check of one transport step: output within the range of the
/// input and the inflow values, widened by dt * tau_div * ||input||.
void check_step_range(const CellField& before, const AdvectResult& r, double tau_div, StepChecks& c) {
  Range range;
  range.add(before);
  range.add(r.inflow);
  const double eps = r.outflow.dt * tau_div * linf_norm(before);
  for (double x : r.field) {
    const double excess = std::max(range.lo - x, x - range.hi);
    if (excess > eps) {
      ++c.range_violations;
      c.worst_range_excess = std::max(c.worst_range_excess, excess);
    }
  }
}

}  // namespace

Report check_scenario(const Scenario& s) {
  Report rep("check " + s.name);
  const StaggeredGrid grid = make_grid(s);
  const ValidationReport v = validate(s, grid);
  rep.section("validation");
  rep.value("grid", std::to_string(s.nx) + "x" + std::to_string(s.ny));
  for (const char* label : {"reg2", "reg3", "reg4", "compatibility"}) {
    std::string detail;
    for (const auto& x : v.violations)
      if (x.label == label) detail += (detail.empty() ? "" : "; ") + x.message;
    rep.check(label, !v.has(label), detail);
  }
  return rep;
}

RunOutcome run_scenario(const Scenario& s, const std::string& out_dir) {
  const StaggeredGrid grid = make_grid(s);
  RunOutcome out;
  out.report = Report("run " + s.name);
  Report& rep = out.report;
  StepChecks checks;
  EnergyChecker energy(grid, s);
  const double tau_div = s.tol.tau_div;

  const ValidationReport validation = validate(s, grid);
  rep.section("validation");
  for (const auto& v : validation.violations) rep.value(v.label, v.message);
  rep.check("assumptions", validation.ok(), validation.ok() ? "" : "see validation rows");

  auto record_solve = [&](const SolveStats& st) {
    checks.worst_div = std::max(checks.worst_div, st.divergence_inf);
    checks.worst_momentum = std::max(checks.worst_momentum, st.momentum_residual);
  };

  Trajectory& tr = out.trajectory;
  if (s.mode == RunMode::March) {
    MarchOptions mo;
    mo.store_every = 1;
    mo.observer = [&](int, const MixtureState& before, const StepResult& r) {
      record_solve(r.vp.stats);
      const EnergyIdentity e = energy(before, r.vp, r.rho.outflow.time);
      checks.energy.push_back(e.relative);
      checks.worst_energy = std::max(checks.worst_energy, e.relative);
      checks.bounds_violations += static_cast<long>(bounds_check(r.state, s.tol.tau_mp).size());
      check_step_range(before.rho, r.rho, tau_div, checks);
      check_step_range(before.nu, r.nu, tau_div, checks);
    };
    tr = run_march(s, mo);
    if (!tr.frames.empty() && !tr.frames.back().vp.p.empty()) record_solve(tr.frames.back().vp.stats);
  } else {
    try {
      SchauderResult sr = schauder_solve(s);
      tr = std::move(sr.trajectory);
      out.picard = sr.history.rows;
      out.picard_converged = sr.history.converged;
      const BoundaryData data = boundary_data(s);
      for (std::size_t n = 0; n < tr.frames.size(); ++n) {
        const Frame& f = tr.frames[n];
        record_solve(f.vp.stats);
        // The stored velocity was solved from the previous iterate; the
        // energy identity is checked on a fresh solve from this state.
        const VelocityPressure vp = solve_momentum(grid, s, f.state, f.t);
        record_solve(vp.stats);
        const EnergyIdentity e = energy(f.state, vp, f.t);
        checks.energy.push_back(e.relative);
        checks.worst_energy = std::max(checks.worst_energy, e.relative);
        checks.bounds_violations += static_cast<long>(bounds_check(f.state, s.tol.tau_mp).size());
        if (n + 1 < tr.frames.size()) {
          const BoundaryPartition part = boundary_partition(grid, s, f.t);
          const double dt = tr.frames[n + 1].t - f.t;
          check_step_range(f.state.rho, advect(grid, f.state.rho, f.vp.velocity.faces, f.t, dt, data.rho_b, part),
                           tau_div, checks);
          check_step_range(f.state.nu, advect(grid, f.state.nu, f.vp.velocity.faces, f.t, dt, data.nu_b, part),
                           tau_div, checks);
        }
      }
    } catch (const std::exception& e) {
      tr.complete = false;
      tr.error = e.what();
    }
  }

  rep.section("run");
  rep.value("mode", std::string(s.mode == RunMode::March ? "march" : "picard"));
  rep.value("grid", std::to_string(s.nx) + "x" + std::to_string(s.ny));
  rep.value("T", s.T);
  rep.value("steps", static_cast<long long>(tr.steps.size()));
  if (!tr.frames.empty()) rep.value("final_time", tr.frames.back().t);
  rep.check("completed", tr.complete, tr.error);
  rep.check("divergence", checks.worst_div <= tau_div, "max |div v| = " + format_number(checks.worst_div));
  rep.check("momentum_residual", checks.worst_momentum <= s.tol.tau_solve,
            "max relative residual = " + format_number(checks.worst_momentum));
  rep.check("energy_identity", checks.worst_energy <= 10.0 * s.tol.tau_solve,
            "max relative residual = " + format_number(checks.worst_energy));
  rep.check("admissible_bounds", checks.bounds_violations == 0,
            std::to_string(checks.bounds_violations) + " cell violations");
  rep.check("max_principle", checks.range_violations == 0,
            std::to_string(checks.range_violations) + " violations, worst excess " +
                format_number(checks.worst_range_excess));

  out.summary.worst_divergence = checks.worst_div;
  out.summary.worst_momentum = checks.worst_momentum;
  out.summary.worst_energy = checks.worst_energy;
  out.summary.bounds_violations = checks.bounds_violations;
  out.summary.range_violations = checks.range_violations;
  out.summary.worst_range_excess = checks.worst_range_excess;

  if (!tr.frames.empty()) {
    const CellField& r0 = tr.frames.front().state.rho;
    const CellField& n0 = tr.frames.front().state.nu;
    const MassBalance mr = mass_ledger(grid, r0, tr.frames.back().state.rho, tr.rho_out, tr.rho_in);
    const MassBalance mn = mass_ledger(grid, n0, tr.frames.back().state.nu, tr.nu_out, tr.nu_in);
    rep.section("mass_ledger");
    rep.table({"quantity", "initial", "final", "outflow", "inflow", "residual"},
              {{0, mr.initial, mr.final, mr.outflow, mr.inflow, mr.residual},
               {1, mn.initial, mn.final, mn.outflow, mn.inflow, mn.residual}});
    out.summary.mass_rho = mr.residual / std::abs(mr.initial);
    out.summary.mass_nu = mn.residual / std::abs(mn.initial);
    rep.check("mass_ledger_rho", mr.residual <= 1e-10 * std::abs(mr.initial),
              "residual / initial = " + format_number(mr.residual / std::abs(mr.initial)));
    rep.check("mass_ledger_nu", mn.residual <= 1e-10 * std::abs(mn.initial),
              "residual / initial = " + format_number(mn.residual / std::abs(mn.initial)));

    const Frame& last = tr.frames.back();
    if (!last.vp.p.empty()) {
      const CellField mu = mixture_viscosity(last.state);
      const auto T = stress_field(grid, last.vp, mu);
      const CellField div = discrete_divergence(grid, last.vp.velocity.faces);
      double worst = 0.0, bound = 0.0;
      for (std::size_t c = 0; c < T.size(); ++c) {
        worst = std::max(worst, std::abs(T[c].xx + T[c].yy + 2.0 * last.vp.p[c] - 2.0 * mu[c] * div[c]));
        bound = std::max(bound, 2.0 * mu[c] * tau_div);
      }
      rep.section("stress");
      rep.value("max_trace_defect", worst);
      rep.check("stress_trace", worst <= bound + 1e-12 * (1.0 + linf_norm(last.vp.p)));
    }

    if (tr.complete && tr.frames.size() > 1) {
      const WeakFormReport w = weak_form_residual(grid, s, tr);
      rep.section("weak_form");
      for (std::size_t k = 0; k < w.rho.size(); ++k) {
        rep.value("rho." + w.rho[k].test, w.rho[k].relative);
        rep.value("nu." + w.nu[k].test, w.nu[k].relative);
      }
      rep.value("rho_relative", w.rho_relative);
      rep.value("nu_relative", w.nu_relative);
      rep.value("momentum_relative", w.momentum_relative);
      const auto defects = renormalization_defect(grid, s, tr, [](double r) { return r * r; });
      double total = 0.0;
      for (double d : defects) total += d;
      rep.section("renormalization");
      rep.value("beta", std::string("r^2"));
      rep.value("l1_defect_total", total);
    }

    if (s.phases) {
      rep.section("mixing");
      std::vector<std::vector<double>> rows;
      for (std::size_t n = 0; n < tr.frames.size(); ++n) {
        if (n % static_cast<std::size_t>(s.output_every) != 0 && n + 1 != tr.frames.size()) continue;
        const MixingRow m = mixing_measure(grid, tr.frames[n].state, *s.phases, s.mix_epsilon, tr.frames[n].t);
        rows.push_back({m.t, m.area_phase1, m.area_phase2, m.area_mixed, m.rho_nu_disagreement});
      }
      rep.table({"t", "area_phase1", "area_phase2", "area_mixed", "rho_nu_disagreement"}, rows);
      bool agree = true;
      for (const auto& r : rows) agree = agree && r[4] <= r[3];
      rep.check("phase_agreement", agree, "rho/nu disagreement within the mixed set");
      const TraceMixing tm = trace_mixing(tr.rho_out, tr.nu_out, *s.phases, s.mix_epsilon);
      rep.value("trace_weight_phase1", tm.weight_phase1);
      rep.value("trace_weight_phase2", tm.weight_phase2);
      rep.value("trace_weight_mixed", tm.weight_mixed);
    }
  }

  if (s.mode == RunMode::Picard) {
    rep.section("picard");
    std::vector<std::vector<double>> rows;
    for (const auto& r : out.picard) rows.push_back({double(r.k), r.distance, r.max_h1, r.max_speed});
    rep.table({"k", "distance", "max_h1", "max_speed"}, rows);
    rep.value("converged", std::string(out.picard_converged ? "yes" : "no"));
  }

  if (out_dir.empty()) return out;

  const fs::path dir(out_dir);
  fs::create_directories(dir / "snapshots");
  write_text((dir / "scenario.gmp").string(), print_scenario(s));
  std::string index = "index,time,file\n";
  std::size_t written = 0;
  for (std::size_t n = 0; n < tr.frames.size(); ++n) {
    if (n % static_cast<std::size_t>(s.output_every) != 0 && n + 1 != tr.frames.size()) continue;
    const std::string name = snapshot_name(written++);
    write_snapshot((dir / "snapshots" / name).string(), grid, &tr.frames[n].state, &tr.frames[n].vp);
    index += std::to_string(n) + "," + format_number(tr.frames[n].t) + "," + name + "\n";
  }
  write_text((dir / "snapshots" / "index.csv").string(), index);
  write_traces((dir / "traces_rho.csv").string(), tr.rho_out);
  write_traces((dir / "traces_nu.csv").string(), tr.nu_out);
  write_traces((dir / "inflow_rho.csv").string(), tr.rho_in);
  write_traces((dir / "inflow_nu.csv").string(), tr.nu_in);

  std::string steps = "step,t,dt,outer_iterations,divergence_inf,momentum_residual,energy_residual,rho_min,rho_max,"
                      "nu_min,nu_max\n";
  for (std::size_t k = 0; k < tr.steps.size(); ++k) {
    const auto& st = tr.steps[k];
    const double e = k < checks.energy.size() ? checks.energy[k] : 0.0;
    steps += std::to_string(st.index) + "," + format_number(st.t) + "," + format_number(st.dt) + "," +
             std::to_string(st.solve.outer_iterations) + "," + format_number(st.solve.divergence_inf) + "," +
             format_number(st.solve.momentum_residual) + "," + format_number(e) + "," + format_number(st.rho_min) +
             "," + format_number(st.rho_max) + "," + format_number(st.nu_min) + "," + format_number(st.nu_max) + "\n";
  }
  write_text((dir / "steps.csv").string(), steps);

  if (s.mode == RunMode::Picard) {
    std::string p = "k,distance,max_h1,max_speed\n";
    for (const auto& r : out.picard)
      p += std::to_string(r.k) + "," + format_number(r.distance) + "," + format_number(r.max_h1) + "," +
           format_number(r.max_speed) + "\n";
    write_text((dir / "picard.csv").string(), p);
  }
  out.report_path = (dir / "report.txt").string();
  rep.write(out.report_path);
  return out;
}

}  // namespace gmp
