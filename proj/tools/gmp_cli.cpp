// gmp: command-line driver for the generalized Muskat simulator.
//
//   gmp run <scenario> [--out DIR] [--mode march|picard]
//   gmp check <scenario>
//   gmp mms [--levels 32,64,128] [--scenario FILE]
//   gmp refine <scenario> --levels 32,64,128
//   gmp plot <snapshot.csv> [--field rho|nu|p] [--out FILE.pgm]
//
// Exit codes: 0 all hard invariants hold, 1 invariant violation, 2 usage or
// configuration error.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "gmp/output.hpp"
#include "gmp/run.hpp"
#include "gmp/scenario.hpp"
#include "gmp/studies.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

std::string num(double x) { return gmp::format_number(x); }

int cmd_run(const std::string& path, std::string out, const std::string& mode) {
  gmp::Scenario s = gmp::load_scenario(path);
  if (mode == "march")
    s.mode = gmp::RunMode::March;
  else if (mode == "picard")
    s.mode = gmp::RunMode::Picard;
  if (out.empty()) out = gmp::output_directory("out");
  const auto t0 = std::chrono::steady_clock::now();
  const gmp::RunOutcome r = gmp::run_scenario(s, out);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "wall time " << secs << " s\n";
  std::cout << "steps: " << r.trajectory.steps.size() << "\n";
  if (s.mode == gmp::RunMode::Picard)
    std::cout << "picard iterations: " << r.picard.size() << (r.picard_converged ? " (converged)" : " (not converged)")
              << "\n";
  std::cout << "report: " << r.report_path << "\n";
  std::cout << (r.report.passed() ? "PASS" : "FAIL") << "\n";
  if (!r.report.passed()) {
    std::cout << r.report.failures() << " hard invariant(s) violated, see " << r.report_path << "\n";
    return kViolation;
  }
  return kOk;
}

int cmd_check(const std::string& path) {
  const gmp::Scenario s = gmp::load_scenario(path);
  const gmp::Report rep = gmp::check_scenario(s);
  std::cout << rep.str();
  return rep.passed() ? kOk : kViolation;
}

int cmd_mms(const std::string& levels_text, const std::string& scenario_path) {
  const auto levels = gmp::parse_levels(levels_text);
  const gmp::Scenario base =
      scenario_path.empty() ? gmp::parse_scenario(gmp::kMmsScenario) : gmp::load_scenario(scenario_path);
  const auto rows = gmp::mms_study(base, levels);
  std::printf("%6s %24s %10s %6s %12s %12s\n", "n", "l2_error", "ratio", "outer", "div_inf", "mom_resid");
  bool ok = true;
  for (const auto& r : rows) {
    std::printf("%6d %24s %10.4f %6d %12.3e %12.3e\n", r.n, num(r.error).c_str(), r.ratio, r.outer_iterations,
                r.divergence_inf, r.momentum_residual);
    ok = ok && r.divergence_inf <= base.tol.tau_div && r.momentum_residual <= base.tol.tau_solve;
  }
  return ok ? kOk : kViolation;
}

int cmd_refine(const std::string& path, const std::string& levels_text) {
  const gmp::Scenario base = gmp::load_scenario(path);
  const auto levels = gmp::parse_levels(levels_text);
  const auto rows = gmp::refine_study(base, levels);
  std::printf("%5s %5s %6s %14s %7s %14s %7s %12s %12s %12s %12s\n", "nx", "ny", "steps", "renorm_L1", "ratio",
              "mixed_area", "ratio", "weak_rho", "weak_nu", "weak_mom", "mass_rel");
  bool ok = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    auto ratio = [&](double a, double b) { return k == 0 || b <= 0.0 ? 0.0 : a / b; };
    const double rr = k ? ratio(rows[k - 1].renormalization_defect, r.renormalization_defect) : 0.0;
    const double mr = k ? ratio(rows[k - 1].mixed_area, r.mixed_area) : 0.0;
    std::printf("%5d %5d %6d %14.6e %7.3f %14.6e %7.3f %12.4e %12.4e %12.4e %12.3e\n", r.nx, r.ny, r.steps,
                r.renormalization_defect, rr, r.mixed_area, mr, r.weak_rho, r.weak_nu, r.weak_momentum,
                r.mass_residual);
    ok = ok && r.complete && r.mass_residual <= 1e-10;
  }
  return ok ? kOk : kViolation;
}

int cmd_plot(const std::string& path, const std::string& field, const std::string& out) {
  const gmp::SnapshotTable t = gmp::read_snapshot(path);
  const auto values = t.column(field);
  if (values.empty()) {
    std::cout << "(empty snapshot)\n";
    return kOk;
  }
  std::vector<double> grid(static_cast<std::size_t>(t.nx) * t.ny, 0.0);
  for (std::size_t k = 0; k < t.rows.size(); ++k)
    grid[static_cast<std::size_t>(t.rows[k].i + t.rows[k].j * t.nx)] = values[k];
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it, span = hi > lo ? hi - lo : 1.0;
  if (!out.empty()) {
    std::string pgm = "P2\n# " + field + " in [" + num(lo) + ", " + num(hi) + "]\n" + std::to_string(t.nx) + " " +
                      std::to_string(t.ny) + "\n255\n";
    for (int j = t.ny - 1; j >= 0; --j) {
      for (int i = 0; i < t.nx; ++i) {
        const int level = static_cast<int>(std::lround(255.0 * (grid[i + j * t.nx] - lo) / span));
        pgm += std::to_string(level) + (i + 1 < t.nx ? " " : "\n");
      }
    }
    gmp::write_text(out, pgm);
    std::cout << "wrote " << out << "\n";
    return kOk;
  }
  static const char ramp[] = " .:-=+*#%@";
  std::cout << field << " in [" << num(lo) << ", " << num(hi) << "], " << t.nx << "x" << t.ny << "\n";
  for (int j = t.ny - 1; j >= 0; --j) {
    std::string line;
    for (int i = 0; i < t.nx; ++i) {
      const int k = static_cast<int>(std::floor(9.999 * (grid[i + j * t.nx] - lo) / span));
      line += ramp[std::clamp(k, 0, 9)];
    }
    std::cout << line << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Muskat problem simulator"};
  app.require_subcommand(1);

  std::string scenario, out, mode, levels = "32,64,128", field = "rho", snapshot, mms_scenario;

  auto* run = app.add_subcommand("run", "Run a scenario and write snapshots, traces and a report");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("--out", out, "Output directory (default: $GMP_OUT_DIR or ./out)");
  run->add_option("--mode", mode, "Override the scenario mode")->check(CLI::IsMember({"march", "picard"}));

  auto* check = app.add_subcommand("check", "Parse and validate a scenario");
  check->add_option("scenario", scenario, "Scenario file")->required();

  auto* mms = app.add_subcommand("mms", "Manufactured-solution convergence study");
  mms->add_option("--levels", levels, "Comma-separated grid sizes");
  mms->add_option("--scenario", mms_scenario, "Manufactured scenario (default: built in)");

  auto* refine = app.add_subcommand("refine", "Renormalization, mixing and weak-form refinement study");
  refine->add_option("scenario", scenario, "Scenario file")->required();
  refine->add_option("--levels", levels, "Comma-separated values of nx")->required();

  auto* plot = app.add_subcommand("plot", "Render a snapshot field as text or PGM");
  plot->add_option("snapshot", snapshot, "Snapshot cell table")->required();
  plot->add_option("--field", field, "rho, nu or p")->check(CLI::IsMember({"rho", "nu", "p"}));
  plot->add_option("--out", out, "Write a PGM image instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(scenario, out, mode);
    if (*check) return cmd_check(scenario);
    if (*mms) return cmd_mms(levels, mms_scenario);
    if (*refine) return cmd_refine(scenario, levels);
    if (*plot) return cmd_plot(snapshot, field, out);
  } catch (const gmp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kUsage;
}
