#include "gmp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "gmp/output.hpp"

namespace gmp {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Value of one `key = value` line with its position for error reporting.
struct Entry {
  std::string value;
  int line = 0;
  int column = 0;  // 1-based column of the first value character
};

[[noreturn]] void fail_at(const Entry& e, const std::string& msg) { throw ParseError(msg, e.line, e.column); }

double to_number(const Entry& e, std::string_view text) {
  const std::string tok(trim(text));
  if (tok.empty()) fail_at(e, "expected a number");
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || !std::isfinite(v)) fail_at(e, "malformed number '" + tok + "'");
  return v;
}

std::vector<double> to_numbers(const Entry& e, std::size_t count) {
  std::vector<double> out;
  std::string_view rest = e.value;
  for (;;) {
    const auto comma = rest.find(',');
    out.push_back(to_number(e, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (out.size() != count)
    fail_at(e, "expected " + std::to_string(count) + " comma-separated numbers, got " + std::to_string(out.size()));
  return out;
}

int to_int(const Entry& e) {
  const double v = to_number(e, e.value);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail_at(e, "expected an integer");
  return static_cast<int>(v);
}

Expression to_expr(const Entry& e) { return Expression::parse(e.value, e.line, e.column - 1); }

std::string join(std::initializer_list<double> xs) {
  std::string s;
  for (double x : xs) {
    if (!s.empty()) s += ", ";
    s += format_number(x);
  }
  return s;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name",      "origin",       "extent",     "nx",          "ny",
      "T",         "cfl",          "dt_max",     "rho0",        "nu0",
      "rho_b",     "nu_b",         "bx",         "by",          "gx",
      "gy",        "h0",           "m",          "rho_bounds",  "nu_bounds",
      "phase1",    "phase2",       "mix_epsilon", "tau_solve",  "tau_div",
      "tau_comp",  "tau_mp",       "tau_n",      "tol_P",       "output_every",
      "mode",      "seed",         "q",          "s",           "picard_max_iter",
      "relaxation", "picard_dt_margin", "viscosity_averaging", "velocity_solver"};
  return keys;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  std::map<std::string, Entry> entries;
  bool have_header = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = raw.find('#');
    std::string_view line = hash == std::string_view::npos ? raw : raw.substr(0, hash);
    if (trim(line).empty()) continue;
    if (!have_header) {
      if (trim(line) != kScenarioHeader)
        throw ParseError("expected header '" + std::string(kScenarioHeader) + "'", line_no, 1);
      have_header = true;
      continue;
    }
    const auto eq = line.find('=');
    const auto key_start = line.find_first_not_of(" \t");
    if (eq == std::string_view::npos)
      throw ParseError("expected 'key = value'", line_no, static_cast<int>(key_start) + 1);
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ParseError("missing key before '='", line_no, static_cast<int>(eq) + 1);
    if (!known_keys().count(key))
      throw ParseError("unknown key '" + key + "'", line_no, static_cast<int>(key_start) + 1);
    if (entries.count(key)) throw ParseError("duplicate key '" + key + "'", line_no, static_cast<int>(key_start) + 1);
    std::string_view value = line.substr(eq + 1);
    const auto vstart = value.find_first_not_of(" \t");
    const int column = static_cast<int>(eq + 1 + (vstart == std::string_view::npos ? 0 : vstart)) + 1;
    const std::string trimmed(trim(value));
    if (trimmed.empty()) throw ParseError("empty value for key '" + key + "'", line_no, column);
    entries[key] = Entry{trimmed, line_no, column};
  }
  if (!have_header) throw ParseError("empty scenario: missing header", line_no, 1);

  for (const char* required : {"extent", "nx", "ny", "T", "rho0", "nu0", "rho_bounds", "nu_bounds"})
    if (!entries.count(required))
      throw ParseError("missing required key '" + std::string(required) + "'", line_no, 1);

  auto has = [&](const char* k) { return entries.count(k) > 0; };
  auto at = [&](const char* k) -> const Entry& { return entries.at(k); };

  Scenario s;
  if (has("name")) s.name = at("name").value;
  if (has("origin")) {
    const auto v = to_numbers(at("origin"), 2);
    s.origin = {v[0], v[1]};
  }
  {
    const auto v = to_numbers(at("extent"), 2);
    s.extent = {v[0], v[1]};
    if (!(v[0] > 0.0 && v[1] > 0.0)) fail_at(at("extent"), "extent must be positive");
  }
  s.nx = to_int(at("nx"));
  s.ny = to_int(at("ny"));
  if (s.nx < 2) fail_at(at("nx"), "nx must be at least 2");
  if (s.ny < 2) fail_at(at("ny"), "ny must be at least 2");
  s.T = to_number(at("T"), at("T").value);
  if (s.T < 0.0) fail_at(at("T"), "T must be nonnegative");
  if (has("cfl")) {
    s.cfl = to_number(at("cfl"), at("cfl").value);
    if (!(s.cfl > 0.0 && s.cfl <= 1.0)) fail_at(at("cfl"), "cfl must lie in (0, 1]");
  }
  s.dt_max = s.T > 0.0 ? s.T / 100.0 : 1.0;
  if (has("dt_max")) {
    s.dt_max = to_number(at("dt_max"), at("dt_max").value);
    if (!(s.dt_max > 0.0)) fail_at(at("dt_max"), "dt_max must be positive");
  }

  s.rho0 = to_expr(at("rho0"));
  s.nu0 = to_expr(at("nu0"));
  s.rho_b = has("rho_b") ? to_expr(at("rho_b")) : s.rho0;
  s.nu_b = has("nu_b") ? to_expr(at("nu_b")) : s.nu0;
  s.bx = has("bx") ? to_expr(at("bx")) : Expression::constant(0.0);
  s.by = has("by") ? to_expr(at("by")) : Expression::constant(0.0);
  s.gx = has("gx") ? to_expr(at("gx")) : Expression::constant(0.0);
  s.gy = has("gy") ? to_expr(at("gy")) : Expression::constant(0.0);
  s.h0 = has("h0") ? to_expr(at("h0")) : Expression::constant(0.0);
  if (has("m")) s.m = to_number(at("m"), at("m").value);

  {
    const auto r = to_numbers(at("rho_bounds"), 2);
    const auto n = to_numbers(at("nu_bounds"), 2);
    s.bounds = {r[0], r[1], n[0], n[1]};
    try {
      s.bounds.validate();
    } catch (const ConfigError& err) {
      fail_at(at("rho_bounds"), err.what());
    }
  }
  if (has("phase1") != has("phase2"))
    throw ParseError("phase1 and phase2 must be given together", has("phase1") ? at("phase1").line : at("phase2").line, 1);
  if (has("phase1")) {
    PhaseSpec ps;
    for (int i = 0; i < 2; ++i) {
      const auto v = to_numbers(at(i == 0 ? "phase1" : "phase2"), 4);
      ps.phase[i] = {v[0], v[1], v[2], v[3]};
    }
    s.phases = ps;
  }
  if (has("mix_epsilon")) s.mix_epsilon = to_number(at("mix_epsilon"), at("mix_epsilon").value);

  auto tol = [&](const char* key, double& field) {
    if (!has(key)) return;
    field = to_number(at(key), at(key).value);
    if (!(field > 0.0)) fail_at(at(key), std::string(key) + " must be positive");
  };
  tol("tau_solve", s.tol.tau_solve);
  tol("tau_div", s.tol.tau_div);
  tol("tau_comp", s.tol.tau_comp);
  tol("tau_mp", s.tol.tau_mp);
  tol("tau_n", s.tol.tau_n);
  tol("tol_P", s.tol.tol_P);

  if (has("output_every")) {
    s.output_every = to_int(at("output_every"));
    if (s.output_every < 1) fail_at(at("output_every"), "output_every must be at least 1");
  }
  if (has("mode")) {
    const auto& v = at("mode").value;
    if (v == "march")
      s.mode = RunMode::March;
    else if (v == "picard")
      s.mode = RunMode::Picard;
    else
      fail_at(at("mode"), "mode must be 'march' or 'picard'");
  }
  if (has("seed")) {
    const double v = to_number(at("seed"), at("seed").value);
    if (v < 0 || v != std::floor(v)) fail_at(at("seed"), "seed must be a nonnegative integer");
    s.seed = static_cast<std::uint64_t>(v);
  }
  if (has("q")) s.q = to_number(at("q"), at("q").value);
  if (has("s")) s.s = to_number(at("s"), at("s").value);
  if (has("picard_max_iter")) {
    s.picard_max_iter = to_int(at("picard_max_iter"));
    if (s.picard_max_iter < 1) fail_at(at("picard_max_iter"), "picard_max_iter must be at least 1");
  }
  if (has("relaxation")) {
    s.relaxation = to_number(at("relaxation"), at("relaxation").value);
    if (!(s.relaxation > 0.0 && s.relaxation <= 1.0)) fail_at(at("relaxation"), "relaxation must lie in (0, 1]");
  }
  if (has("picard_dt_margin")) {
    s.picard_dt_margin = to_number(at("picard_dt_margin"), at("picard_dt_margin").value);
    if (!(s.picard_dt_margin >= 1.0)) fail_at(at("picard_dt_margin"), "picard_dt_margin must be at least 1");
  }
  if (has("viscosity_averaging")) {
    const auto& v = at("viscosity_averaging").value;
    if (v == "arithmetic")
      s.averaging = ViscosityAveraging::Arithmetic;
    else if (v == "harmonic")
      s.averaging = ViscosityAveraging::Harmonic;
    else
      fail_at(at("viscosity_averaging"), "viscosity_averaging must be 'arithmetic' or 'harmonic'");
  }
  if (has("velocity_solver")) {
    const auto& v = at("velocity_solver").value;
    if (v == "cholesky")
      s.velocity_solver = VelocityBlockSolver::Cholesky;
    else if (v == "pcg")
      s.velocity_solver = VelocityBlockSolver::Pcg;
    else
      fail_at(at("velocity_solver"), "velocity_solver must be 'cholesky' or 'pcg'");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string print_scenario(const Scenario& s) {
  std::ostringstream o;
  o << kScenarioHeader << "\n";
  o << "name = " << s.name << "\n";
  o << "origin = " << join({s.origin.x, s.origin.y}) << "\n";
  o << "extent = " << join({s.extent.x, s.extent.y}) << "\n";
  o << "nx = " << s.nx << "\n";
  o << "ny = " << s.ny << "\n";
  o << "T = " << format_number(s.T) << "\n";
  o << "cfl = " << format_number(s.cfl) << "\n";
  o << "dt_max = " << format_number(s.dt_max) << "\n";
  o << "rho0 = " << s.rho0.text() << "\n";
  o << "nu0 = " << s.nu0.text() << "\n";
  o << "rho_b = " << s.rho_b.text() << "\n";
  o << "nu_b = " << s.nu_b.text() << "\n";
  o << "bx = " << s.bx.text() << "\n";
  o << "by = " << s.by.text() << "\n";
  o << "gx = " << s.gx.text() << "\n";
  o << "gy = " << s.gy.text() << "\n";
  o << "h0 = " << s.h0.text() << "\n";
  o << "m = " << format_number(s.m) << "\n";
  o << "rho_bounds = " << join({s.bounds.rho_min, s.bounds.rho_max}) << "\n";
  o << "nu_bounds = " << join({s.bounds.nu_min, s.bounds.nu_max}) << "\n";
  if (s.phases) {
    for (int i = 0; i < 2; ++i) {
      const auto& p = s.phases->phase[i];
      o << "phase" << (i + 1) << " = " << join({p.rho_lo, p.rho_hi, p.nu_lo, p.nu_hi}) << "\n";
    }
  }
  o << "mix_epsilon = " << format_number(s.mix_epsilon) << "\n";
  o << "tau_solve = " << format_number(s.tol.tau_solve) << "\n";
  o << "tau_div = " << format_number(s.tol.tau_div) << "\n";
  o << "tau_comp = " << format_number(s.tol.tau_comp) << "\n";
  o << "tau_mp = " << format_number(s.tol.tau_mp) << "\n";
  o << "tau_n = " << format_number(s.tol.tau_n) << "\n";
  o << "tol_P = " << format_number(s.tol.tol_P) << "\n";
  o << "output_every = " << s.output_every << "\n";
  o << "mode = " << (s.mode == RunMode::March ? "march" : "picard") << "\n";
  o << "seed = " << s.seed << "\n";
  o << "q = " << format_number(s.q) << "\n";
  o << "s = " << format_number(s.s) << "\n";
  o << "picard_max_iter = " << s.picard_max_iter << "\n";
  o << "relaxation = " << format_number(s.relaxation) << "\n";
  o << "picard_dt_margin = " << format_number(s.picard_dt_margin) << "\n";
  o << "viscosity_averaging = " << (s.averaging == ViscosityAveraging::Arithmetic ? "arithmetic" : "harmonic")
    << "\n";
  o << "velocity_solver = " << (s.velocity_solver == VelocityBlockSolver::Cholesky ? "cholesky" : "pcg") << "\n";
  return o.str();
}

StaggeredGrid make_grid(const Scenario& s) { return StaggeredGrid::build(s.origin, s.extent, s.nx, s.ny); }

BoundaryData boundary_data(const Scenario& s) {
  BoundaryData d;
  d.b = [bx = s.bx, by = s.by](double t, Vec2 p) { return Vec2{bx(t, p), by(t, p)}; };
  d.g = [gx = s.gx, gy = s.gy](double t, Vec2 p) { return Vec2{gx(t, p), gy(t, p)}; };
  d.rho_b = [e = s.rho_b](double t, Vec2 p) { return e(t, p); };
  d.nu_b = [e = s.nu_b](double t, Vec2 p) { return e(t, p); };
  return d;
}

DragModel drag_model(const Scenario& s) {
  DragModel d;
  d.h0 = [e = s.h0](double t, Vec2 p) { return e(t, p); };
  d.m = s.m;
  return d;
}

MixtureState initial_state(const Scenario& s, const StaggeredGrid& grid) {
  MixtureState st;
  st.bounds = s.bounds;
  st.rho = grid.make_cell_field();
  st.nu = grid.make_cell_field();
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      const Vec2 c = grid.cell_center(i, j);
      st.rho[grid.cell(i, j)] = s.rho0(0.0, c);
      st.nu[grid.cell(i, j)] = s.nu0(0.0, c);
    }
  return st;
}

BrinkmanOptions brinkman_options(const Scenario& s) {
  BrinkmanOptions o;
  o.tau_solve = s.tol.tau_solve;
  o.tau_div = s.tol.tau_div;
  o.tau_comp_factor = s.tol.tau_comp;
  o.averaging = s.averaging;
  o.velocity_solver = s.velocity_solver;
  return o;
}

std::string output_directory(const std::string& fallback) {
  if (const char* env = std::getenv("GMP_OUT_DIR"); env && *env) return env;
  return fallback;
}

bool ValidationReport::has(std::string_view label) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.label == label; });
}

ValidationReport validate(const Scenario& s, const StaggeredGrid& grid) {
  ValidationReport report;
  const BoundaryData data = boundary_data(s);
  const double tol = s.tol.tau_mp;

  std::vector<double> times;
  if (s.T > 0.0)
    for (int k = 0; k <= 10; ++k) times.push_back(s.T * k / 10.0);
  else
    times.push_back(0.0);

  auto listing = [](const std::vector<int>& ids) {
    std::ostringstream os;
    for (std::size_t k = 0; k < ids.size() && k < 8; ++k) os << (k ? " " : "") << ids[k];
    if (ids.size() > 8) os << " ...";
    return os.str();
  };

  // reg2: initial data in the admissible box.
  std::vector<int> bad_rho0, bad_nu0, nonfinite;
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      const Vec2 c = grid.cell_center(i, j);
      const double r = s.rho0(0.0, c), n = s.nu0(0.0, c);
      if (!std::isfinite(r) || !std::isfinite(n)) nonfinite.push_back(grid.cell(i, j));
      if (!(r >= s.bounds.rho_min - tol && r <= s.bounds.rho_max + tol)) bad_rho0.push_back(grid.cell(i, j));
      if (!(n >= s.bounds.nu_min - tol && n <= s.bounds.nu_max + tol)) bad_nu0.push_back(grid.cell(i, j));
    }
  if (!bad_rho0.empty())
    report.violations.push_back({"reg2", "rho0 outside [" + format_number(s.bounds.rho_min) + ", " +
                                             format_number(s.bounds.rho_max) + "] at cells " + listing(bad_rho0)});
  if (!bad_nu0.empty())
    report.violations.push_back({"reg2", "nu0 outside [" + format_number(s.bounds.nu_min) + ", " +
                                             format_number(s.bounds.nu_max) + "] at cells " + listing(bad_nu0)});
  if (!nonfinite.empty())
    report.violations.push_back({"reg2", "initial data not finite at cells " + listing(nonfinite)});

  // reg2 on inflow faces, compatibility, and reg3 on the drag scale.
  std::set<int> bad_rhob, bad_nub, bad_h0, bad_g;
  double worst_flux = 0.0, worst_tau = 0.0;
  for (double t : times) {
    const auto part = classify_boundary(grid, data.b, t, -1.0);
    double bmax = 0.0;
    for (const auto& f : grid.boundary_faces()) {
      const Vec2 b = data.b(t, f.center);
      bmax = std::max({bmax, std::abs(b.x), std::abs(b.y)});
    }
    const auto& faces = grid.boundary_faces();
    for (std::size_t k = 0; k < faces.size(); ++k) {
      if (part.normal_velocity[k] >= -s.tol.tau_n * bmax) continue;
      const double r = data.rho_b(t, faces[k].center), n = data.nu_b(t, faces[k].center);
      if (!(r >= s.bounds.rho_min - tol && r <= s.bounds.rho_max + tol)) bad_rhob.insert(faces[k].id);
      if (!(n >= s.bounds.nu_min - tol && n <= s.bounds.nu_max + tol)) bad_nub.insert(faces[k].id);
    }
    const double flux = net_boundary_flux(grid, data.b, t);
    const double tau = s.tol.tau_comp * grid.perimeter() * bmax;
    if (std::abs(flux) > tau && std::abs(flux) > std::abs(worst_flux)) {
      worst_flux = flux;
      worst_tau = tau;
    }
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) {
        const Vec2 c = grid.cell_center(i, j);
        const double h = s.h0(t, c);
        if (!(h >= 0.0) || !std::isfinite(h)) bad_h0.insert(grid.cell(i, j));
        const Vec2 g = data.g(t, c);
        if (!std::isfinite(g.x) || !std::isfinite(g.y)) bad_g.insert(grid.cell(i, j));
      }
  }
  auto to_vec = [](const std::set<int>& s) { return std::vector<int>(s.begin(), s.end()); };
  if (!bad_rhob.empty())
    report.violations.push_back({"reg2", "rho_b outside [" + format_number(s.bounds.rho_min) + ", " +
                                             format_number(s.bounds.rho_max) + "] on inflow faces " +
                                             listing(to_vec(bad_rhob))});
  if (!bad_nub.empty())
    report.violations.push_back({"reg2", "nu_b outside [" + format_number(s.bounds.nu_min) + ", " +
                                             format_number(s.bounds.nu_max) + "] on inflow faces " +
                                             listing(to_vec(bad_nub))});
  if (!bad_g.empty()) report.violations.push_back({"reg2", "body force not finite at cells " + listing(to_vec(bad_g))});
  if (!(s.q > 1.0)) report.violations.push_back({"reg2", "integrability exponent q must exceed 1"});
  if (worst_flux != 0.0)
    report.violations.push_back({"compatibility", "net boundary flux " + format_number(worst_flux) +
                                                      " exceeds tau_comp = " + format_number(worst_tau)});
  if (!bad_h0.empty())
    report.violations.push_back({"reg3", "h0 negative or not finite at cells " + listing(to_vec(bad_h0))});
  if (!(s.m >= 0.0)) report.violations.push_back({"reg3", "drag exponent m must be nonnegative"});
  if (!(s.s > 1.0)) report.violations.push_back({"reg3", "integrability exponent s must exceed 1"});

  if (s.phases) {
    bool ordered = true;
    try {
      s.phases->validate();
    } catch (const ConfigError& e) {
      ordered = false;
      report.violations.push_back({"reg4", e.what()});
    }
    if (ordered) {
      auto in_phase = [&](double r, double n) {
        for (const auto& p : s.phases->phase)
          if (r >= p.rho_lo - tol && r <= p.rho_hi + tol && n >= p.nu_lo - tol && n <= p.nu_hi + tol) return true;
        return false;
      };
      std::vector<int> bad_cells;
      for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
          const Vec2 c = grid.cell_center(i, j);
          if (!in_phase(s.rho0(0.0, c), s.nu0(0.0, c))) bad_cells.push_back(grid.cell(i, j));
        }
      if (!bad_cells.empty())
        report.violations.push_back({"reg4", "initial data in neither phase at cells " + listing(bad_cells)});
      std::set<int> bad_faces;
      for (double t : times) {
        const auto part = classify_boundary(grid, data.b, t, -1.0);
        const auto& faces = grid.boundary_faces();
        for (std::size_t k = 0; k < faces.size(); ++k) {
          if (part.zone[k] != Zone::Inflow) continue;
          if (!in_phase(data.rho_b(t, faces[k].center), data.nu_b(t, faces[k].center))) bad_faces.insert(faces[k].id);
        }
      }
      if (!bad_faces.empty())
        report.violations.push_back({"reg4", "inflow data in neither phase on faces " + listing(to_vec(bad_faces))});
    }
  }
  return report;
}

}  // namespace gmp
