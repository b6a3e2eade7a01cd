#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gmp/output.hpp"
#include "gmp/scenario.hpp"
#include "helpers.hpp"

using namespace gmp;
using testing::scenario_text;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gmp_unit_io";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

ParseError parse_failure(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError("", 0, 0);
}

}  // namespace

TEST_CASE("minimal scenario parses with defaults") {
  const Scenario s = parse_scenario(scenario_text(""));
  CHECK(s.nx == 8);
  CHECK(s.ny == 8);
  CHECK(s.T == 0.5);
  CHECK(s.mode == RunMode::March);
  CHECK(s.cfl == 0.5);
  CHECK_FALSE(s.phases.has_value());
  CHECK(s.bx(0, 0.3, 0.3) == 0.0);
}

TEST_CASE("missing required key is named") {
  const ParseError e = parse_failure("gmp-scenario 1\nnx = 4\nny = 4\nT = 1\nrho0 = 1\nnu0 = 1\n"
                                     "rho_bounds = 1, 1\nnu_bounds = 1, 1\n");
  CHECK(std::string(e.what()).find("extent") != std::string::npos);
}

TEST_CASE("piecewise data through step") {
  const Scenario s = parse_scenario(testing::scenario_text("rho_b = 1 + 0.5*step(y - 0.5)\n"));
  CHECK(s.rho_b(0, 0.0, 0.25) == 1.0);
  CHECK(s.rho_b(0, 0.0, 0.75) == 1.5);
  CHECK(s.rho_b(0, 0.0, 0.5) == 1.5);
}

TEST_CASE("parse errors carry positions") {
  SUBCASE("unknown key") {
    const ParseError e = parse_failure(scenario_text("  colour = 3\n"));
    CHECK(e.line == 10);
    CHECK(e.column == 3);
    CHECK(e.message.find("colour") != std::string::npos);
  }
  SUBCASE("unknown variable") {
    const ParseError e = parse_failure(scenario_text("h0 = 1 + z\n"));
    CHECK(e.line == 10);
    CHECK(e.column > 5);
  }
  SUBCASE("malformed number") {
    const ParseError e = parse_failure(scenario_text("cfl = 0.5x\n"));
    CHECK(e.line == 10);
  }
  SUBCASE("duplicate key") { CHECK(parse_failure(scenario_text("nx = 3\n")).line == 10); }
  SUBCASE("bad header") { CHECK(parse_failure("gmp-scenario 2\n").line == 1); }
}

TEST_CASE("print and parse round-trip") {
  for (std::string name : {"homogeneous", "channel", "gravity_column", "immiscible", "smooth_channel", "mms"}) {
    CAPTURE(name);
    const Scenario a = load_scenario(testing::preset_path(name));
    const std::string text = print_scenario(a);
    const Scenario b = parse_scenario(text);
    CHECK(print_scenario(b) == text);
    CHECK(b.nx == a.nx);
    CHECK(b.T == a.T);
    CHECK(b.rho0(0.1, 0.3, 0.7) == a.rho0(0.1, 0.3, 0.7));
    CHECK(b.bx(0.1, 0.3, 0.7) == a.bx(0.1, 0.3, 0.7));
  }
}

TEST_CASE("validation labels") {
  const Scenario bad = load_scenario(testing::preset_path("reg2_violation"));
  const ValidationReport r = validate(bad, make_grid(bad));
  CHECK(r.has("reg2"));
  CHECK_FALSE(r.ok());

  const Scenario channel = parse_scenario(scenario_text("bx = 1\nrho_b = 1\nnu_b = 1\n"));
  CHECK(validate(channel, make_grid(channel)).ok());

  const Scenario leaky = parse_scenario(scenario_text("bx = x - 0.5\nby = y - 0.5\n"));
  const ValidationReport lr = validate(leaky, make_grid(leaky));
  CHECK(lr.has("compatibility"));
  CHECK(net_boundary_flux(make_grid(leaky), boundary_data(leaky).b, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("snapshot files") {
  const StaggeredGrid g = StaggeredGrid::build({0, 0}, {1, 1}, 2, 2);
  MixtureState s;
  s.rho = {1, 1.25, 1.5, 2};
  s.nu = {1, 2, 2.5, 3};
  VelocityPressure vp;
  vp.p = {0.1, -0.1, 0.3, -0.3};
  vp.velocity.faces = g.make_face_field();
  vp.velocity.faces.u[1] = 0.5;
  const std::string path = scratch("snap.csv");
  write_snapshot(path, g, &s, &vp);
  const SnapshotTable t = read_snapshot(path);
  CHECK(t.rows.size() == 4);
  CHECK(t.nx == 2);
  CHECK(t.ny == 2);
  CHECK(t.column("rho") == s.rho);
  CHECK(t.column("nu") == s.nu);
  CHECK(t.column("p") == vp.p);
  CHECK_THROWS_AS(t.column("q"), ConfigError);
  CHECK(faces_path(path) == scratch("snap_faces.csv"));
  const std::string faces = slurp(faces_path(path));
  CHECK(faces.rfind("component,i,j,x,y,value\n", 0) == 0);
  CHECK(faces.find("u,1,0,0.5,0.25,0.5\n") != std::string::npos);

  const std::string empty = scratch("empty.csv");
  write_snapshot(empty, g, nullptr, nullptr);
  CHECK(slurp(empty) == "i,j,x,y,rho,nu,p\n");
  CHECK(slurp(faces_path(empty)) == "component,i,j,x,y,value\n");
  CHECK(read_snapshot(empty).rows.empty());

  std::ofstream(scratch("junk.csv")) << "not,a,snapshot\n";
  CHECK_THROWS_AS(read_snapshot(scratch("junk.csv")), ConfigError);
}

TEST_CASE("trace file format") {
  TraceRecord r;
  r.append({0.25, 0.125, {{7, 2.0, 0.5}}});
  const std::string path = scratch("trace.csv");
  write_traces(path, r);
  CHECK(slurp(path) == "time,face,value,weight\n0.25,7,2,0.5\n");
  CHECK(r.weighted_total() == 1.0);
}

TEST_CASE("numbers round-trip through their decimal form") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_number(x)) == x);
}
