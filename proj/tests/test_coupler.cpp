#include <doctest.h>

#include <algorithm>
#include <random>

#include "gmp/coupler.hpp"
#include "helpers.hpp"

using namespace gmp;
using testing::scenario_text;

namespace {

double center_of_mass_y(const StaggeredGrid& g, const CellField& rho) {
  double m = 0.0, my = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      m += rho[g.cell(i, j)];
      my += rho[g.cell(i, j)] * g.cell_center(i, j).y;
    }
  return my / m;
}

Scenario column(int n, double T) {
  Scenario s = parse_scenario(scenario_text(
      "rho0 = 1 + step(y - 0.5 - 0.05*cos(2*pi*x))\nnu0 = 1 + 2*step(y - 0.5 - 0.05*cos(2*pi*x))\n"
      "gy = -1\nh0 = 1\ndt_max = 0.05\n",
      n));
  s.T = T;
  return s;
}

}  // namespace

TEST_CASE("homogeneous fluid at rest stays at rest") {
  Scenario s = parse_scenario(scenario_text("h0 = 1\ndt_max = 0.1\n", 8));
  const StaggeredGrid g = make_grid(s);
  const MixtureState init = initial_state(s, g);
  const Trajectory tr = run_march(s);
  REQUIRE(tr.complete);
  CHECK(tr.frames.back().t == s.T);
  for (const auto& f : tr.frames) {
    CHECK(f.state.rho == init.rho);
    CHECK(f.state.nu == init.nu);
    CHECK(linf_norm(f.vp.velocity.faces) == 0.0);
  }
}

TEST_CASE("homogeneous fluid under gravity keeps its constant state") {
  Scenario s = parse_scenario(scenario_text("h0 = 1\ngy = -9.81\ngx = 0.3\ndt_max = 0.1\n", 8));
  const Trajectory tr = run_march(s);
  REQUIRE(tr.complete);
  for (const auto& f : tr.frames) {
    for (double r : f.state.rho) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
    for (double r : f.state.nu) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
    // Gravity is balanced by a hydrostatic pressure.
    CHECK(linf_norm(f.vp.velocity.faces) < 1e-8);
  }
}

TEST_CASE("gravity column settles and conserves mass") {
  const Scenario s = column(12, 0.5);
  const StaggeredGrid g = make_grid(s);
  MarchOptions opt;
  opt.store_every = 1;
  const Trajectory tr = run_march(s, opt);
  REQUIRE(tr.complete);
  CHECK(center_of_mass_y(g, tr.frames.back().state.rho) < center_of_mass_y(g, tr.frames.front().state.rho));
  const MassBalance m = mass_ledger(g, tr.frames.front().state.rho, tr.frames.back().state.rho, tr.rho_out, tr.rho_in);
  CHECK(m.residual <= 1e-12 * m.initial);
  CHECK(tr.rho_out.entry_count() == 0u);
  for (const auto& f : tr.frames) CHECK(f.state.in_bounds(s.tol.tau_mp));
}

TEST_CASE("zero final time yields only the initial state") {
  const Scenario s = column(8, 0.0);
  const Trajectory tr = run_march(s);
  REQUIRE(tr.complete);
  REQUIRE(tr.frames.size() == 1);
  CHECK(tr.frames[0].t == 0.0);
  CHECK(tr.steps.empty());
  CHECK(tr.frames[0].state.rho == initial_state(s, make_grid(s)).rho);
}

TEST_CASE("picard on a homogeneous fluid converges at once") {
  Scenario s = parse_scenario(scenario_text("h0 = 1\ndt_max = 0.1\ngy = -1\n", 8));
  const SchauderResult r = schauder_solve(s);
  CHECK(r.history.converged);
  REQUIRE_FALSE(r.history.rows.empty());
  CHECK(r.history.rows.front().distance <= 1e-14);
  CHECK(r.history.k_final == 1);

  // The constant state is a fixed point of the map.
  const StaggeredGrid g = make_grid(s);
  const std::vector<MixtureState> guess(r.times.size(), initial_state(s, g));
  const Trajectory tr = picard_map(s, r.times, guess);
  std::vector<MixtureState> image;
  for (const auto& f : tr.frames) image.push_back(f.state);
  CHECK(trajectory_distance(g, r.times, image, guess) <= 1e-14);
}

TEST_CASE("picard map rejects inadmissible guesses") {
  const Scenario s = column(8, 0.5);
  const StaggeredGrid g = make_grid(s);
  const std::vector<double> times = picard_time_grid(s);
  std::vector<MixtureState> guess(times.size(), initial_state(s, g));
  guess[1].rho[3] = 5.0;
  CHECK_THROWS_AS(picard_map(s, times, guess), DataError);
}

TEST_CASE("picard map keeps states in the admissible set") {
  const Scenario s = column(10, 0.5);
  const StaggeredGrid g = make_grid(s);
  const std::vector<double> times = picard_time_grid(s);
  REQUIRE(times.front() == 0.0);
  REQUIRE(times.back() == doctest::Approx(s.T));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ur(1, 2), un(1, 3);
  std::vector<MixtureState> guess(times.size(), initial_state(s, g));
  for (auto& st : guess) {
    for (auto& x : st.rho) x = ur(rng);
    for (auto& x : st.nu) x = un(rng);
  }
  const Trajectory tr = picard_map(s, times, guess);
  REQUIRE(tr.frames.size() == times.size());
  for (const auto& f : tr.frames) CHECK(f.state.in_bounds(s.tol.tau_mp));
}

TEST_CASE("unit relaxation reproduces the plain iteration bitwise") {
  const Scenario s = column(8, 0.3);
  SchauderOptions a, b;
  a.max_iter = b.max_iter = 3;
  b.relaxation = 1.0;
  const SchauderResult ra = schauder_solve(s, a), rb = schauder_solve(s, b);
  REQUIRE(ra.history.rows.size() == rb.history.rows.size());
  for (std::size_t k = 0; k < ra.history.rows.size(); ++k)
    CHECK(ra.history.rows[k].distance == rb.history.rows[k].distance);
  CHECK(ra.trajectory.frames.back().state.rho == rb.trajectory.frames.back().state.rho);
}

TEST_CASE("picard iterates stay bounded in H1") {
  const Scenario s = column(8, 0.3);
  SchauderOptions o;
  o.max_iter = 6;
  o.tol = 0.0;
  const SchauderResult r = schauder_solve(s, o);
  REQUIRE(r.history.rows.size() == 6);
  const double first = r.history.rows.front().max_h1;
  CHECK(first > 0.0);
  for (const auto& row : r.history.rows) CHECK(row.max_h1 <= 2.0 * first);
}

TEST_CASE("state_at interpolates and coarsen averages") {
  Trajectory tr;
  MixtureState a, b;
  a.rho = {1, 2};
  a.nu = {1, 1};
  b.rho = {3, 2};
  b.nu = {3, 1};
  tr.frames.push_back({0.0, a, {}});
  tr.frames.push_back({1.0, b, {}});
  CHECK(state_at(tr, 0.25).rho[0] == doctest::Approx(1.5));
  CHECK(state_at(tr, -1.0).rho[0] == 1.0);
  CHECK(state_at(tr, 2.0).nu[0] == 3.0);

  const StaggeredGrid fine = testing::unit_grid(4);
  CellField f = testing::sample_cells(fine, [](Vec2 x) { return x.x + 2 * x.y; });
  const CellField c = coarsen(fine, f);
  REQUIRE(c.size() == 4u);
  const StaggeredGrid coarse = testing::unit_grid(2);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      const Vec2 x = coarse.cell_center(i, j);
      CHECK(c[coarse.cell(i, j)] == doctest::Approx(x.x + 2 * x.y));
    }
}
