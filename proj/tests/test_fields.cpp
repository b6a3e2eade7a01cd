#include <doctest.h>

#include <random>

#include "gmp/brinkman.hpp"
#include "gmp/fields.hpp"
#include "helpers.hpp"

using namespace gmp;
using testing::full_velocity;
using testing::unit_grid;

namespace {

MixtureState state_of(const StaggeredGrid& g, double rho, double nu) {
  MixtureState s;
  s.rho = g.make_cell_field(rho);
  s.nu = g.make_cell_field(nu);
  s.bounds = {0.5, 2.0, 0.5, 3.0};
  return s;
}

}  // namespace

TEST_CASE("mixture viscosity examples") {
  const StaggeredGrid g = unit_grid(4);
  for (double m : mixture_viscosity(state_of(g, 1, 1))) CHECK(m == 1.0);
  for (double m : mixture_viscosity(state_of(g, 2, 0.5))) CHECK(m == 1.0);

  MixtureState s = state_of(g, 1, 1);
  for (int c = 0; c < g.cell_count(); c += 2) {
    s.rho[c] = 2;
    s.nu[c] = 3;
  }
  for (double m : mixture_viscosity(s)) CHECK((m == 1.0 || m == 6.0));
}

TEST_CASE("mixture viscosity is bilinear pointwise") {
  const StaggeredGrid g = unit_grid(6);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 2);
  MixtureState s = state_of(g, 1, 1);
  for (auto& x : s.rho) x = u(rng);
  for (auto& x : s.nu) x = u(rng);
  const CellField base = mixture_viscosity(s);
  MixtureState scaled = s;
  for (auto& x : scaled.rho) x *= 4.0;
  const CellField m = mixture_viscosity(scaled);
  for (std::size_t c = 0; c < m.size(); ++c) CHECK(m[c] == 4.0 * base[c]);
}

TEST_CASE("norms") {
  const StaggeredGrid g = unit_grid(8);
  CHECK(l2_norm(g.make_cell_field(-3.0), g) == doctest::Approx(3.0));
  CHECK(l2_norm(g.make_cell_field(), g) == 0.0);
  CHECK(linf_norm(g.make_cell_field()) == 0.0);
  CHECK(linf_norm(g.make_face_field()) == 0.0);
  CHECK(h1_seminorm(full_velocity(g, [](Vec2) { return Vec2{0, 0}; }), g) == 0.0);
  // v = (y, 0): |Dv|^2 = 1/2 everywhere.
  CHECK(h1_seminorm(full_velocity(g, [](Vec2 x) { return Vec2{x.y, 0}; }), g) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));

  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 20; ++trial) {
    CellField a = g.make_cell_field(), b = g.make_cell_field(), sum = g.make_cell_field();
    for (auto& x : a) x = n01(rng);
    for (auto& x : b) x = n01(rng);
    for (std::size_t c = 0; c < a.size(); ++c) sum[c] = a[c] + b[c];
    CHECK(l2_norm(sum, g) <= l2_norm(a, g) + l2_norm(b, g) + 1e-14);
    const double alpha = n01(rng);
    CellField scaled = a;
    for (auto& x : scaled) x *= alpha;
    CHECK(l2_norm(scaled, g) == doctest::Approx(std::abs(alpha) * l2_norm(a, g)).epsilon(1e-14));
  }
}

TEST_CASE("drag model") {
  DragModel d;
  d.h0 = [](double, Vec2 x) { return 2.0 + x.x; };
  d.m = 0.0;
  for (double r : {0.1, 1.0, 7.0}) CHECK(d(0.0, {0.5, 0.5}, r) == 2.5);
  d.m = 1.5;
  // Growth bound and continuity in r.
  for (double r = 0.5; r < 4.0; r += 0.25) {
    CHECK(d(0.0, {1, 0}, r) <= 3.0 * std::pow(r, 1.5) + 1e-15);
    CHECK(std::abs(d(0.0, {1, 0}, r + 1e-9) - d(0.0, {1, 0}, r)) < 1e-7);
  }
  DragModel none;
  CHECK(none(0.0, {0, 0}, 5.0) == 0.0);
}

TEST_CASE("admissible bounds and phases validate") {
  CHECK_NOTHROW(AdmissibleBounds{1, 2, 1, 3}.validate());
  CHECK_THROWS_AS(AdmissibleBounds({2, 1, 1, 3}).validate(), ConfigError);
  CHECK_THROWS_AS(AdmissibleBounds({0, 1, 1, 3}).validate(), ConfigError);
  PhaseSpec p;
  p.phase[0] = {1, 1, 1, 1};
  p.phase[1] = {2, 2, 3, 3};
  CHECK_NOTHROW(p.validate());
  p.phase[1].rho_lo = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("membership in the admissible set") {
  const StaggeredGrid g = unit_grid(3);
  MixtureState s = state_of(g, 1, 1);
  CHECK(s.in_bounds(0.0));
  s.rho[4] = 2.0 + 1e-6;
  CHECK_FALSE(s.in_bounds(1e-9));
  CHECK(s.in_bounds(1e-5));
}
