#include <doctest.h>

#include <algorithm>
#include <random>

#include "gmp/transport.hpp"
#include "helpers.hpp"

using namespace gmp;
using testing::sample_faces;
using testing::unit_grid;

namespace {

/// Discretely divergence-free faces from a stream function at the nodes.
FaceField stream_faces(const StaggeredGrid& g, const std::function<double(Vec2)>& psi) {
  FaceField f = g.make_face_field();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) f.u[g.xface(i, j)] = (psi(g.node(i, j + 1)) - psi(g.node(i, j))) / g.hy();
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) f.v[g.yface(i, j)] = -(psi(g.node(i + 1, j)) - psi(g.node(i, j))) / g.hx();
  return f;
}

/// Partition read off the discrete boundary face values themselves.
BoundaryPartition partition_of(const StaggeredGrid& g, const FaceField& f) {
  auto sampler = [&](double, Vec2 x) {
    const double ex = 1e-9 * g.hx(), ey = 1e-9 * g.hy();
    const Vec2 o = g.origin(), e = g.extent();
    if (std::abs(x.x - o.x) < ex || std::abs(x.x - o.x - e.x) < ex) {
      const int i = std::abs(x.x - o.x) < ex ? 0 : g.nx();
      const int j = static_cast<int>((x.y - o.y) / g.hy());
      return Vec2{f.u[g.xface(i, j)], 0.0};
    }
    const int j = std::abs(x.y - o.y) < ey ? 0 : g.ny();
    const int i = static_cast<int>((x.x - o.x) / g.hx());
    return Vec2{0.0, f.v[g.yface(i, j)]};
  };
  return classify_boundary(g, sampler, 0.0);
}

double total(const CellField& c, const StaggeredGrid& g) {
  double s = 0.0;
  for (double x : c) s += x;
  return s * g.cell_area();
}

double step_weighted(const TraceStep& s) {
  double w = 0.0;
  for (const auto& e : s.entries) w += e.weight * e.value;
  return w;
}

}  // namespace

TEST_CASE("cfl_dt examples") {
  const StaggeredGrid g = StaggeredGrid::build({0, 0}, {1, 1}, 10, 10);
  FaceField v = g.make_face_field();
  v.u[3] = 1.0;
  CHECK(cfl_dt(g, v, 0.5, 9.0) == doctest::Approx(0.05));
  CHECK(cfl_dt(g, g.make_face_field(), 0.5, 9.0) == 9.0);
  v.u[3] = -2.0;
  v.v[7] = 1.0;
  CHECK(cfl_dt(g, v, 1.0, 9.0) == doctest::Approx(0.05));
}

TEST_CASE("constants are transported invariantly") {
  const StaggeredGrid g = unit_grid(12);
  const FaceField v = stream_faces(g, [](Vec2 x) { return std::sin(2 * x.x) * std::cos(3 * x.y) + x.y; });
  const BoundaryPartition p = partition_of(g, v);
  const double dt = 0.9 * monotone_dt(g, v, p);
  const auto r = advect(g, g.make_cell_field(1.75), v, 0.0, dt, [](double, Vec2) { return 1.75; }, p);
  for (double x : r.field) CHECK(x == doctest::Approx(1.75).epsilon(1e-14));
}

TEST_CASE("upwind strip matches the closed-form update") {
  // Uniform v = (1, 0) on a 4x2 strip, a unit pulse in column 1, zero inflow.
  const StaggeredGrid g = StaggeredGrid::build({0, 0}, {1, 0.5}, 4, 2);
  const FaceField v = sample_faces(g, [](Vec2) { return Vec2{1, 0}; });
  const BoundaryPartition p = classify_boundary(g, [](double, Vec2) { return Vec2{1, 0}; }, 0.0);
  CellField rho = g.make_cell_field();
  for (int j = 0; j < 2; ++j) rho[g.cell(1, j)] = 1.0;
  const double cfl = 0.5, dt = cfl * g.hx();
  const auto r = advect(g, rho, v, 0.0, dt, [](double, Vec2) { return 0.0; }, p);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 4; ++i) {
      const double left = i == 0 ? 0.0 : rho[g.cell(i - 1, j)];
      CHECK(r.field[g.cell(i, j)] == doctest::Approx(rho[g.cell(i, j)] - cfl * (rho[g.cell(i, j)] - left)));
    }
  CHECK(r.outflow.entries.size() == 2);
  CHECK(r.inflow.entries.size() == 2);
}

TEST_CASE("rest velocity leaves the field unchanged") {
  const StaggeredGrid g = unit_grid(5);
  CellField rho = g.make_cell_field();
  for (int c = 0; c < g.cell_count(); ++c) rho[c] = 1 + 0.1 * c;
  const BoundaryPartition p = classify_boundary(g, [](double, Vec2) { return Vec2{0, 0}; }, 0.0);
  const auto r = advect(g, rho, g.make_face_field(), 0.0, 0.3, [](double, Vec2) { return 5.0; }, p);
  CHECK(r.field == rho);
  CHECK(r.outflow.entries.empty());
  CHECK(r.inflow.entries.empty());
}

TEST_CASE("oversized steps are rejected with the admissible dt") {
  const StaggeredGrid g = unit_grid(8);
  const FaceField v = sample_faces(g, [](Vec2) { return Vec2{1, 0}; });
  const BoundaryPartition p = classify_boundary(g, [](double, Vec2) { return Vec2{1, 0}; }, 0.0);
  const double bound = monotone_dt(g, v, p);
  CHECK(bound == doctest::Approx(g.hx()));
  try {
    advect(g, g.make_cell_field(1.0), v, 0.0, 1.5 * bound, [](double, Vec2) { return 1.0; }, p);
    FAIL("expected StepRejected");
  } catch (const StepRejected& e) {
    CHECK(e.admissible_dt == doctest::Approx(bound));
  }
}

TEST_CASE("renormalized advection examples") {
  const StaggeredGrid g = unit_grid(10);
  const FaceField v = stream_faces(g, [](Vec2 x) { return x.y * x.y - 0.3 * std::sin(4 * x.x); });
  const BoundaryPartition p = partition_of(g, v);
  const double dt = monotone_dt(g, v, p);
  const CellField rho = testing::sample_cells(g, [](Vec2 x) { return 1.2 + 0.5 * std::sin(5 * x.x * x.y); });
  auto inflow = [](double, Vec2 x) { return 1.0 + x.y; };
  const auto a = advect(g, rho, v, 0.0, dt, inflow, p);
  const auto b = renormalized_advect([](double r) { return r; }, g, rho, v, 0.0, dt, inflow, p);
  CHECK(a.field == b.field);
  const auto c = renormalized_advect([](double) { return 2.5; }, g, rho, v, 0.0, dt, inflow, p);
  for (double x : c.field) CHECK(x == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("maximum principle, conservation and monotonicity on random flows") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1), pos(1, 2);
  const StaggeredGrid g = StaggeredGrid::build({0, 0}, {1.3, 1}, 13, 10);
  for (int trial = 0; trial < 25; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const FaceField v = stream_faces(g, [=](Vec2 x) { return a * x.y + b * x.x + c * std::sin(3 * x.x + d * x.y); });
    const BoundaryPartition p = partition_of(g, v);
    const double dt = std::min(1.0, monotone_dt(g, v, p)) * (0.5 + 0.5 * std::abs(u(rng)));
    CellField lo = g.make_cell_field(), hi = g.make_cell_field();
    for (int k = 0; k < g.cell_count(); ++k) {
      lo[k] = pos(rng);
      hi[k] = lo[k] + 0.5 * std::abs(u(rng));
    }
    const double in_lo = pos(rng), in_hi = in_lo + 0.1;
    const auto rl = advect(g, lo, v, 0.0, dt, [&](double, Vec2) { return in_lo; }, p);
    const auto rh = advect(g, hi, v, 0.0, dt, [&](double, Vec2) { return in_hi; }, p);

    const double mn = std::min(*std::min_element(lo.begin(), lo.end()), in_lo);
    const double mx = std::max(*std::max_element(lo.begin(), lo.end()), in_lo);
    const double eps = dt * 1e-8 * mx;
    for (std::size_t k = 0; k < rl.field.size(); ++k) {
      CHECK(rl.field[k] >= mn - eps);
      CHECK(rl.field[k] <= mx + eps);
      CHECK(rl.field[k] <= rh.field[k] + 1e-14);
    }
    const double change = total(rl.field, g) - total(lo, g);
    CHECK(change == doctest::Approx(step_weighted(rl.inflow) - step_weighted(rl.outflow)).epsilon(1e-12).scale(1.0));
    for (const auto& e : rl.outflow.entries)
      CHECK(std::find(p.outflow.begin(), p.outflow.end(), e.face) != p.outflow.end());
    for (const auto& e : rl.inflow.entries)
      CHECK(std::find(p.inflow.begin(), p.inflow.end(), e.face) != p.inflow.end());
  }
}

TEST_CASE("mass ledger") {
  const StaggeredGrid g = unit_grid(16);
  SUBCASE("closed box") {
    const FaceField v = stream_faces(g, [](Vec2 x) { return std::pow(x.x * (1 - x.x) * x.y * (1 - x.y), 2); });
    const BoundaryPartition p = partition_of(g, v);
    CHECK(p.tangential.size() == g.boundary_faces().size());
    CellField rho = testing::sample_cells(g, [](Vec2 x) { return 1 + (x.x > 0.5 ? 1.0 : 0.0); });
    const CellField start = rho;
    TraceRecord out, in;
    const double dt = monotone_dt(g, v, p);
    for (int n = 0; n < 50; ++n) {
      auto r = advect(g, rho, v, n * dt, dt, [](double, Vec2) { return 1.0; }, p);
      rho = std::move(r.field);
      out.append(r.outflow);
      in.append(r.inflow);
    }
    const MassBalance m = mass_ledger(g, start, rho, out, in);
    CHECK(m.outflow == 0.0);
    CHECK(m.residual <= 1e-13 * m.initial);
  }
  SUBCASE("uniform channel of a constant") {
    const FaceField v = sample_faces(g, [](Vec2) { return Vec2{1, 0}; });
    const BoundaryPartition p = classify_boundary(g, [](double, Vec2) { return Vec2{1, 0}; }, 0.0);
    CellField rho = g.make_cell_field(1.5);
    const CellField start = rho;
    TraceRecord out, in;
    const double dt = 0.5 * g.hx();
    for (int n = 0; n < 20; ++n) {
      auto r = advect(g, rho, v, n * dt, dt, [](double, Vec2) { return 1.5; }, p);
      CHECK(step_weighted(r.inflow) == doctest::Approx(step_weighted(r.outflow)));
      rho = std::move(r.field);
      out.append(r.outflow);
      in.append(r.inflow);
    }
    CHECK(mass_ledger(g, start, rho, out, in).residual <= 1e-13);
    CHECK(out.entry_count() == 20u * 16u);
  }
}
