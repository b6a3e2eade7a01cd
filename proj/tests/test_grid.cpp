#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <set>

#include "gmp/grid.hpp"
#include "helpers.hpp"

using namespace gmp;
using testing::sample_cells;
using testing::sample_faces;
using testing::unit_grid;

TEST_CASE("grid counts and sizes") {
  const StaggeredGrid g = unit_grid(4);
  CHECK(g.hx() == 0.25);
  CHECK(g.hy() == 0.25);
  CHECK(g.cell_count() == 16);
  CHECK(g.xface_count() == 20);
  CHECK(g.yface_count() == 20);
  CHECK(g.boundary_faces().size() == 16);

  const StaggeredGrid r = StaggeredGrid::build({0, 0}, {2, 1}, 4, 2);
  CHECK(r.hx() == 0.5);
  CHECK(r.hy() == 0.5);
}

TEST_CASE("grid rejects bad geometry and names the field") {
  auto message = [](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message([] { StaggeredGrid::build({0, 0}, {1, -1}, 4, 4); }).find("extent") != std::string::npos);
  CHECK(message([] { StaggeredGrid::build({0, 0}, {1, 1}, 1, 4); }).find("nx") != std::string::npos);
  CHECK(message([] { StaggeredGrid::build({0, 0}, {1, 1}, 4, 0); }).find("ny") != std::string::npos);
}

TEST_CASE("boundary faces appear once and interior faces never") {
  const StaggeredGrid g = StaggeredGrid::build({0.5, -1}, {3, 2}, 6, 5);
  std::set<int> ids;
  for (const auto& f : g.boundary_faces()) {
    ids.insert(f.id);
    if (f.id < g.xface_count()) {
      const int i = f.id % (g.nx() + 1);
      CHECK((i == 0 || i == g.nx()));
    } else {
      const int j = (f.id - g.xface_count()) / g.nx();
      CHECK((j == 0 || j == g.ny()));
    }
    CHECK(std::abs(std::hypot(f.normal.x, f.normal.y) - 1.0) < 1e-15);
  }
  CHECK(ids.size() == g.boundary_faces().size());
  CHECK(ids.size() == static_cast<std::size_t>(2 * g.nx() + 2 * g.ny()));
}

TEST_CASE("refinement quarters the cell area") {
  for (int n : {2, 3, 8, 17}) {
    const StaggeredGrid a = StaggeredGrid::build({0, 0}, {1.7, 0.3}, n, n + 1);
    const StaggeredGrid b = StaggeredGrid::build({0, 0}, {1.7, 0.3}, 2 * n, 2 * (n + 1));
    CHECK(b.cell_area() == doctest::Approx(a.cell_area() / 4).epsilon(1e-14));
    CHECK(a.face_count() == (n + 1) * (n + 1) + n * (n + 2));
  }
}

TEST_CASE("classify_boundary examples") {
  const StaggeredGrid g = unit_grid(4);
  const auto zero = classify_boundary(g, [](double, Vec2) { return Vec2{0, 0}; }, 0.0);
  CHECK(zero.inflow.empty());
  CHECK(zero.outflow.empty());
  CHECK(zero.tangential.size() == 16);

  const auto channel = classify_boundary(g, [](double, Vec2) { return Vec2{1, 0}; }, 0.0);
  for (std::size_t k = 0; k < g.boundary_faces().size(); ++k) {
    const Side side = g.boundary_faces()[k].side;
    const Zone expect = side == Side::Left ? Zone::Inflow : side == Side::Right ? Zone::Outflow : Zone::Tangential;
    CHECK(channel.zone[k] == expect);
  }

  const auto out = classify_boundary(g, [](double, Vec2 x) { return Vec2{x.x - 0.5, x.y - 0.5}; }, 0.0);
  CHECK(out.outflow.size() == 16);
}

TEST_CASE("partition property over random samplers") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  const StaggeredGrid g = StaggeredGrid::build({0, 0}, {1.5, 1}, 7, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng), e = u(rng);
    const double t = u(rng);
    // Mix smooth fields with exact zeros on some sides.
    auto sampler = [=](double time, Vec2 x) {
      return Vec2{trial % 3 == 0 ? 0.0 : a * std::sin(3 * x.y + time) + b, c * x.x + d * std::cos(e * x.y)};
    };
    const double tau = trial % 2 ? -1.0 : 1e-3;
    const auto p = classify_boundary(g, sampler, t, tau);
    std::vector<int> all;
    all.insert(all.end(), p.inflow.begin(), p.inflow.end());
    all.insert(all.end(), p.outflow.begin(), p.outflow.end());
    all.insert(all.end(), p.tangential.begin(), p.tangential.end());
    std::sort(all.begin(), all.end());
    std::vector<int> expect;
    for (const auto& f : g.boundary_faces()) expect.push_back(f.id);
    std::sort(expect.begin(), expect.end());
    CHECK(all == expect);
    double bmax = 0.0;
    for (const auto& f : g.boundary_faces()) {
      const Vec2 s = sampler(t, f.center);
      bmax = std::max({bmax, std::abs(s.x), std::abs(s.y)});
    }
    const double dead = tau < 0 ? 1e-12 * bmax : tau;
    for (std::size_t k = 0; k < p.weight.size(); ++k) {
      CHECK(p.weight[k] >= 0.0);
      if (p.zone[k] == Zone::Tangential) CHECK(p.weight[k] <= dead * g.boundary_faces()[k].length);
    }
  }
}

TEST_CASE("discrete divergence examples") {
  const StaggeredGrid g = StaggeredGrid::build({0, 0}, {2, 1}, 6, 4);
  const auto c = discrete_divergence(g, sample_faces(g, [](Vec2) { return Vec2{0.3, -2}; }));
  CHECK(*std::max_element(c.begin(), c.end()) == 0.0);
  CHECK(*std::min_element(c.begin(), c.end()) == 0.0);
  for (double d : discrete_divergence(g, sample_faces(g, [](Vec2 x) { return Vec2{x.x, -x.y}; })))
    CHECK(std::abs(d) < 1e-14);
  for (double d : discrete_divergence(g, sample_faces(g, [](Vec2 x) { return Vec2{x.x, 0}; })))
    CHECK(d == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("discrete gradient examples") {
  const StaggeredGrid g = unit_grid(5);
  const auto z = discrete_gradient(g, g.make_cell_field(3.5));
  CHECK(*std::max_element(z.u.begin(), z.u.end()) == 0.0);
  CHECK(*std::max_element(z.v.begin(), z.v.end()) == 0.0);
  const auto gx = discrete_gradient(g, sample_cells(g, [](Vec2 x) { return x.x; }));
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) CHECK(gx.u[g.xface(i, j)] == doctest::Approx(1.0).epsilon(1e-13));
}

namespace {

/// Divergence and gradient as dense matrices on interior faces (4x4 grid).
struct DenseOps {
  Eigen::MatrixXd div;   // cells x interior faces
  Eigen::MatrixXd grad;  // interior faces x cells
};

DenseOps dense_ops(const StaggeredGrid& g) {
  std::vector<std::pair<bool, int>> faces;  // (is x-face, local index)
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) faces.push_back({true, g.xface(i, j)});
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) faces.push_back({false, g.yface(i, j)});
  DenseOps ops{Eigen::MatrixXd::Zero(g.cell_count(), faces.size()), Eigen::MatrixXd::Zero(faces.size(), g.cell_count())};
  for (std::size_t k = 0; k < faces.size(); ++k) {
    FaceField e = g.make_face_field();
    (faces[k].first ? e.u : e.v)[faces[k].second] = 1.0;
    const CellField d = discrete_divergence(g, e);
    for (int c = 0; c < g.cell_count(); ++c) ops.div(c, k) = d[c];
  }
  for (int c = 0; c < g.cell_count(); ++c) {
    CellField e = g.make_cell_field();
    e[c] = 1.0;
    const FaceField gr = discrete_gradient(g, e);
    for (std::size_t k = 0; k < faces.size(); ++k) ops.grad(k, c) = (faces[k].first ? gr.u : gr.v)[faces[k].second];
  }
  return ops;
}

}  // namespace

TEST_CASE("gradient is the negative transpose of divergence on interior faces") {
  const StaggeredGrid g = unit_grid(4);
  const DenseOps ops = dense_ops(g);
  CHECK((ops.grad + ops.div.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  // div grad is symmetric negative semidefinite.
  const Eigen::MatrixXd L = ops.div * ops.grad;
  CHECK((L - L.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(L).eigenvalues();
  CHECK(ev.maxCoeff() < 1e-10);

  // <div v, p> = -<v, grad p> for v vanishing on the boundary.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  Eigen::VectorXd v(ops.div.cols()), p(ops.div.rows());
  for (auto& x : v) x = n01(rng);
  for (auto& x : p) x = n01(rng);
  CHECK((ops.div * v).dot(p) == doctest::Approx(-v.dot(ops.grad * p)).epsilon(1e-12));

  // The divergence of a gradient vanishes on constant pressure.
  CHECK((ops.div * (ops.grad * Eigen::VectorXd::Ones(g.cell_count()))).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("net boundary flux") {
  const StaggeredGrid g = StaggeredGrid::build({0, 0}, {2, 1}, 8, 4);
  CHECK(std::abs(net_boundary_flux(g, [](double, Vec2) { return Vec2{1, 0}; }, 0)) < 1e-14);
  // b = outward normal: the flux equals the perimeter.
  auto normal = [](double, Vec2 x) {
    if (x.x <= 1e-12) return Vec2{-1, 0};
    if (x.x >= 2 - 1e-12) return Vec2{1, 0};
    return x.y <= 1e-12 ? Vec2{0, -1} : Vec2{0, 1};
  };
  CHECK(net_boundary_flux(g, normal, 0) == doctest::Approx(6.0));
}
