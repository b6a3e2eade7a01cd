#include "gmp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gmp {

StaggeredGrid StaggeredGrid::build(Vec2 origin, Vec2 extent, int nx, int ny) {
  if (!(extent.x > 0.0)) throw ConfigError("extent.x must be positive, got " + std::to_string(extent.x));
  if (!(extent.y > 0.0)) throw ConfigError("extent.y must be positive, got " + std::to_string(extent.y));
  if (nx < 2) throw ConfigError("nx must be at least 2, got " + std::to_string(nx));
  if (ny < 2) throw ConfigError("ny must be at least 2, got " + std::to_string(ny));

  StaggeredGrid g;
  g.origin_ = origin;
  g.extent_ = extent;
  g.nx_ = nx;
  g.ny_ = ny;
  g.hx_ = extent.x / nx;
  g.hy_ = extent.y / ny;

  g.boundary_.reserve(static_cast<std::size_t>(2 * nx + 2 * ny));
  for (int j = 0; j < ny; ++j)
    g.boundary_.push_back({g.xface(0, j), Side::Left, {-1.0, 0.0}, g.xface_center(0, j), g.hy_, g.cell(0, j)});
  for (int j = 0; j < ny; ++j)
    g.boundary_.push_back(
        {g.xface(nx, j), Side::Right, {1.0, 0.0}, g.xface_center(nx, j), g.hy_, g.cell(nx - 1, j)});
  for (int i = 0; i < nx; ++i)
    g.boundary_.push_back(
        {g.yface_id(i, 0), Side::Bottom, {0.0, -1.0}, g.yface_center(i, 0), g.hx_, g.cell(i, 0)});
  for (int i = 0; i < nx; ++i)
    g.boundary_.push_back(
        {g.yface_id(i, ny), Side::Top, {0.0, 1.0}, g.yface_center(i, ny), g.hx_, g.cell(i, ny - 1)});
  return g;
}

BoundaryPartition classify_boundary(const StaggeredGrid& grid, const VectorSampler& b, double t,
                                    double tau_n) {
  const auto& faces = grid.boundary_faces();
  BoundaryPartition part;
  part.time = t;
  part.zone.resize(faces.size());
  part.normal_velocity.resize(faces.size());
  part.weight.resize(faces.size());

  double bmax = 0.0;
  std::vector<Vec2> samples(faces.size());
  for (std::size_t k = 0; k < faces.size(); ++k) {
    samples[k] = b(t, faces[k].center);
    bmax = std::max({bmax, std::abs(samples[k].x), std::abs(samples[k].y)});
  }
  if (tau_n < 0.0) tau_n = 1e-12 * bmax;

  for (std::size_t k = 0; k < faces.size(); ++k) {
    const double bn = dot(samples[k], faces[k].normal);
    part.normal_velocity[k] = bn;
    part.weight[k] = std::abs(bn) * faces[k].length;
    if (bn > tau_n) {
      part.zone[k] = Zone::Outflow;
      part.outflow.push_back(faces[k].id);
    } else if (bn < -tau_n) {
      part.zone[k] = Zone::Inflow;
      part.inflow.push_back(faces[k].id);
    } else {
      part.zone[k] = Zone::Tangential;
      part.tangential.push_back(faces[k].id);
    }
  }
  return part;
}

CellField discrete_divergence(const StaggeredGrid& grid, const FaceField& v) {
  const int nx = grid.nx(), ny = grid.ny();
  CellField div = grid.make_cell_field();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      div[grid.cell(i, j)] = (v.u[grid.xface(i + 1, j)] - v.u[grid.xface(i, j)]) / grid.hx() +
                             (v.v[grid.yface(i, j + 1)] - v.v[grid.yface(i, j)]) / grid.hy();
  return div;
}

FaceField discrete_gradient(const StaggeredGrid& grid, const CellField& p) {
  const int nx = grid.nx(), ny = grid.ny();
  FaceField g = grid.make_face_field();
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      g.u[grid.xface(i, j)] = (p[grid.cell(i, j)] - p[grid.cell(i - 1, j)]) / grid.hx();
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      g.v[grid.yface(i, j)] = (p[grid.cell(i, j)] - p[grid.cell(i, j - 1)]) / grid.hy();
  return g;
}

double net_boundary_flux(const StaggeredGrid& grid, const VectorSampler& b, double t) {
  double sum = 0.0;
  for (const auto& f : grid.boundary_faces()) sum += dot(b(t, f.center), f.normal) * f.length;
  return sum;
}

}  // namespace gmp
