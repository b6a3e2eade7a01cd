#pragma once

#include <vector>

#include "gmp/types.hpp"

namespace gmp {

enum class Side { Left, Right, Bottom, Top };

/// One face on the domain boundary. `id` is the global face id: x-faces
/// occupy [0, xface_count), y-faces follow at offset xface_count.
struct BoundaryFace {
  int id = 0;
  Side side = Side::Left;
  Vec2 normal;
  Vec2 center;
  double length = 0.0;
  int cell = 0;  // adjacent interior cell
};

/// MAC grid over an axis-aligned rectangle. Pressure, density and viscosity
/// sit at cell centers; velocity components sit on the faces normal to them.
///
///      v(i,j+1)
///         |
///  u(i,j) + c(i,j) + u(i+1,j)
///         |
///      v(i,j)
class StaggeredGrid {
 public:
  /// Throws ConfigError naming the offending field for nonpositive extents
  /// or fewer than two cells per direction.
  static StaggeredGrid build(Vec2 origin, Vec2 extent, int nx, int ny);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  Vec2 origin() const { return origin_; }
  Vec2 extent() const { return extent_; }
  double cell_area() const { return hx_ * hy_; }
  double domain_area() const { return extent_.x * extent_.y; }
  double perimeter() const { return 2.0 * (extent_.x + extent_.y); }

  int cell_count() const { return nx_ * ny_; }
  int xface_count() const { return (nx_ + 1) * ny_; }
  int yface_count() const { return nx_ * (ny_ + 1); }
  int face_count() const { return xface_count() + yface_count(); }

  int cell(int i, int j) const { return i + j * nx_; }
  int xface(int i, int j) const { return i + j * (nx_ + 1); }
  int yface(int i, int j) const { return i + j * nx_; }
  /// Global id of y-face (i, j).
  int yface_id(int i, int j) const { return xface_count() + yface(i, j); }

  Vec2 cell_center(int i, int j) const {
    return {origin_.x + (i + 0.5) * hx_, origin_.y + (j + 0.5) * hy_};
  }
  Vec2 xface_center(int i, int j) const {
    return {origin_.x + i * hx_, origin_.y + (j + 0.5) * hy_};
  }
  Vec2 yface_center(int i, int j) const {
    return {origin_.x + (i + 0.5) * hx_, origin_.y + j * hy_};
  }
  Vec2 node(int i, int j) const { return {origin_.x + i * hx_, origin_.y + j * hy_}; }

  const std::vector<BoundaryFace>& boundary_faces() const { return boundary_; }

  CellField make_cell_field(double value = 0.0) const {
    return CellField(static_cast<std::size_t>(cell_count()), value);
  }
  FaceField make_face_field(double value = 0.0) const {
    return {std::vector<double>(static_cast<std::size_t>(xface_count()), value),
            std::vector<double>(static_cast<std::size_t>(yface_count()), value)};
  }

 private:
  StaggeredGrid() = default;

  Vec2 origin_;
  Vec2 extent_;
  int nx_ = 0;
  int ny_ = 0;
  double hx_ = 0.0;
  double hy_ = 0.0;
  std::vector<BoundaryFace> boundary_;
};

enum class Zone { Inflow, Outflow, Tangential };

/// Sign classification of the boundary velocity at one time. Per-face arrays
/// are indexed like StaggeredGrid::boundary_faces().
struct BoundaryPartition {
  double time = 0.0;
  std::vector<int> inflow;
  std::vector<int> outflow;
  std::vector<int> tangential;
  std::vector<Zone> zone;
  std::vector<double> normal_velocity;  // b.n at the face midpoint
  std::vector<double> weight;           // |b.n| * face length
};

/// Classifies boundary faces by the sign of b.n at face midpoints, with a
/// dead band |b.n| <= tau_n treated as tangential. A negative tau_n selects
/// the default 1e-12 * max|b| over the boundary midpoints.
BoundaryPartition classify_boundary(const StaggeredGrid& grid, const VectorSampler& b, double t,
                                    double tau_n = -1.0);

/// Cellwise (flux difference)/h on the MAC stencil.
CellField discrete_divergence(const StaggeredGrid& grid, const FaceField& v);

/// Face gradient of a cell field. Boundary faces get zero: the pressure ghost
/// is the homogeneous one-sided extrapolation of the adjacent cell.
FaceField discrete_gradient(const StaggeredGrid& grid, const CellField& p);

/// Sum over boundary faces of (b.n) * length.
double net_boundary_flux(const StaggeredGrid& grid, const VectorSampler& b, double t);

}  // namespace gmp
