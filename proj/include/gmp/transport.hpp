#pragma once

#include <functional>
#include <vector>

#include "gmp/fields.hpp"
#include "gmp/grid.hpp"

namespace gmp {

/// One boundary face value within a step: outflow traces carry the interior
/// upwind value, inflow records carry the prescribed boundary value.
struct TraceEntry {
  int face = 0;  // global face id
  double value = 0.0;
  double weight = 0.0;  // |b.n| * length * dt
};

struct TraceStep {
  double time = 0.0;  // start of the step
  double dt = 0.0;
  std::vector<TraceEntry> entries;
};

/// Time-ordered boundary records for one transported quantity.
struct TraceRecord {
  std::vector<TraceStep> steps;

  void append(TraceStep step) { steps.push_back(std::move(step)); }
  /// Sum of weight * value over all entries.
  double weighted_total() const;
  std::size_t entry_count() const;
};

/// cfl * min(hx / max|u|, hy / max|v|), or dt_max when the velocity vanishes.
double cfl_dt(const StaggeredGrid& grid, const FaceField& v, double cfl, double dt_max);

/// Largest dt for which every cell update is a convex combination:
/// 1 / max_i (sum of outgoing face fluxes / area). Infinite for v = 0.
double monotone_dt(const StaggeredGrid& grid, const FaceField& v, const BoundaryPartition& partition);

struct AdvectResult {
  CellField field;
  TraceStep outflow;
  TraceStep inflow;
};

/// One forward-Euler upwind step of d_t q + div(v q) = 0 with q = inflow(t, x)
/// on inflow faces. Tangential boundary faces carry no flux. Throws
/// StepRejected when dt exceeds monotone_dt.
AdvectResult advect(const StaggeredGrid& grid, const CellField& field, const FaceField& v, double t, double dt,
                    const ScalarSampler& inflow, const BoundaryPartition& partition);

/// advect applied to beta(field) with inflow data beta(inflow).
AdvectResult renormalized_advect(const std::function<double(double)>& beta, const StaggeredGrid& grid,
                                 const CellField& field, const FaceField& v, double t, double dt,
                                 const ScalarSampler& inflow, const BoundaryPartition& partition);

struct MassBalance {
  double initial = 0.0;
  double final = 0.0;
  double outflow = 0.0;
  double inflow = 0.0;
  /// |final - initial + outflow - inflow|
  double residual = 0.0;
};

MassBalance mass_ledger(const StaggeredGrid& grid, const CellField& initial, const CellField& final,
                        const TraceRecord& outflow, const TraceRecord& inflow);

}  // namespace gmp
