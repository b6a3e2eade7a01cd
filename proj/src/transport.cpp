#include "gmp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gmp {

double TraceRecord::weighted_total() const {
  double s = 0.0;
  for (const auto& st : steps)
    for (const auto& e : st.entries) s += e.weight * e.value;
  return s;
}

std::size_t TraceRecord::entry_count() const {
  std::size_t n = 0;
  for (const auto& st : steps) n += st.entries.size();
  return n;
}

double cfl_dt(const StaggeredGrid& grid, const FaceField& v, double cfl, double dt_max) {
  double rate = 0.0;
  for (double u : v.u) rate = std::max(rate, std::abs(u) / grid.hx());
  for (double w : v.v) rate = std::max(rate, std::abs(w) / grid.hy());
  if (rate == 0.0) return dt_max;
  return cfl / rate;
}

namespace {

// Outward flux (v.n) * length through each face of each cell, computed once
// per face. Boundary faces in the tangential zone are zeroed.
struct FaceFluxes {
  std::vector<double> xq;  // through x-face, positive in +x direction
  std::vector<double> yq;
};

FaceFluxes face_fluxes(const StaggeredGrid& g, const FaceField& v, const BoundaryPartition& part) {
  FaceFluxes q;
  q.xq.resize(v.u.size());
  q.yq.resize(v.v.size());
  for (std::size_t f = 0; f < v.u.size(); ++f) q.xq[f] = v.u[f] * g.hy();
  for (std::size_t f = 0; f < v.v.size(); ++f) q.yq[f] = v.v[f] * g.hx();
  const auto& faces = g.boundary_faces();
  for (std::size_t k = 0; k < faces.size(); ++k) {
    if (part.zone[k] != Zone::Tangential) continue;
    const int id = faces[k].id;
    if (id < g.xface_count())
      q.xq[static_cast<std::size_t>(id)] = 0.0;
    else
      q.yq[static_cast<std::size_t>(id - g.xface_count())] = 0.0;
  }
  return q;
}

}  // namespace

double monotone_dt(const StaggeredGrid& g, const FaceField& v, const BoundaryPartition& part) {
  const FaceFluxes q = face_fluxes(g, v, part);
  const int nx = g.nx(), ny = g.ny();
  double worst = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double out = std::max(0.0, q.xq[g.xface(i + 1, j)]) + std::max(0.0, -q.xq[g.xface(i, j)]) +
                         std::max(0.0, q.yq[g.yface(i, j + 1)]) + std::max(0.0, -q.yq[g.yface(i, j)]);
      worst = std::max(worst, out / g.cell_area());
    }
  return worst == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / worst;
}

AdvectResult advect(const StaggeredGrid& g, const CellField& field, const FaceField& v, double t, double dt,
                    const ScalarSampler& inflow, const BoundaryPartition& part) {
  const double admissible = monotone_dt(g, v, part);
  if (dt > admissible * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "transport step dt = " << dt << " exceeds the monotone bound " << admissible;
    throw StepRejected(os.str(), admissible);
  }
  const int nx = g.nx(), ny = g.ny();
  const FaceFluxes q = face_fluxes(g, v, part);
  AdvectResult r{field, {t, dt, {}}, {t, dt, {}}};
  const double s = dt / g.cell_area();

  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const double flux = q.xq[g.xface(i, j)];
      const int l = g.cell(i - 1, j), rr = g.cell(i, j);
      const double F = flux * (flux >= 0.0 ? field[l] : field[rr]);
      r.field[l] -= s * F;
      r.field[rr] += s * F;
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double flux = q.yq[g.yface(i, j)];
      const int b = g.cell(i, j - 1), tcell = g.cell(i, j);
      const double F = flux * (flux >= 0.0 ? field[b] : field[tcell]);
      r.field[b] -= s * F;
      r.field[tcell] += s * F;
    }

  const auto& faces = g.boundary_faces();
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const auto& f = faces[k];
    if (part.zone[k] == Zone::Tangential) continue;
    const double qn = f.id < g.xface_count() ? q.xq[static_cast<std::size_t>(f.id)] * f.normal.x
                                             : q.yq[static_cast<std::size_t>(f.id - g.xface_count())] * f.normal.y;
    const double w = std::abs(qn) * dt;
    if (part.zone[k] == Zone::Outflow) {
      const double val = field[f.cell];
      r.field[f.cell] -= s * qn * val;
      r.outflow.entries.push_back({f.id, val, w});
    } else {
      const double val = inflow(t, f.center);
      r.field[f.cell] -= s * qn * val;
      r.inflow.entries.push_back({f.id, val, w});
    }
  }
  return r;
}

AdvectResult renormalized_advect(const std::function<double(double)>& beta, const StaggeredGrid& grid,
                                 const CellField& field, const FaceField& v, double t, double dt,
                                 const ScalarSampler& inflow, const BoundaryPartition& partition) {
  CellField bf(field.size());
  std::transform(field.begin(), field.end(), bf.begin(), beta);
  ScalarSampler binflow = [&](double tt, Vec2 x) { return beta(inflow(tt, x)); };
  return advect(grid, bf, v, t, dt, binflow, partition);
}

MassBalance mass_ledger(const StaggeredGrid& grid, const CellField& initial, const CellField& final,
                        const TraceRecord& outflow, const TraceRecord& inflow) {
  MassBalance m;
  for (double x : initial) m.initial += x;
  for (double x : final) m.final += x;
  m.initial *= grid.cell_area();
  m.final *= grid.cell_area();
  m.outflow = outflow.weighted_total();
  m.inflow = inflow.weighted_total();
  m.residual = std::abs(m.final - m.initial + m.outflow - m.inflow);
  return m;
}

}  // namespace gmp
