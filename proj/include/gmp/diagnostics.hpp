#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gmp/brinkman.hpp"
#include "gmp/coupler.hpp"
#include "gmp/fields.hpp"
#include "gmp/grid.hpp"
#include "gmp/scenario.hpp"
#include "gmp/transport.hpp"

namespace gmp {

struct BoundsViolation {
  int cell = 0;
  double rho = 0.0;
  double nu = 0.0;
  double excess = 0.0;  // largest distance outside the admissible box
};

/// Cells whose (rho, nu) leave the admissible box by more than tau_mp.
std::vector<BoundsViolation> bounds_check(const MixtureState& state, double tau_mp);

/// Cell classification against two phase intervals widened by
/// eps = eps_rel * (rho gap between the phases). The three areas partition
/// the domain.
struct MixingRow {
  double t = 0.0;
  double area_phase1 = 0.0;
  double area_phase2 = 0.0;
  double area_mixed = 0.0;
  /// Area where the phase read off rho differs from the phase read off nu.
  double rho_nu_disagreement = 0.0;
};

MixingRow mixing_measure(const StaggeredGrid& grid, const MixtureState& state, const PhaseSpec& phases,
                         double eps_rel, double t = 0.0);

/// The same classification applied to paired outflow traces, weighted by
/// the trace measure.
struct TraceMixing {
  double weight_phase1 = 0.0;
  double weight_phase2 = 0.0;
  double weight_mixed = 0.0;
};

TraceMixing trace_mixing(const TraceRecord& rho_out, const TraceRecord& nu_out, const PhaseSpec& phases,
                         double eps_rel);

/// L1 norm of advect(beta(q)) - beta(advect(q)) for one step.
double renormalization_step_defect(const std::function<double(double)>& beta, const StaggeredGrid& grid,
                                   const CellField& before, const FaceField& v, double t, double dt,
                                   const ScalarSampler& inflow, const BoundaryPartition& partition);

/// Step observer that accumulates the density defect into `total` (and
/// per-step values into `per_step` when non-null).
StepObserver renormalization_observer(const StaggeredGrid& grid, const Scenario& scenario,
                                      std::function<double(double)> beta, double& total,
                                      std::vector<double>* per_step = nullptr);

/// Per-step density defects of a trajectory stored at every step.
std::vector<double> renormalization_defect(const StaggeredGrid& grid, const Scenario& scenario,
                                           const Trajectory& trajectory, const std::function<double(double)>& beta);

/// Space-time test function a(t) * s(xh, yh) on normalized coordinates
/// xh = (x - origin.x)/extent.x, yh likewise, with a(T) = 0.
struct TestFunction {
  std::string name;
  std::function<double(double t, double T)> a;
  std::function<double(double t, double T)> a_integral;  // any antiderivative of a
  std::function<double(double xh, double yh)> s;
  std::function<Vec2(double xh, double yh)> grad_s;  // derivatives in xh, yh
};

/// The fixed family used by weak_form_residual.
const std::vector<TestFunction>& transport_test_functions();

struct TransportIdentity {
  std::string test;
  double volume = 0.0;   // int rho (phi_t + v.grad phi)
  double initial = 0.0;  // int rho0 phi(0)
  double outflow = 0.0;  // int rho^o phi dmu+
  double inflow = 0.0;   // int rho_b phi dmu-
  double residual = 0.0;
  double relative = 0.0;
};

struct WeakFormReport {
  std::vector<TransportIdentity> rho;
  std::vector<TransportIdentity> nu;
  double rho_relative = 0.0;  // sum |residual| / sum of term magnitudes over the family
  double nu_relative = 0.0;
  double momentum_relative = 0.0;
};

/// Residuals of the two transport identities and the momentum identity of
/// a discrete weak solution. The trajectory must hold a frame at every step.
/// The momentum test field is psi = curl(sin^2(pi xh) sin^2(pi yh)), which
/// vanishes on the boundary and is divergence free.
WeakFormReport weak_form_residual(const StaggeredGrid& grid, const Scenario& scenario, const Trajectory& trajectory);

/// Transport identity for one quantity and one test function.
TransportIdentity transport_identity(const StaggeredGrid& grid, double T, const std::vector<Frame>& frames,
                                     bool density, const TraceRecord& out, const TraceRecord& in,
                                     const TestFunction& phi);

/// T = -p I + 2 mu Dv per cell.
std::vector<SymTensor> stress_field(const StaggeredGrid& grid, const VelocityPressure& vp, const CellField& mu);

struct EnergyIdentity {
  double lhs = 0.0;  // a(z, z) + (h z, z)
  double rhs = 0.0;  // (rho g, z) - a(v_b, z) - (h v_b, z)
  double relative = 0.0;
};

/// Discrete energy identity with the lift z = v - v_b.
EnergyIdentity energy_report(const StaggeredGrid& grid, const VelocityPressure& vp, const CellField& mu,
                             const CellField& h, const FaceField& forcing, const Velocity& lift,
                             ViscosityAveraging averaging = ViscosityAveraging::Arithmetic);

/// Energy identity for a solved state of a scenario. Caches the boundary
/// lift when b does not depend on time.
class EnergyChecker {
 public:
  EnergyChecker(const StaggeredGrid& grid, const Scenario& scenario);
  EnergyIdentity operator()(const MixtureState& state, const VelocityPressure& vp, double t);

 private:
  const StaggeredGrid& grid_;
  const Scenario& scenario_;
  bool steady_;
  bool have_lift_ = false;
  Velocity lift_;
};

}  // namespace gmp
