#pragma once

#include <functional>
#include <vector>

#include "lfd/flow_map.hpp"

namespace lfd {

/// Lagrangian quadrature ensemble: labels on a uniform grid over a compact
/// block, each weighted by rho0(a) times its cell volume (Riemann block rule).
struct ParticleEnsemble {
    std::vector<Vec3> labels;
    std::vector<double> weights;

    int size() const { return static_cast<int>(labels.size()); }
};

/// Cell-centered ensemble over the box [lo,hi]^3 with n_per_axis cells per
/// axis; rho0 is taken from the field at t=0 when given, else 1.
ParticleEnsemble block_ensemble(const Vec3& lo, const Vec3& hi, int n_per_axis,
                                const FlowField* field_for_rho0 = nullptr);

/// Uniformly time-sampled trajectories of an ensemble: positions and the
/// integrator's velocities u(x,t) at every sample. Outer index is the label.
struct DiscreteTrajectory {
    std::vector<double> times;
    std::vector<std::vector<Vec3>> positions;
    std::vector<std::vector<Vec3>> velocities;
};

/// Integrate all ensemble labels over [0,T] with n_steps uniform samples
/// after t=0 (so times.size() == n_steps+1).
DiscreteTrajectory integrate_trajectories(const FlowField& field, const ParticleEnsemble& ens,
                                          double T, int n_steps, const IntegratorConfig& cfg);

/// Combined potential Omega = V - f(p) for barotropic fields (f from the
/// closure). Incompressible fields use the analogue Omega = V - p/rho.
/// Throws NumericError when p <= 0 under a barotropic closure.
double omega_potential(const FlowField& field, const Vec3& x, double t);

/// The action: label-weighted sum of trapezoidal time quadratures of
/// |xdot|^2/2 + Omega along each trajectory. Velocities must be consistent
/// with positions (centered-difference cross-check within 1e-4).
double discrete_action(const ParticleEnsemble& ens, const DiscreteTrajectory& traj,
                       const FlowField& field);

/// Admissible variation: value and exact time derivative, vanishing at the
/// endpoint times.
struct Perturbation {
    std::function<Vec3(const Vec3&, double)> value;
    std::function<Vec3(const Vec3&, double)> rate;
};

/// bump(t) * direction * cos(wave . a + phase) with bump = sin^2(pi t / T),
/// which vanishes with its value at t = 0 and t = T.
Perturbation bump_perturbation(const Vec3& direction, const Vec3& wave, double phase, double T);

/// Central-difference first variation [S(x + eps eta) - S(x - eps eta)]/(2 eps).
double first_variation(const ParticleEnsemble& ens, const DiscreteTrajectory& traj,
                       const FlowField& field, const Perturbation& pert, double eps);

/// Residual of the strong-form equation xddot - grad Omega = 0 along the flow
/// map at (a,t); xddot by centered differencing of single integrator steps
/// with step 1e-4.
Vec3 euler_lagrange_residual(const FlowField& field, const Vec3& a, double t,
                             const IntegratorConfig& cfg);

/// Label-weighted, trapezoid-in-time inner product of the strong-form
/// residual with a perturbation; equals -first_variation up to quadrature
/// error.
double residual_pairing(const ParticleEnsemble& ens, const DiscreteTrajectory& traj,
                        const FlowField& field, const Perturbation& pert,
                        const IntegratorConfig& cfg);

}  // namespace lfd
