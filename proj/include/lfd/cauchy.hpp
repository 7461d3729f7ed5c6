#pragma once

#include <vector>

#include "lfd/flow_map.hpp"

namespace lfd {

/// One evaluation of the Cauchy invariant vector sum_k grad_a(xdot_k) x
/// grad_a(x_k) for label a at time t, with the initial vorticity omega0 at
/// that label and the drift |invariant - omega0|.
struct CauchyRecord {
    Vec3 a;
    double t = 0.0;
    Vec3 invariant;
    Vec3 omega0;
    double drift = 0.0;
};

/// Evaluate the invariant from an already-integrated state: with J = dx/da
/// and K = grad u(x,t) J = d(xdot)/da, returns sum_k row_k(K) x row_k(J).
Vec3 cauchy_invariant_from_state(const FlowField& field, const TrajectoryState& state);

/// Initial vorticity at label a: analytic curl when the field carries an
/// analytic gradient, else 4th-order FD curl with step 1e-3.
Vec3 initial_vorticity(const FlowField& field, const Vec3& a);

CauchyRecord cauchy_invariant(const FlowField& field, const Vec3& a, double t,
                              const IntegratorConfig& cfg);

/// Transported vorticity J omega0 / det J at (a,t); equals the Eulerian curl
/// of u at the mapped point. Throws NumericError when det J <= 0.
Vec3 cauchy_vorticity(const FlowField& field, const Vec3& a, double t,
                      const IntegratorConfig& cfg);

/// Records for every (seed, time), one forward integration pass per seed.
/// Times must be ascending and start at >= 0.
std::vector<CauchyRecord> invariant_drift_series(const FlowField& field,
                                                 const std::vector<Vec3>& seeds,
                                                 const std::vector<double>& times,
                                                 const IntegratorConfig& cfg);

}  // namespace lfd
