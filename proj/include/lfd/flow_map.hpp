#pragma once

#include "lfd/flow_field.hpp"
#include "lfd/geometry3.hpp"

namespace lfd {

/// State of one fluid particle: label a, current position x, tangent matrix
/// J = dx_i/da_j and current time. At t=0, x=a and J=I; det J stays positive
/// along valid trajectories.
struct TrajectoryState {
    Vec3 a;
    Vec3 x;
    Mat3 J = Mat3::identity();
    double t = 0.0;

    static TrajectoryState initial(const Vec3& label) {
        return {label, label, Mat3::identity(), 0.0};
    }
};

enum class Scheme { RK4 };

struct IntegratorConfig {
    double h = 1e-3;           // fixed step
    Scheme scheme = Scheme::RK4;
    double max_time = 10.0;

    void validate() const {
        if (!(h > 0.0)) throw std::invalid_argument("IntegratorConfig: h must be > 0");
        if (h > max_time) throw std::invalid_argument("IntegratorConfig: h must be <= max_time");
    }
};

/// Advance (x, J) by dt >= 0 with fixed-step RK4 on the coupled 12-dimensional
/// system xdot = u(x,t), Jdot = grad u(x,t) J; J uses the same stage
/// evaluations of grad u as x. dt is split into steps of cfg.h plus one final
/// partial step. Throws NumericError on non-finite states or det J <= 0,
/// std::invalid_argument on negative dt.
TrajectoryState advance(const TrajectoryState& state, const FlowField& field,
                        const IntegratorConfig& cfg, double dt);

/// Signed single-direction variant used internally and by inverse_map:
/// integrates from state.t to t_target (which may be earlier).
TrajectoryState advance_to(const TrajectoryState& state, const FlowField& field,
                           const IntegratorConfig& cfg, double t_target);

/// The Lagrangian map a -> x(a,t): integrate from (a, I, 0) to time t >= 0.
TrajectoryState flow_map(const FlowField& field, const Vec3& a, double t,
                         const IntegratorConfig& cfg);

/// Label recovery: the a with flow_map(a,t) ~ x, by backward integration of
/// the characteristic equation from (x,t) to time 0.
Vec3 inverse_map(const FlowField& field, const Vec3& x, double t, const IntegratorConfig& cfg);

/// |det J - rho0(a)/rho(x,t)|, the discrete mass-conservation defect.
/// Throws NumericError if the density is not positive.
double mass_conservation_check(const FlowField& field, const Vec3& a, double t,
                               const IntegratorConfig& cfg);

}  // namespace lfd
