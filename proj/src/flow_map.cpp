#include "lfd/flow_map.hpp"

#include <cmath>

namespace lfd {

namespace {

struct Deriv {
    Vec3 dx;
    Mat3 dJ;
};

Deriv eval(const FlowField& field, const Vec3& x, const Mat3& J, double t) {
    return {field.velocity(x, t), field.gradient(x, t) * J};
}

/// One RK4 step of size h (h may be negative).
void rk4_step(TrajectoryState& s, const FlowField& field, double h) {
    const Deriv k1 = eval(field, s.x, s.J, s.t);
    const Deriv k2 = eval(field, s.x + (h / 2) * k1.dx, s.J + (h / 2) * k1.dJ, s.t + h / 2);
    const Deriv k3 = eval(field, s.x + (h / 2) * k2.dx, s.J + (h / 2) * k2.dJ, s.t + h / 2);
    const Deriv k4 = eval(field, s.x + h * k3.dx, s.J + h * k3.dJ, s.t + h);
    s.x += (h / 6) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    s.J += (h / 6) * (k1.dJ + 2.0 * k2.dJ + 2.0 * k3.dJ + k4.dJ);
    s.t += h;
    if (!is_finite(s.x) || !is_finite(s.J))
        throw NumericError("integrator: trajectory left domain of validity (non-finite state)");
    if (!(det(s.J) > 0.0))
        throw NumericError("integrator: tangent map lost orientation (det J <= 0)");
}

}  // namespace

TrajectoryState advance_to(const TrajectoryState& state, const FlowField& field,
                           const IntegratorConfig& cfg, double t_target) {
    cfg.validate();
    TrajectoryState s = state;
    const double span = t_target - s.t;
    if (span == 0.0) return s;
    const double dir = span > 0.0 ? 1.0 : -1.0;
    const double h = dir * cfg.h;
    const long n_full = static_cast<long>(std::floor(std::abs(span) / cfg.h + 1e-12));
    const double t0 = s.t;
    for (long i = 0; i < n_full; ++i) {
        rk4_step(s, field, h);
        s.t = t0 + static_cast<double>(i + 1) * h;  // avoid accumulated drift
    }
    const double rest = t_target - s.t;
    if (std::abs(rest) > 1e-14 * (1.0 + std::abs(t_target))) rk4_step(s, field, rest);
    s.t = t_target;
    return s;
}

TrajectoryState advance(const TrajectoryState& state, const FlowField& field,
                        const IntegratorConfig& cfg, double dt) {
    if (dt < 0.0) throw std::invalid_argument("advance: negative dt");
    return advance_to(state, field, cfg, state.t + dt);
}

TrajectoryState flow_map(const FlowField& field, const Vec3& a, double t,
                         const IntegratorConfig& cfg) {
    if (t < 0.0) throw std::invalid_argument("flow_map: t must be >= 0");
    return advance(TrajectoryState::initial(a), field, cfg, t);
}

Vec3 inverse_map(const FlowField& field, const Vec3& x, double t, const IntegratorConfig& cfg) {
    if (t < 0.0) throw std::invalid_argument("inverse_map: t must be >= 0");
    if (t == 0.0) return x;
    TrajectoryState s{x, x, Mat3::identity(), t};
    s = advance_to(s, field, cfg, 0.0);
    return s.x;
}

double mass_conservation_check(const FlowField& field, const Vec3& a, double t,
                               const IntegratorConfig& cfg) {
    const TrajectoryState s = flow_map(field, a, t, cfg);
    const double rho0 = field.density(a, 0.0);
    const double rho = field.density(s.x, t);
    if (!(rho > 0.0) || !(rho0 > 0.0))
        throw NumericError("mass_conservation_check: density must be positive");
    return std::abs(det(s.J) - rho0 / rho);
}

}  // namespace lfd
