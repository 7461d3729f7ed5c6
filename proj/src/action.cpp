#include "lfd/action.hpp"

#include <cmath>
#include <stdexcept>

#include "lfd/fd.hpp"

namespace lfd {

namespace {

double trapezoid(const std::vector<double>& times, const std::function<double(int)>& f) {
    const int n = static_cast<int>(times.size());
    double acc = 0.0;
    for (int k = 0; k + 1 < n; ++k) acc += 0.5 * (times[k + 1] - times[k]) * (f(k) + f(k + 1));
    return acc;
}

/// Position increment of a single RK4 step of (possibly negative) size h from
/// the given state; returned separately from the base position so that the
/// second difference of adjacent steps does not lose precision.
Vec3 rk4_increment(const FlowField& field, const TrajectoryState& s, double h) {
    const Vec3 k1 = field.velocity(s.x, s.t);
    const Vec3 k2 = field.velocity(s.x + (h / 2) * k1, s.t + h / 2);
    const Vec3 k3 = field.velocity(s.x + (h / 2) * k2, s.t + h / 2);
    const Vec3 k4 = field.velocity(s.x + h * k3, s.t + h);
    return (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

ParticleEnsemble block_ensemble(const Vec3& lo, const Vec3& hi, int n_per_axis,
                                const FlowField* field_for_rho0) {
    if (n_per_axis < 1) throw std::invalid_argument("block_ensemble: n_per_axis must be >= 1");
    ParticleEnsemble ens;
    const Vec3 span = hi - lo;
    const double cell_volume =
        (span.x / n_per_axis) * (span.y / n_per_axis) * (span.z / n_per_axis);
    if (!(cell_volume > 0.0)) throw std::invalid_argument("block_ensemble: empty block");
    for (int i = 0; i < n_per_axis; ++i)
        for (int j = 0; j < n_per_axis; ++j)
            for (int k = 0; k < n_per_axis; ++k) {
                const Vec3 a{lo.x + span.x * (i + 0.5) / n_per_axis,
                             lo.y + span.y * (j + 0.5) / n_per_axis,
                             lo.z + span.z * (k + 0.5) / n_per_axis};
                const double rho0 = field_for_rho0 ? field_for_rho0->density(a, 0.0) : 1.0;
                ens.labels.push_back(a);
                ens.weights.push_back(rho0 * cell_volume);
            }
    return ens;
}

DiscreteTrajectory integrate_trajectories(const FlowField& field, const ParticleEnsemble& ens,
                                          double T, int n_steps, const IntegratorConfig& cfg) {
    if (n_steps < 2) throw std::invalid_argument("integrate_trajectories: n_steps must be >= 2");
    if (!(T > 0.0)) throw std::invalid_argument("integrate_trajectories: T must be > 0");
    DiscreteTrajectory traj;
    traj.times.resize(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) traj.times[k] = T * k / n_steps;
    traj.positions.resize(ens.size());
    traj.velocities.resize(ens.size());
    for (int a = 0; a < ens.size(); ++a) {
        traj.positions[a].resize(n_steps + 1);
        traj.velocities[a].resize(n_steps + 1);
        TrajectoryState s = TrajectoryState::initial(ens.labels[a]);
        for (int k = 0; k <= n_steps; ++k) {
            s = advance(s, field, cfg, traj.times[k] - s.t);
            traj.positions[a][k] = s.x;
            traj.velocities[a][k] = field.velocity(s.x, s.t);
        }
    }
    return traj;
}

double omega_potential(const FlowField& field, const Vec3& x, double t) {
    const double V = field.force_potential(x, t);
    const double p = field.pressure(x, t);
    if (field.closure) {
        if (!(p > 0.0)) throw NumericError("omega_potential: p <= 0");
        return V - field.closure->enthalpy(p);
    }
    return V - p / field.density(x, t);
}

double discrete_action(const ParticleEnsemble& ens, const DiscreteTrajectory& traj,
                       const FlowField& field) {
    const int n = static_cast<int>(traj.times.size());
    if (ens.size() != static_cast<int>(traj.positions.size()))
        throw std::invalid_argument("discrete_action: ensemble/trajectory size mismatch");
    // velocities must match centered differences of the positions
    for (int a = 0; a < ens.size(); ++a)
        for (int k = 1; k + 1 < n; k += std::max(1, n / 8)) {
            const double dt = traj.times[k + 1] - traj.times[k - 1];
            const Vec3 fd_v = (traj.positions[a][k + 1] - traj.positions[a][k - 1]) / dt;
            if (norm(fd_v - traj.velocities[a][k]) > 1e-4)
                throw std::invalid_argument(
                    "discrete_action: velocities inconsistent with positions");
        }
    double action = 0.0;
    for (int a = 0; a < ens.size(); ++a) {
        const double integral = trapezoid(traj.times, [&](int k) {
            const Vec3& v = traj.velocities[a][k];
            return 0.5 * dot(v, v)
                 + omega_potential(field, traj.positions[a][k], traj.times[k]);
        });
        action += ens.weights[a] * integral;
    }
    return action;
}

Perturbation bump_perturbation(const Vec3& direction, const Vec3& wave, double phase, double T) {
    const double pi = kTwoPi / 2.0;
    Perturbation p;
    p.value = [=](const Vec3& a, double t) -> Vec3 {
        const double bump = std::sin(pi * t / T) * std::sin(pi * t / T);
        return bump * std::cos(dot(wave, a) + phase) * direction;
    };
    p.rate = [=](const Vec3& a, double t) -> Vec3 {
        const double dbump = (pi / T) * std::sin(2.0 * pi * t / T);
        return dbump * std::cos(dot(wave, a) + phase) * direction;
    };
    return p;
}

double first_variation(const ParticleEnsemble& ens, const DiscreteTrajectory& traj,
                       const FlowField& field, const Perturbation& pert, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("first_variation: eps must be > 0");
    if (ens.size() > 0) {
        const Vec3 at0 = pert.value(ens.labels.front(), traj.times.front());
        const Vec3 atT = pert.value(ens.labels.front(), traj.times.back());
        if (norm(at0) > 1e-12 || norm(atT) > 1e-12)
            throw std::invalid_argument(
                "first_variation: perturbation must vanish at the endpoint times");
    }
    auto shifted = [&](double sign) {
        DiscreteTrajectory t2 = traj;
        for (int a = 0; a < ens.size(); ++a)
            for (size_t k = 0; k < traj.times.size(); ++k) {
                const double t = traj.times[k];
                t2.positions[a][k] += sign * eps * pert.value(ens.labels[a], t);
                t2.velocities[a][k] += sign * eps * pert.rate(ens.labels[a], t);
            }
        return discrete_action(ens, t2, field);
    };
    return (shifted(+1.0) - shifted(-1.0)) / (2.0 * eps);
}

Vec3 euler_lagrange_residual(const FlowField& field, const Vec3& a, double t,
                             const IntegratorConfig& cfg) {
    const double delta = 1e-4;
    TrajectoryState s = TrajectoryState::initial(a);
    s = advance_to(s, field, cfg, t);
    const Vec3 inc_plus = rk4_increment(field, s, delta);
    const Vec3 inc_minus = rk4_increment(field, s, -delta);
    const Vec3 xddot = (inc_plus + inc_minus) / (delta * delta);
    const Vec3 grad_omega =
        fd::gradient4([&](const Vec3& p, double s_) { return omega_potential(field, p, s_); },
                      s.x, t, 1e-3);
    return xddot - grad_omega;
}

double residual_pairing(const ParticleEnsemble& ens, const DiscreteTrajectory& traj,
                        const FlowField& field, const Perturbation& pert,
                        const IntegratorConfig& cfg) {
    const double delta = 1e-4;
    double acc = 0.0;
    for (int a = 0; a < ens.size(); ++a) {
        TrajectoryState s = TrajectoryState::initial(ens.labels[a]);
        std::vector<double> f(traj.times.size());
        for (size_t k = 0; k < traj.times.size(); ++k) {
            const double t = traj.times[k];
            s = advance_to(s, field, cfg, t);
            const Vec3 xddot =
                (rk4_increment(field, s, delta) + rk4_increment(field, s, -delta))
                / (delta * delta);
            const Vec3 grad_omega = fd::gradient4(
                [&](const Vec3& p, double s_) { return omega_potential(field, p, s_); }, s.x, t,
                1e-3);
            f[k] = dot(xddot - grad_omega, pert.value(ens.labels[a], t));
        }
        acc += ens.weights[a]
             * trapezoid(traj.times, [&](int k) { return f[k]; });
    }
    return acc;
}

}  // namespace lfd
