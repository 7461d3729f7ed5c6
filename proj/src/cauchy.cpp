#include "lfd/cauchy.hpp"

#include <stdexcept>

namespace lfd {

Vec3 cauchy_invariant_from_state(const FlowField& field, const TrajectoryState& state) {
    const Mat3 K = field.gradient(state.x, state.t) * state.J;
    Vec3 inv{0.0, 0.0, 0.0};
    for (int k = 0; k < 3; ++k) inv += cross(K.row(k), state.J.row(k));
    return inv;
}

Vec3 initial_vorticity(const FlowField& field, const Vec3& a) {
    return field.vorticity(a, 0.0);
}

CauchyRecord cauchy_invariant(const FlowField& field, const Vec3& a, double t,
                              const IntegratorConfig& cfg) {
    if (t < 0.0) throw std::invalid_argument("cauchy_invariant: t must be >= 0");
    const TrajectoryState s = flow_map(field, a, t, cfg);
    CauchyRecord rec;
    rec.a = a;
    rec.t = t;
    rec.invariant = cauchy_invariant_from_state(field, s);
    rec.omega0 = initial_vorticity(field, a);
    rec.drift = norm(rec.invariant - rec.omega0);
    return rec;
}

Vec3 cauchy_vorticity(const FlowField& field, const Vec3& a, double t,
                      const IntegratorConfig& cfg) {
    if (t < 0.0) throw std::invalid_argument("cauchy_vorticity: t must be >= 0");
    const TrajectoryState s = flow_map(field, a, t, cfg);
    const double d = det(s.J);
    if (!(d > 0.0)) throw NumericError("cauchy_vorticity: det J <= 0");
    return (s.J * initial_vorticity(field, a)) / d;
}

std::vector<CauchyRecord> invariant_drift_series(const FlowField& field,
                                                 const std::vector<Vec3>& seeds,
                                                 const std::vector<double>& times,
                                                 const IntegratorConfig& cfg) {
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && times[i] <= times[i - 1]))
            throw std::invalid_argument("invariant_drift_series: times must be ascending, >= 0");
    }
    std::vector<CauchyRecord> records;
    records.reserve(seeds.size() * times.size());
    for (const Vec3& seed : seeds) {
        const Vec3 omega0 = initial_vorticity(field, seed);
        TrajectoryState s = TrajectoryState::initial(seed);
        for (double t : times) {
            s = advance(s, field, cfg, t - s.t);
            CauchyRecord rec;
            rec.a = seed;
            rec.t = t;
            rec.invariant = cauchy_invariant_from_state(field, s);
            rec.omega0 = omega0;
            rec.drift = norm(rec.invariant - omega0);
            records.push_back(rec);
        }
    }
    return records;
}

}  // namespace lfd
