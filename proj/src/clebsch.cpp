#include "lfd/clebsch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lfd/fd.hpp"
#include "lfd/halton.hpp"

namespace lfd {

namespace {

/// Sample coordinates along one axis: the periodic box uses [0, 2pi) without
/// the duplicate endpoint, unbounded fields use [-1, 1] inclusive.
std::vector<double> axis_coords(Domain domain, int grid) {
    std::vector<double> c(grid);
    if (domain == Domain::PeriodicBox) {
        for (int i = 0; i < grid; ++i) c[i] = kTwoPi * i / grid;
    } else {
        for (int i = 0; i < grid; ++i) c[i] = -1.0 + 2.0 * i / (grid - 1);
    }
    return c;
}

/// Cumulative midpoint integrals I(c) = integral_0^c f for every c in coords.
std::vector<double> cumulative_from_zero(const std::vector<double>& coords,
                                         const std::function<double(double)>& f,
                                         int steps_per_unit) {
    auto segment = [&](double a, double b) {
        const int m = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) * steps_per_unit)));
        const double h = (b - a) / m;
        double acc = 0.0;
        for (int q = 0; q < m; ++q) acc += f(a + (q + 0.5) * h);
        return acc * h;
    };
    const int n = static_cast<int>(coords.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return coords[a] < coords[b]; });
    std::vector<double> out(n, 0.0);
    // walk upward from 0 over non-negative coords, downward over negative ones
    double acc = 0.0, from = 0.0;
    for (int idx : order) {
        if (coords[idx] < 0.0) continue;
        acc += segment(from, coords[idx]);
        from = coords[idx];
        out[idx] = acc;
    }
    acc = 0.0;
    from = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (coords[*it] >= 0.0) continue;
        acc += segment(from, coords[*it]);
        from = coords[*it];
        out[*it] = acc;
    }
    return out;
}

/// Gauge field F on the grid at one time instant, reconstructed by midpoint
/// line integration of w = u - phi grad psi along the axis-aligned path
/// (0,0,0) -> (x,0,0) -> (x,y,0) -> (x,y,z).
std::vector<double> gauge_on_grid(const ClebschCandidate& cand, const FlowField& field,
                                  const std::vector<double>& xs, double t, int steps_per_unit) {
    auto w = [&](const Vec3& p) {
        return field.velocity(p, t) - cand.phi(p, t) * cand.psi_gradient(p, t);
    };
    const int g = static_cast<int>(xs.size());
    std::vector<double> F(g * g * g, 0.0);
    const std::vector<double> lx = cumulative_from_zero(
        xs, [&](double s) { return w({s, 0.0, 0.0}).x; }, steps_per_unit);
    for (int i = 0; i < g; ++i) {
        const std::vector<double> ly = cumulative_from_zero(
            xs, [&](double s) { return w({xs[i], s, 0.0}).y; }, steps_per_unit);
        for (int j = 0; j < g; ++j) {
            const std::vector<double> lz = cumulative_from_zero(
                xs, [&](double s) { return w({xs[i], xs[j], s}).z; }, steps_per_unit);
            for (int k = 0; k < g; ++k) F[(i * g + j) * g + k] = lx[i] + ly[j] + lz[k];
        }
    }
    return F;
}

}  // namespace

Vec3 ClebschCandidate::phi_gradient(const Vec3& x, double t, double fd_step) const {
    if (grad_phi) return grad_phi(x, t);
    return fd::gradient4(phi, x, t, fd_step);
}

Vec3 ClebschCandidate::psi_gradient(const Vec3& x, double t, double fd_step) const {
    if (grad_psi) return grad_psi(x, t);
    return fd::gradient4(psi, x, t, fd_step);
}

double verify_material_invariance(const ClebschCandidate& cand, const FlowField& field,
                                  const std::vector<Vec3>& seeds, double t_max,
                                  const IntegratorConfig& cfg, int n_samples) {
    if (t_max < 0.0)
        throw std::invalid_argument("verify_material_invariance: t_max must be >= 0");
    double worst = 0.0;
    for (const Vec3& a : seeds) {
        const double phi0 = cand.phi(a, 0.0);
        const double psi0 = cand.psi(a, 0.0);
        TrajectoryState s = TrajectoryState::initial(a);
        for (int k = 1; k <= n_samples; ++k) {
            const double t = t_max * k / n_samples;
            s = advance(s, field, cfg, t - s.t);
            worst = std::max(worst, std::abs(cand.phi(s.x, t) - phi0));
            worst = std::max(worst, std::abs(cand.psi(s.x, t) - psi0));
        }
    }
    return worst;
}

double verify_vorticity_factorization(const ClebschCandidate& cand, const FlowField& field,
                                      double t, int grid) {
    if (grid < 8) throw std::invalid_argument("verify_vorticity_factorization: grid must be >= 8");
    const auto coords = axis_coords(field.domain, grid);
    double worst = 0.0;
    for (double x : coords)
        for (double y : coords)
            for (double z : coords) {
                const Vec3 p{x, y, z};
                const Vec3 omega = field.vorticity(p, t);
                const Vec3 pfaff = cross(cand.phi_gradient(p, t), cand.psi_gradient(p, t));
                const Vec3 r = omega - pfaff;
                if (!is_finite(r))
                    throw NumericError("verify_vorticity_factorization: non-finite gradients");
                worst = std::max(worst, norm(r));
            }
    return worst;
}

double verify_gauge_existence(const ClebschCandidate& cand, const FlowField& field, double t,
                              int grid) {
    if (grid < 8) throw std::invalid_argument("verify_gauge_existence: grid must be >= 8");
    const auto coords = axis_coords(field.domain, grid);
    auto w = [&](const Vec3& p, double s) {
        return field.velocity(p, s) - cand.phi(p, s) * cand.psi_gradient(p, s);
    };
    double worst = 0.0;
    for (double x : coords)
        for (double y : coords)
            for (double z : coords) {
                const Vec3 r = fd::curl4(w, Vec3{x, y, z}, t, 1e-3);
                if (!is_finite(r))
                    throw NumericError("verify_gauge_existence: non-finite evaluation");
                worst = std::max(worst, norm(r));
            }
    return worst;
}

double clebsch8_identity_check(const ClebschCandidate& cand, const FlowField& field, double t,
                               int grid, double gauge_tol, int midpoint_steps_per_unit) {
    const double gauge_residual = verify_gauge_existence(cand, field, t, grid);
    if (gauge_residual > gauge_tol)
        throw NumericError("clebsch8_identity_check: gauge existence residual "
                           + std::to_string(gauge_residual) + " above tolerance, F ill-defined");
    const auto coords = axis_coords(field.domain, grid);
    const double dt = 1e-4;
    const auto f_plus = gauge_on_grid(cand, field, coords, t + dt, midpoint_steps_per_unit);
    const auto f_minus = gauge_on_grid(cand, field, coords, t - dt, midpoint_steps_per_unit);
    const int g = grid;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            for (int k = 0; k < g; ++k) {
                const Vec3 p{coords[i], coords[j], coords[k]};
                const size_t idx = (static_cast<size_t>(i) * g + j) * g + k;
                const double dF = (f_plus[idx] - f_minus[idx]) / (2 * dt);
                const double dpsi = (cand.psi(p, t + dt) - cand.psi(p, t - dt)) / (2 * dt);
                const Vec3 u = field.velocity(p, t);
                const double bracket = field.force_potential(p, t) - field.pressure(p, t)
                                     - 0.5 * dot(u, u) - dF - cand.phi(p, t) * dpsi;
                lo = std::min(lo, bracket);
                hi = std::max(hi, bracket);
            }
    return hi - lo;
}

HelicityReport helicity(const FlowField& field, double t, int n_per_axis) {
    if (field.domain != Domain::PeriodicBox)
        throw std::invalid_argument("helicity: field is not periodic on the box");
    if (n_per_axis < 16) throw std::invalid_argument("helicity: n_per_axis must be >= 16");
    const double h = kTwoPi / n_per_axis;
    double acc = 0.0;
    for (int i = 0; i < n_per_axis; ++i)
        for (int j = 0; j < n_per_axis; ++j)
            for (int k = 0; k < n_per_axis; ++k) {
                const Vec3 p{h * i, h * j, h * k};
                acc += dot(field.velocity(p, t), field.vorticity(p, t));
            }
    HelicityReport report;
    report.value = acc * h * h * h;
    report.quadrature_points = n_per_axis;
    report.obstruction = std::abs(report.value) > 1e-6 * kBoxVolume;
    return report;
}

ClebschVerdict obstruction_report(const FlowField& field, const ClebschCandidate* cand,
                                  const ClebschCheckConfig& cfg) {
    const HelicityReport rep = helicity(field, cfg.check_time, cfg.helicity_points);
    ClebschVerdict v;
    v.helicity_value = rep.value;
    v.obstruction = rep.obstruction;
    bool all_pass = false;
    if (cand) {
        const auto seeds = halton_box(cfg.seeds, 0.0, kTwoPi);
        v.material_residual =
            verify_material_invariance(*cand, field, seeds, cfg.t_max, cfg.integrator);
        v.factorization_residual =
            verify_vorticity_factorization(*cand, field, cfg.check_time, cfg.grid);
        v.gauge_residual = verify_gauge_existence(*cand, field, cfg.check_time, cfg.grid);
        if (cfg.run_clebsch8)
            v.clebsch8_residual =
                clebsch8_identity_check(*cand, field, cfg.check_time, cfg.grid);
        all_pass = *v.material_residual <= cfg.tolerance
                && *v.factorization_residual <= cfg.tolerance
                && *v.gauge_residual <= cfg.tolerance
                && (!v.clebsch8_residual || *v.clebsch8_residual <= cfg.tolerance);
    }
    if (v.obstruction) {
        v.verdict = "helicity nonzero beyond threshold: no globally defined single Clebsch pair "
                    "with single-valued gauge F exists on the periodic box";
    } else if (cand && all_pass) {
        v.verdict = "no obstruction detected; candidate '" + cand->name
                  + "' passes material, factorization and gauge checks";
    } else if (cand) {
        v.verdict = "no obstruction detected; candidate '" + cand->name
                  + "' fails one or more residual checks";
    } else {
        v.verdict = "no obstruction detected (existence of a global pair not established)";
    }
    return v;
}

ClebschCandidate make_candidate(const std::string& name) {
    ClebschCandidate c;
    c.name = name;
    if (name == "shear_material") {
        c.field_name = "shear";
        c.phi = [](const Vec3& x, double) { return x.x; };
        c.grad_phi = [](const Vec3&, double) -> Vec3 { return {1.0, 0.0, 0.0}; };
        c.psi = [](const Vec3& x, double t) {
            return std::cos(x.x) * (x.y - t * std::sin(x.x));
        };
        c.grad_psi = [](const Vec3& x, double t) -> Vec3 {
            const double s = std::sin(x.x), co = std::cos(x.x);
            return {-s * (x.y - t * s) - t * co * co, co, 0.0};
        };
        return c;
    }
    if (name == "axes") {
        c.phi = [](const Vec3& x, double) { return x.x; };
        c.grad_phi = [](const Vec3&, double) -> Vec3 { return {1.0, 0.0, 0.0}; };
        c.psi = [](const Vec3& x, double) { return x.y; };
        c.grad_psi = [](const Vec3&, double) -> Vec3 { return {0.0, 1.0, 0.0}; };
        return c;
    }
    if (name == "zero") {
        c.phi = [](const Vec3&, double) { return 0.0; };
        c.grad_phi = [](const Vec3&, double) -> Vec3 { return {0.0, 0.0, 0.0}; };
        c.psi = [](const Vec3&, double) { return 0.0; };
        c.grad_psi = [](const Vec3&, double) -> Vec3 { return {0.0, 0.0, 0.0}; };
        return c;
    }
    throw std::invalid_argument("unknown Clebsch candidate '" + name
                                + "' (expected shear_material|axes|zero)");
}

}  // namespace lfd
