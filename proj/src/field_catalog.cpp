#include "lfd/field_catalog.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace lfd {

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown_params(const std::map<std::string, double>& params,
                           const std::set<std::string>& known, const std::string& field) {
    for (const auto& [key, value] : params) {
        (void)value;
        if (!known.count(key))
            throw std::invalid_argument("field '" + field + "': unknown parameter '" + key + "'");
    }
}

}  // namespace

FlowField make_abc(double A, double B, double C) {
    if (A == 0.0 && B == 0.0 && C == 0.0)
        throw std::invalid_argument("make_abc: degenerate field, all coefficients zero");
    FlowField f;
    f.name = "abc";
    f.velocity = [A, B, C](const Vec3& x, double) -> Vec3 {
        return {A * std::sin(x.z) + C * std::cos(x.y),
                B * std::sin(x.x) + A * std::cos(x.z),
                C * std::sin(x.y) + B * std::cos(x.x)};
    };
    f.velocity_gradient = [A, B, C](const Vec3& x, double) -> Mat3 {
        Mat3 g;
        g(0, 1) = -C * std::sin(x.y);
        g(0, 2) = A * std::cos(x.z);
        g(1, 0) = B * std::cos(x.x);
        g(1, 2) = -A * std::sin(x.z);
        g(2, 0) = -B * std::sin(x.x);
        g(2, 1) = C * std::cos(x.y);
        return g;
    };
    // p0 chosen so p >= 0 everywhere: |u|^2 <= A^2+B^2+C^2 + 2(|AB|+|BC|+|CA|)
    const double p0 =
        0.5 * (A * A + B * B + C * C) + std::abs(A * B) + std::abs(B * C) + std::abs(C * A);
    f.pressure = [A, B, C, p0, vel = f.velocity](const Vec3& x, double t) {
        Vec3 u = vel(x, t);
        return p0 - 0.5 * dot(u, u);
    };
    f.density = [](const Vec3&, double) { return 1.0; };
    f.force_potential = [](const Vec3&, double) { return 0.0; };
    f.is_steady = true;
    f.is_incompressible = true;
    f.domain = Domain::PeriodicBox;
    return f;
}

FlowField make_rigid_rotation(double omega) {
    if (!std::isfinite(omega)) throw std::invalid_argument("make_rigid_rotation: omega not finite");
    FlowField f;
    f.name = "rigid";
    f.velocity = [omega](const Vec3& x, double) -> Vec3 {
        return {-omega * x.y, omega * x.x, 0.0};
    };
    f.velocity_gradient = [omega](const Vec3&, double) -> Mat3 {
        Mat3 g;
        g(0, 1) = -omega;
        g(1, 0) = omega;
        return g;
    };
    f.pressure = [omega](const Vec3& x, double) {
        return 0.5 * omega * omega * (x.x * x.x + x.y * x.y);
    };
    f.density = [](const Vec3&, double) { return 1.0; };
    f.force_potential = [](const Vec3&, double) { return 0.0; };
    f.is_steady = true;
    f.is_incompressible = true;
    f.domain = Domain::AllSpace;
    return f;
}

FlowField make_planar_taylor_green() {
    FlowField f;
    f.name = "ptg";
    f.velocity = [](const Vec3& x, double) -> Vec3 {
        return {std::sin(x.x) * std::cos(x.y), -std::cos(x.x) * std::sin(x.y), 0.0};
    };
    f.velocity_gradient = [](const Vec3& x, double) -> Mat3 {
        Mat3 g;
        g(0, 0) = std::cos(x.x) * std::cos(x.y);
        g(0, 1) = -std::sin(x.x) * std::sin(x.y);
        g(1, 0) = std::sin(x.x) * std::sin(x.y);
        g(1, 1) = -std::cos(x.x) * std::cos(x.y);
        return g;
    };
    f.pressure = [](const Vec3& x, double) {
        return 0.25 * (std::cos(2 * x.x) + std::cos(2 * x.y));
    };
    f.density = [](const Vec3&, double) { return 1.0; };
    f.force_potential = [](const Vec3&, double) { return 0.0; };
    f.is_steady = true;
    f.is_incompressible = true;
    f.domain = Domain::PeriodicBox;
    return f;
}

FlowField make_linear_strain(double alpha, double beta, double gamma) {
    if (std::abs(alpha + beta + gamma) > 1e-12)
        throw std::invalid_argument(
            "make_linear_strain: alpha + beta + gamma must vanish (incompressibility)");
    FlowField f;
    f.name = "strain";
    f.velocity = [alpha, beta, gamma](const Vec3& x, double) -> Vec3 {
        return {alpha * x.x, beta * x.y, gamma * x.z};
    };
    f.velocity_gradient = [alpha, beta, gamma](const Vec3&, double) -> Mat3 {
        Mat3 g;
        g(0, 0) = alpha;
        g(1, 1) = beta;
        g(2, 2) = gamma;
        return g;
    };
    f.pressure = [alpha, beta, gamma](const Vec3& x, double) {
        return -0.5 * (alpha * alpha * x.x * x.x + beta * beta * x.y * x.y
                       + gamma * gamma * x.z * x.z);
    };
    f.density = [](const Vec3&, double) { return 1.0; };
    f.force_potential = [](const Vec3&, double) { return 0.0; };
    f.is_steady = true;
    f.is_incompressible = true;
    f.domain = Domain::AllSpace;
    return f;
}

FlowField make_shear(const std::string& profile) {
    if (profile != "sin")
        throw std::invalid_argument("make_shear: unknown profile '" + profile + "'");
    FlowField f;
    f.name = "shear";
    f.velocity = [](const Vec3& x, double) -> Vec3 { return {0.0, std::sin(x.x), 0.0}; };
    f.velocity_gradient = [](const Vec3& x, double) -> Mat3 {
        Mat3 g;
        g(1, 0) = std::cos(x.x);
        return g;
    };
    f.pressure = [](const Vec3&, double) { return 1.0; };
    f.density = [](const Vec3&, double) { return 1.0; };
    f.force_potential = [](const Vec3&, double) { return 0.0; };
    f.is_steady = true;
    f.is_incompressible = true;
    f.domain = Domain::PeriodicBox;
    return f;
}

FlowField make_free_expansion(double rho0, const BarotropicClosure& closure) {
    if (!(rho0 > 0.0)) throw std::invalid_argument("make_free_expansion: rho0 must be > 0");
    auto check_time = [](double t) {
        if (t <= -1.0) throw NumericError("free expansion: evaluation at t <= -1");
    };
    FlowField f;
    f.name = "expansion";
    f.velocity = [check_time](const Vec3& x, double t) -> Vec3 {
        check_time(t);
        return x / (1.0 + t);
    };
    f.velocity_gradient = [check_time](const Vec3&, double t) -> Mat3 {
        check_time(t);
        return (1.0 / (1.0 + t)) * Mat3::identity();
    };
    f.density = [rho0, check_time](const Vec3&, double t) {
        check_time(t);
        const double s = 1.0 + t;
        return rho0 / (s * s * s);
    };
    f.pressure = [cl = closure, dens = f.density](const Vec3& x, double t) {
        return cl.pressure_of_density(dens(x, t));
    };
    f.force_potential = [](const Vec3&, double) { return 0.0; };
    f.is_steady = false;
    f.is_incompressible = false;
    f.closure = closure;
    f.domain = Domain::AllSpace;
    return f;
}

Vec3 euler_residual(const FlowField& field, const Vec3& x, double t, double fd_step) {
    if (!(fd_step > 0.0)) throw std::invalid_argument("euler_residual: fd_step must be > 0");
    const Vec3 u = field.velocity(x, t);
    Vec3 dudt{0.0, 0.0, 0.0};
    if (!field.is_steady)
        dudt = fd::derivative4_vec([&](double s) { return field.velocity(x, s); }, t, fd_step);
    const Mat3 g = field.gradient(x, t, fd_step);
    const Vec3 advection = g * u;
    const Vec3 grad_v = fd::gradient4(field.force_potential, x, t, fd_step);
    const Vec3 grad_p = fd::gradient4(field.pressure, x, t, fd_step);
    const double rho = field.density(x, t);
    const Vec3 r = dudt + advection - grad_v + grad_p / rho;
    if (!is_finite(r)) throw NumericError("euler_residual: non-finite evaluation");
    return r;
}

FlowField make_field(const std::string& name, const std::map<std::string, double>& params) {
    if (name == "abc") {
        reject_unknown_params(params, {"A", "B", "C"}, name);
        return make_abc(param_or(params, "A", 1.0), param_or(params, "B", 1.0),
                        param_or(params, "C", 1.0));
    }
    if (name == "rigid") {
        reject_unknown_params(params, {"omega"}, name);
        return make_rigid_rotation(param_or(params, "omega", 1.0));
    }
    if (name == "ptg") {
        reject_unknown_params(params, {}, name);
        return make_planar_taylor_green();
    }
    if (name == "strain") {
        reject_unknown_params(params, {"alpha", "beta", "gamma"}, name);
        return make_linear_strain(param_or(params, "alpha", 1.0), param_or(params, "beta", 1.0),
                                  param_or(params, "gamma", -2.0));
    }
    if (name == "shear") {
        reject_unknown_params(params, {}, name);
        return make_shear();
    }
    if (name == "expansion") {
        reject_unknown_params(params, {"rho0", "gamma", "K"}, name);
        return make_free_expansion(
            param_or(params, "rho0", 1.0),
            BarotropicClosure(param_or(params, "gamma", 2.0), param_or(params, "K", 1.0)));
    }
    throw std::invalid_argument("unknown field name '" + name
                                + "' (expected abc|rigid|ptg|strain|shear|expansion)");
}

std::vector<std::string> catalog_summaries() {
    return {
        "abc        A=1 B=1 C=1        steady Beltrami field, periodic box",
        "rigid      omega=1            solid-body rotation about z, all space",
        "ptg        (none)             planar Taylor-Green cell, periodic box",
        "strain     alpha=1 beta=1 gamma=-2   irrotational linear strain, all space",
        "shear      (none)             parallel shear layer u=(0,sin x,0), periodic box",
        "expansion  rho0=1 gamma=2 K=1 barotropic free expansion u=x/(1+t), all space",
    };
}

}  // namespace lfd
