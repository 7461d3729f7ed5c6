#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "lfd/fd.hpp"
#include "lfd/geometry3.hpp"

namespace lfd {

/// Error raised when a field or trajectory evaluation leaves its domain of
/// validity or produces non-finite values.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Barotropic pressure-density closure rho = phi(p) = (p/K)^(1/gamma) with
/// enthalpy f(p) = integral dp/phi(p) = (gamma/(gamma-1)) K^(1/gamma) p^((gamma-1)/gamma).
struct BarotropicClosure {
    double gamma;
    double K;

    BarotropicClosure(double gamma_, double K_) : gamma(gamma_), K(K_) {
        if (!(gamma > 1.0)) throw std::invalid_argument("BarotropicClosure: gamma must be > 1");
        if (!(K > 0.0)) throw std::invalid_argument("BarotropicClosure: K must be > 0");
    }

    double density_of_pressure(double p) const { return std::pow(p / K, 1.0 / gamma); }

    double pressure_of_density(double rho) const { return K * std::pow(rho, gamma); }

    double enthalpy(double p) const {
        if (!(p > 0.0)) throw NumericError("BarotropicClosure::enthalpy: p <= 0");
        return gamma / (gamma - 1.0) * std::pow(K, 1.0 / gamma)
             * std::pow(p, (gamma - 1.0) / gamma);
    }
};

enum class Domain {
    PeriodicBox,  // [0, 2*pi)^3, velocity evaluation wraps analytically
    AllSpace,
};

/// An analytic space-time velocity field with pressure, density and external
/// force potential. Every catalog entry is an exact Euler solution; values
/// are immutable after construction and safe for concurrent reads.
struct FlowField {
    std::string name;
    std::function<Vec3(const Vec3&, double)> velocity;
    std::function<Mat3(const Vec3&, double)> velocity_gradient;  // optional, may be empty
    std::function<double(const Vec3&, double)> pressure;
    std::function<double(const Vec3&, double)> density;
    std::function<double(const Vec3&, double)> force_potential;
    bool is_steady = true;
    bool is_incompressible = true;
    std::optional<BarotropicClosure> closure;
    Domain domain = Domain::PeriodicBox;

    bool has_analytic_gradient() const { return static_cast<bool>(velocity_gradient); }

    /// Velocity gradient: analytic when available, else 4th-order central FD.
    Mat3 gradient(const Vec3& x, double t, double fd_step = 1e-3) const {
        if (velocity_gradient) return velocity_gradient(x, t);
        return fd::jacobian4(velocity, x, t, fd_step);
    }

    Vec3 vorticity(const Vec3& x, double t, double fd_step = 1e-3) const {
        return curl_from_gradient(gradient(x, t, fd_step));
    }
};

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kBoxVolume = kTwoPi * kTwoPi * kTwoPi;

}  // namespace lfd
