#pragma once

#include <map>
#include <string>
#include <vector>

#include "lfd/flow_field.hpp"

namespace lfd {

/// Exact steady Beltrami field u = (A sin z + C cos y, B sin x + A cos z,
/// C sin y + B cos x) on the periodic box, with curl u = u and
/// p = p0 - |u|^2/2. Throws on all-zero coefficients.
FlowField make_abc(double A, double B, double C);

/// Solid-body rotation about the z axis: u = (-omega y, omega x, 0),
/// p = rho omega^2 (x^2+y^2)/2, vorticity (0,0,2 omega).
FlowField make_rigid_rotation(double omega);

/// Steady planar Taylor-Green cell: u = (sin x cos y, -cos x sin y, 0),
/// p = -(cos 2x + cos 2y)/4, omega = (0,0,2 sin x sin y).
FlowField make_planar_taylor_green();

/// Irrotational linear strain u = (alpha x, beta y, gamma z); requires
/// alpha + beta + gamma = 0 (incompressibility) and carries
/// p = -(alpha^2 x^2 + beta^2 y^2 + gamma^2 z^2)/2.
FlowField make_linear_strain(double alpha, double beta, double gamma);

/// Parallel shear layer u = (0, sin x, 0) with uniform pressure; carries the
/// exactly known material Clebsch pair used by the clebsch verifiers.
FlowField make_shear(const std::string& profile = "sin");

/// Uniform free expansion u = x/(1+t), rho(t) = rho0/(1+t)^3, p = K rho^gamma:
/// an exact time-dependent barotropic Euler solution with V = 0. Only valid
/// for t > -1.
FlowField make_free_expansion(double rho0, const BarotropicClosure& closure);

/// Residual of the momentum equation d_t u + u.grad u - grad V + grad p / rho
/// at (x,t). Time and pressure/potential derivatives by 4th-order central
/// differences; u.grad u uses the analytic gradient when present.
Vec3 euler_residual(const FlowField& field, const Vec3& x, double t, double fd_step = 1e-3);

/// Catalog lookup by name ("abc", "rigid", "ptg", "strain", "shear",
/// "expansion") with a parameter map; unknown keys in `params` are rejected.
FlowField make_field(const std::string& name, const std::map<std::string, double>& params = {});

/// Names accepted by make_field, with their parameters and defaults.
std::vector<std::string> catalog_summaries();

}  // namespace lfd
