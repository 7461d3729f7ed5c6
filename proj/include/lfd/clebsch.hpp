#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lfd/flow_map.hpp"

namespace lfd {

/// A pair of scalar fields (phi, psi) proposed as Clebsch variables for a
/// flow: materially invariant, with omega = grad phi x grad psi and
/// u = grad F + phi grad psi for some single-valued gauge F.
struct ClebschCandidate {
    std::string name;
    std::function<double(const Vec3&, double)> phi;
    std::function<double(const Vec3&, double)> psi;
    std::function<Vec3(const Vec3&, double)> grad_phi;  // optional
    std::function<Vec3(const Vec3&, double)> grad_psi;  // optional
    std::string field_name;

    Vec3 phi_gradient(const Vec3& x, double t, double fd_step = 1e-3) const;
    Vec3 psi_gradient(const Vec3& x, double t, double fd_step = 1e-3) const;
};

struct HelicityReport {
    double value = 0.0;          // integral of u . curl u over the periodic box
    int quadrature_points = 0;   // per axis
    bool obstruction = false;    // |value| > 1e-6 * box volume
};

/// Max over seeds and sampled times (n_samples uniform subdivisions of
/// [0, t_max]) of |phi(x(a,t),t) - phi(a,0)| and the psi analogue.
double verify_material_invariance(const ClebschCandidate& cand, const FlowField& field,
                                  const std::vector<Vec3>& seeds, double t_max,
                                  const IntegratorConfig& cfg, int n_samples = 8);

/// Max over a grid^3 sample of |curl u - grad phi x grad psi| at time t.
double verify_vorticity_factorization(const ClebschCandidate& cand, const FlowField& field,
                                      double t, int grid);

/// Max over a grid^3 sample of |curl(u - phi grad psi)| at time t; a vanishing
/// curl is the existence condition for the gauge F on a simply-connected
/// domain.
double verify_gauge_existence(const ClebschCandidate& cand, const FlowField& field, double t,
                              int grid);

/// Spatial-uniformity residual (max - min over the grid) of the scalar
/// V - p - |u|^2/2 - dF/dt - phi dpsi/dt, checked in the materially-invariant
/// gauge where it must be spatially uniform. F is reconstructed by midpoint
/// line integration of u - phi grad psi along axis-aligned paths from the
/// origin; time derivatives are centered differences with step 1e-4.
/// Throws NumericError if the gauge-existence residual exceeds gauge_tol.
double clebsch8_identity_check(const ClebschCandidate& cand, const FlowField& field, double t,
                               int grid, double gauge_tol = 1e-6,
                               int midpoint_steps_per_unit = 16000);

/// Helicity integral of u . curl u over the periodic box by the rectangle
/// rule (spectrally accurate for smooth periodic fields). n_per_axis >= 16.
/// Throws std::invalid_argument for non-periodic fields.
HelicityReport helicity(const FlowField& field, double t, int n_per_axis);

struct ClebschVerdict {
    std::optional<double> material_residual;
    std::optional<double> factorization_residual;
    std::optional<double> gauge_residual;
    std::optional<double> clebsch8_residual;
    double helicity_value = 0.0;
    bool obstruction = false;
    std::string verdict;
};

struct ClebschCheckConfig {
    int grid = 16;
    int helicity_points = 64;
    int seeds = 32;
    double t_max = 1.0;
    double check_time = 0.0;
    double tolerance = 1e-6;
    bool run_clebsch8 = false;
    IntegratorConfig integrator{};
};

/// Helicity-based obstruction verdict for a periodic field, optionally
/// exercising the three residual checks (plus clebsch8) on a candidate pair.
/// Nonzero helicity rules out any global single pair with single-valued F;
/// zero helicity is only the absence of this obstruction, not an existence
/// proof.
ClebschVerdict obstruction_report(const FlowField& field, const ClebschCandidate* cand,
                                  const ClebschCheckConfig& cfg);

/// Named candidates used by tests and the harness:
///  "shear_material" - phi = x1, psi = cos(x1) (x2 - t sin x1) for the shear
///                     field (exactly material);
///  "axes"           - phi = x1, psi = x2 (not material for shear; detector
///                     fodder);
///  "zero"           - phi = psi = 0.
ClebschCandidate make_candidate(const std::string& name);

}  // namespace lfd
