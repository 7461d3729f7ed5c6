#pragma once

#include <string>
#include <vector>

#include "lfd/flow_map.hpp"

namespace lfd {

/// Closed material curve sampled at N markers, uniform in the loop parameter
/// s in [0,1) (marker i at s = i/N, marker N-1 connects back to marker 0).
/// All markers share a common time.
struct MaterialLoop {
    std::string id;
    std::vector<TrajectoryState> markers;

    int size() const { return static_cast<int>(markers.size()); }
    double time() const { return markers.empty() ? 0.0 : markers.front().t; }
};

enum class BoundaryKind {
    Rim,        // the s=1 grid line is the closed boundary (angular r periodic)
    FourEdges,  // boundary is the four-edge image of the parameter square
};

/// Material surface: an N x M marker grid over (s,r) in [0,1]^2, the image of
/// a smooth initial embedding. s is sampled at N nodes, r at M nodes; a
/// periodic axis excludes the duplicate endpoint. Markers share a common time.
struct MaterialSurface {
    std::string id;
    int n = 0;  // nodes along s
    int m = 0;  // nodes along r
    bool s_periodic = false;
    bool r_periodic = false;
    BoundaryKind boundary = BoundaryKind::FourEdges;
    std::vector<TrajectoryState> markers;  // row-major, index = i*m + j

    const TrajectoryState& at(int i, int j) const { return markers[i * m + j]; }
    TrajectoryState& at(int i, int j) { return markers[i * m + j]; }
    double time() const { return markers.empty() ? 0.0 : markers.front().t; }
};

/// Which vorticity evaluation feeds the flux quadrature: Eulerian curl at the
/// marker position (default), or the transported J omega0 / det J from the
/// marker's own tangent matrix (independent cross-check).
enum class VorticitySource { Eulerian, Cauchy };

/// Circle of given radius about `center` in the plane normal to `axis`
/// (0=x,1=y,2=z), traversed counterclockwise around the axis. N >= 8.
MaterialLoop circle_loop(const Vec3& center, double radius, int axis, int n_markers,
                         const std::string& id = "circle");

/// Disk of given radius about `center` normal to `axis`: s is radial, r is
/// angular (periodic). The rim at s=1, traversed with increasing r, is the
/// boundary loop; the surface normal sum x_s cross x_r points along +axis.
MaterialSurface disk_patch(const Vec3& center, double radius, int axis, int n_radial,
                           int m_angular, const std::string& id = "disk");

/// Flat parallelogram patch x(s,r) = origin + s edge1 + r edge2 with the
/// four-edge boundary traversed counterclockwise in parameter space.
MaterialSurface rect_patch(const Vec3& origin, const Vec3& edge1, const Vec3& edge2, int n,
                           int m, const std::string& id = "rect");

/// Advect every marker to time t (>= current marker time); ordering and
/// closure are preserved.
MaterialLoop advect_loop(const MaterialLoop& loop, const FlowField& field, double t,
                         const IntegratorConfig& cfg);
MaterialSurface advect_surface(const MaterialSurface& surface, const FlowField& field, double t,
                               const IntegratorConfig& cfg);

/// Circulation of u around the closed loop at the loop's common time:
/// rectangle-rule quadrature of u . dx/ds with 6th-order centered tangents in
/// the periodic loop parameter. Requires >= 8 markers.
double circulation(const MaterialLoop& loop, const FlowField& field);

/// Flux of the vorticity through the surface: tensor-product quadrature of
/// omega . (x_s cross x_r) ds dr with 6th-order FD tangents on the marker
/// grid; periodic axes use the rectangle rule, non-periodic axes the
/// endpoint-corrected trapezoidal rule. Throws on a degenerate (zero-area)
/// patch.
double vorticity_flux(const MaterialSurface& surface, const FlowField& field,
                      VorticitySource source = VorticitySource::Eulerian);

/// Circulation around the surface boundary, oriented consistently with the
/// surface normal (rim loop, or the four edges traversed counterclockwise).
double boundary_circulation(const MaterialSurface& surface, const FlowField& field);

/// |circulation(boundary) - vorticity_flux(surface)| at the current time.
double stokes_check(const MaterialSurface& surface, const FlowField& field);

/// Circulation (resp. flux) evaluated on the advected geometry at each time;
/// times ascending, starting at or after the geometry's current time.
std::vector<std::pair<double, double>> kelvin_series(const MaterialLoop& loop,
                                                     const FlowField& field,
                                                     const std::vector<double>& times,
                                                     const IntegratorConfig& cfg);
std::vector<std::pair<double, double>> helmholtz_series(const MaterialSurface& surface,
                                                        const FlowField& field,
                                                        const std::vector<double>& times,
                                                        const IntegratorConfig& cfg,
                                                        VorticitySource source =
                                                            VorticitySource::Eulerian);

}  // namespace lfd
