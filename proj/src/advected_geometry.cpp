#include "lfd/advected_geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "lfd/fd.hpp"

namespace lfd {

namespace {

void axes_normal_to(int axis, Vec3& e1, Vec3& e2) {
    // (e1, e2, axis) right-handed
    Vec3 n{0, 0, 0};
    n[axis] = 1.0;
    e1 = Vec3{0, 0, 0};
    e1[(axis + 1) % 3] = 1.0;
    e2 = cross(n, e1);
}

void check_synchronous(const std::vector<TrajectoryState>& markers, const char* what) {
    const double t0 = markers.front().t;
    for (const auto& s : markers)
        if (std::abs(s.t - t0) > 1e-12 * (1.0 + std::abs(t0)))
            throw std::invalid_argument(std::string(what) + ": markers not synchronous");
}

Vec3 marker_vorticity(const FlowField& field, const TrajectoryState& s, VorticitySource source) {
    if (source == VorticitySource::Cauchy) {
        const double d = det(s.J);
        if (!(d > 0.0)) throw NumericError("vorticity_flux: det J <= 0 on marker");
        return (s.J * field.vorticity(s.a, 0.0)) / d;
    }
    return field.vorticity(s.x, s.t);
}

/// Line integral of u . dx over an open marker row (non-periodic parameter),
/// endpoint-corrected trapezoid with one-sided 6th-order tangents.
double open_line_integral(const std::vector<Vec3>& pts, const std::vector<Vec3>& u) {
    const int n = static_cast<int>(pts.size());
    const double h = 1.0 / (n - 1);
    fd::DerivativeStencil ds(n, h, false);
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = dot(u[i], ds.at(i, [&](int k) { return pts[k]; }));
    return fd::integrate_unit(n, false, [&](int i) { return f[i]; });
}

}  // namespace

MaterialLoop circle_loop(const Vec3& center, double radius, int axis, int n_markers,
                         const std::string& id) {
    if (n_markers < 8) throw std::invalid_argument("circle_loop: need at least 8 markers");
    if (!(radius > 0.0)) throw std::invalid_argument("circle_loop: radius must be > 0");
    Vec3 e1, e2;
    axes_normal_to(axis, e1, e2);
    MaterialLoop loop;
    loop.id = id;
    loop.markers.reserve(n_markers);
    for (int i = 0; i < n_markers; ++i) {
        const double theta = kTwoPi * i / n_markers;
        const Vec3 p = center + radius * (std::cos(theta) * e1 + std::sin(theta) * e2);
        loop.markers.push_back(TrajectoryState::initial(p));
    }
    return loop;
}

MaterialSurface disk_patch(const Vec3& center, double radius, int axis, int n_radial,
                           int m_angular, const std::string& id) {
    if (n_radial < 8 || m_angular < 8)
        throw std::invalid_argument("disk_patch: grid must be at least 8x8");
    if (!(radius > 0.0)) throw std::invalid_argument("disk_patch: radius must be > 0");
    Vec3 e1, e2;
    axes_normal_to(axis, e1, e2);
    MaterialSurface surf;
    surf.id = id;
    surf.n = n_radial;
    surf.m = m_angular;
    surf.s_periodic = false;
    surf.r_periodic = true;
    surf.boundary = BoundaryKind::Rim;
    surf.markers.reserve(n_radial * m_angular);
    for (int i = 0; i < n_radial; ++i) {
        const double s = static_cast<double>(i) / (n_radial - 1);
        for (int j = 0; j < m_angular; ++j) {
            const double theta = kTwoPi * j / m_angular;
            const Vec3 p =
                center + radius * s * (std::cos(theta) * e1 + std::sin(theta) * e2);
            surf.markers.push_back(TrajectoryState::initial(p));
        }
    }
    return surf;
}

MaterialSurface rect_patch(const Vec3& origin, const Vec3& edge1, const Vec3& edge2, int n,
                           int m, const std::string& id) {
    if (n < 8 || m < 8) throw std::invalid_argument("rect_patch: grid must be at least 8x8");
    if (norm(cross(edge1, edge2)) == 0.0)
        throw std::invalid_argument("rect_patch: degenerate edges");
    MaterialSurface surf;
    surf.id = id;
    surf.n = n;
    surf.m = m;
    surf.boundary = BoundaryKind::FourEdges;
    surf.markers.reserve(n * m);
    for (int i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / (n - 1);
        for (int j = 0; j < m; ++j) {
            const double r = static_cast<double>(j) / (m - 1);
            surf.markers.push_back(TrajectoryState::initial(origin + s * edge1 + r * edge2));
        }
    }
    return surf;
}

MaterialLoop advect_loop(const MaterialLoop& loop, const FlowField& field, double t,
                         const IntegratorConfig& cfg) {
    if (t < loop.time()) throw std::invalid_argument("advect_loop: target time in the past");
    MaterialLoop out = loop;
    for (auto& s : out.markers) s = advance(s, field, cfg, t - s.t);
    return out;
}

MaterialSurface advect_surface(const MaterialSurface& surface, const FlowField& field, double t,
                               const IntegratorConfig& cfg) {
    if (t < surface.time())
        throw std::invalid_argument("advect_surface: target time in the past");
    MaterialSurface out = surface;
    for (auto& s : out.markers) s = advance(s, field, cfg, t - s.t);
    return out;
}

double circulation(const MaterialLoop& loop, const FlowField& field) {
    const int n = loop.size();
    if (n < 8) throw std::invalid_argument("circulation: need at least 8 markers");
    check_synchronous(loop.markers, "circulation");
    const double t = loop.time();
    fd::DerivativeStencil ds(n, 1.0 / n, true);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec3 tangent = ds.at(i, [&](int k) { return loop.markers[k].x; });
        acc += dot(field.velocity(loop.markers[i].x, t), tangent);
    }
    return acc / n;
}

double vorticity_flux(const MaterialSurface& surface, const FlowField& field,
                      VorticitySource source) {
    const int n = surface.n, m = surface.m;
    check_synchronous(surface.markers, "vorticity_flux");
    const double hs = surface.s_periodic ? 1.0 / n : 1.0 / (n - 1);
    const double hr = surface.r_periodic ? 1.0 / m : 1.0 / (m - 1);
    fd::DerivativeStencil dss(n, hs, surface.s_periodic);
    fd::DerivativeStencil dsr(m, hr, surface.r_periodic);

    std::vector<double> f(n * m);
    double area = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            const Vec3 xs = dss.at(i, [&](int k) { return surface.at(k, j).x; });
            const Vec3 xr = dsr.at(j, [&](int k) { return surface.at(i, k).x; });
            const Vec3 nds = cross(xs, xr);
            area += norm(nds);
            f[i * m + j] = dot(marker_vorticity(field, surface.at(i, j), source), nds);
        }
    }
    if (!(area > 0.0)) throw std::invalid_argument("vorticity_flux: degenerate patch (zero area)");
    return fd::integrate_unit(n, surface.s_periodic, [&](int i) {
        return fd::integrate_unit(m, surface.r_periodic, [&](int j) { return f[i * m + j]; });
    });
}

double boundary_circulation(const MaterialSurface& surface, const FlowField& field) {
    const int n = surface.n, m = surface.m;
    check_synchronous(surface.markers, "boundary_circulation");
    const double t = surface.time();
    if (surface.boundary == BoundaryKind::Rim) {
        MaterialLoop rim;
        rim.id = surface.id + ":rim";
        rim.markers.reserve(m);
        for (int j = 0; j < m; ++j) rim.markers.push_back(surface.at(n - 1, j));
        return circulation(rim, field);
    }
    // four edges, counterclockwise in (s,r): r=0 ascending s, s=1 ascending r,
    // r=1 descending s, s=0 descending r
    auto edge = [&](auto&& point_at, int count) {
        std::vector<Vec3> pts(count);
        std::vector<Vec3> u(count);
        for (int k = 0; k < count; ++k) {
            pts[k] = point_at(k);
            u[k] = field.velocity(pts[k], t);
        }
        return open_line_integral(pts, u);
    };
    double acc = 0.0;
    acc += edge([&](int k) { return surface.at(k, 0).x; }, n);
    acc += edge([&](int k) { return surface.at(n - 1, k).x; }, m);
    acc += edge([&](int k) { return surface.at(n - 1 - k, m - 1).x; }, n);
    acc += edge([&](int k) { return surface.at(0, m - 1 - k).x; }, m);
    return acc;
}

double stokes_check(const MaterialSurface& surface, const FlowField& field) {
    return std::abs(boundary_circulation(surface, field) - vorticity_flux(surface, field));
}

std::vector<std::pair<double, double>> kelvin_series(const MaterialLoop& loop,
                                                     const FlowField& field,
                                                     const std::vector<double>& times,
                                                     const IntegratorConfig& cfg) {
    std::vector<std::pair<double, double>> series;
    series.reserve(times.size());
    MaterialLoop current = loop;
    for (double t : times) {
        current = advect_loop(current, field, t, cfg);
        series.emplace_back(t, circulation(current, field));
    }
    return series;
}

std::vector<std::pair<double, double>> helmholtz_series(const MaterialSurface& surface,
                                                        const FlowField& field,
                                                        const std::vector<double>& times,
                                                        const IntegratorConfig& cfg,
                                                        VorticitySource source) {
    std::vector<std::pair<double, double>> series;
    series.reserve(times.size());
    MaterialSurface current = surface;
    for (double t : times) {
        current = advect_surface(current, field, t, cfg);
        series.emplace_back(t, vorticity_flux(current, field, source));
    }
    return series;
}

}  // namespace lfd
