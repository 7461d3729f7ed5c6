#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "lfd/geometry3.hpp"

namespace lfd::fd {

/// 4th-order centered first derivative of a scalar function of one variable.
template <typename F>
double derivative4(F&& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// 4th-order centered first derivative of a Vec3-valued function.
template <typename F>
Vec3 derivative4_vec(F&& f, double x, double h) {
    Vec3 d = f(x + 2 * h) * (-1.0) + f(x + h) * 8.0 - f(x - h) * 8.0 + f(x - 2 * h);
    return d / (12 * h);
}

/// Spatial gradient of a scalar field by 4th-order central differences.
template <typename F>
Vec3 gradient4(F&& f, const Vec3& x, double t, double h) {
    Vec3 g;
    for (int k = 0; k < 3; ++k) {
        auto along = [&](double s) {
            Vec3 p = x;
            p[k] = s;
            return f(p, t);
        };
        g[k] = derivative4(along, x[k], h);
    }
    return g;
}

/// Jacobian G_ij = du_i/dx_j of a Vec3 field by 4th-order central differences.
template <typename F>
Mat3 jacobian4(F&& f, const Vec3& x, double t, double h) {
    Mat3 g;
    for (int j = 0; j < 3; ++j) {
        auto along = [&](double s) {
            Vec3 p = x;
            p[j] = s;
            return f(p, t);
        };
        Vec3 dj = derivative4_vec(along, x[j], h);
        for (int i = 0; i < 3; ++i) g(i, j) = dj[i];
    }
    return g;
}

/// Curl of a Vec3 field by 4th-order central differences.
template <typename F>
Vec3 curl4(F&& f, const Vec3& x, double t, double h) {
    return curl_from_gradient(jacobian4(f, x, t, h));
}

/// Fornberg's algorithm: weights for the m-th derivative at point z from
/// function values on the given nodes. Returns weights for orders 0..m;
/// only the m-th row is exposed.
inline std::vector<double> fornberg_weights(double z, const std::vector<double>& nodes, int m) {
    const int n = static_cast<int>(nodes.size()) - 1;
    if (n + 1 < m + 1) throw std::invalid_argument("fornberg_weights: too few nodes");
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = c[i][m];
    return w;
}

/// First-derivative stencil table for a uniform 1-D grid of n nodes with
/// spacing h. `periodic` selects wrap-around centered stencils; otherwise
/// one-sided stencils of the same order are used near the boundary.
/// `width` is the half-width of the centered stencil (width=3 gives the
/// 6th-order scheme).
class DerivativeStencil {
public:
    DerivativeStencil(int n, double h, bool periodic, int width = 3)
        : n_(n), h_(h), periodic_(periodic), width_(width) {
        if (n < 2 * width + 1)
            throw std::invalid_argument("DerivativeStencil: grid too small for stencil");
        const int npts = 2 * width + 1;
        std::vector<double> nodes(npts);
        for (int k = 0; k < npts; ++k) nodes[k] = (k - width) * h;
        centered_ = fornberg_weights(0.0, nodes, 1);
        if (!periodic_) {
            // one-sided / offset stencils for the first `width` rows and last
            // `width` rows, each using the leading npts nodes
            std::vector<double> edge_nodes(npts);
            for (int k = 0; k < npts; ++k) edge_nodes[k] = k * h;
            for (int row = 0; row < width; ++row)
                edge_.push_back(fornberg_weights(row * h, edge_nodes, 1));
        }
    }

    /// Derivative of the sampled values at node i.
    template <typename Get>
    auto at(int i, Get&& value) const {
        using T = decltype(value(0));
        const int w = width_;
        if (periodic_) {
            T acc = value(((i - w) % n_ + n_) % n_) * centered_[0];
            for (int k = 1; k <= 2 * w; ++k)
                acc += value(((i - w + k) % n_ + n_) % n_) * centered_[k];
            return acc;
        }
        if (i >= w && i < n_ - w) {
            T acc = value(i - w) * centered_[0];
            for (int k = 1; k <= 2 * w; ++k) acc += value(i - w + k) * centered_[k];
            return acc;
        }
        if (i < w) {
            const auto& wts = edge_[i];
            T acc = value(0) * wts[0];
            for (int k = 1; k <= 2 * w; ++k) acc += value(k) * wts[k];
            return acc;
        }
        // mirrored one-sided stencil at the far end
        const auto& wts = edge_[n_ - 1 - i];
        T acc = value(n_ - 1) * (-wts[0]);
        for (int k = 1; k <= 2 * w; ++k) acc += value(n_ - 1 - k) * (-wts[k]);
        return acc;
    }

private:
    int n_;
    double h_;
    bool periodic_;
    int width_;
    std::vector<double> centered_;
    std::vector<std::vector<double>> edge_;
};

/// Integral of uniformly sampled values over [0,1].
/// Periodic grids (node i at i/n, endpoint excluded) use the rectangle rule,
/// which is spectrally accurate for smooth periodic integrands. Non-periodic
/// grids (node i at i/(n-1), endpoints included) use the trapezoidal rule with
/// the Euler-Maclaurin h^2/12 endpoint correction, making the rule 4th order;
/// end derivatives come from one-sided 6th-order stencils.
template <typename Get>
auto integrate_unit(int n, bool periodic, Get&& value) {
    using T = decltype(value(0));
    if (periodic) {
        T acc = value(0);
        for (int i = 1; i < n; ++i) acc += value(i);
        return acc * (1.0 / n);
    }
    const double h = 1.0 / (n - 1);
    T acc = value(0) * 0.5;
    for (int i = 1; i < n - 1; ++i) acc += value(i);
    acc += value(n - 1) * 0.5;
    acc *= h;
    DerivativeStencil ds(n, h, false);
    T d0 = ds.at(0, value);
    T d1 = ds.at(n - 1, value);
    acc += (d0 - d1) * (h * h / 12.0);
    return acc;
}

}  // namespace lfd::fd
