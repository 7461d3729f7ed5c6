#pragma once

#include <vector>

#include "lfd/geometry3.hpp"

namespace lfd {

/// Radical-inverse function in the given base (van der Corput sequence).
inline double radical_inverse(unsigned index, unsigned base) {
    double inv_base = 1.0 / base;
    double f = inv_base;
    double r = 0.0;
    while (index > 0) {
        r += f * (index % base);
        index /= base;
        f *= inv_base;
    }
    return r;
}

/// Low-discrepancy points in [lo,hi]^3 (Halton, bases 2/3/5, 1-based index
/// to avoid the origin). Deterministic, used as reproducible seed sets.
inline std::vector<Vec3> halton_box(int count, double lo, double hi) {
    std::vector<Vec3> pts;
    pts.reserve(count);
    const double span = hi - lo;
    for (int i = 1; i <= count; ++i) {
        pts.push_back({lo + span * radical_inverse(i, 2),
                       lo + span * radical_inverse(i, 3),
                       lo + span * radical_inverse(i, 5)});
    }
    return pts;
}

}  // namespace lfd
