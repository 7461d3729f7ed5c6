#include <doctest.h>

#include <cmath>

#include "lfd/cauchy.hpp"
#include "lfd/field_catalog.hpp"
#include "lfd/halton.hpp"
#include "oracles.hpp"

using namespace lfd;

namespace {
const IntegratorConfig kCfg{1e-3, Scheme::RK4, 10.0};
}

TEST_CASE("irrotational strain: invariants identically zero") {
    const FlowField f = make_linear_strain(1, 1, -2);
    for (double t : {0.0, 0.5, 1.5}) {
        const CauchyRecord rec = cauchy_invariant(f, {0.3, -0.2, 0.5}, t, kCfg);
        CHECK(norm(rec.invariant) <= 1e-10);
        CHECK(rec.drift <= 1e-10);
    }
}

TEST_CASE("rigid rotation: invariant stays (0,0,2)") {
    const FlowField f = make_rigid_rotation(1.0);
    for (double t : {0.0, 1.0, 4.0}) {
        const CauchyRecord rec = cauchy_invariant(f, {1.0, 0.5, 0.0}, t, kCfg);
        CHECK(std::abs(rec.invariant.x) <= 1e-10);
        CHECK(std::abs(rec.invariant.y) <= 1e-10);
        CHECK(rec.invariant.z == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(rec.drift <= 1e-9);
    }
}

TEST_CASE("abc invariants hold along a chaotic trajectory") {
    const FlowField f = make_abc(1, 1, 1);
    const Vec3 a{1, 2, 3};
    for (int k = 0; k <= 5; ++k) {
        const CauchyRecord rec = cauchy_invariant(f, a, static_cast<double>(k), kCfg);
        INFO("t=", k, " drift=", rec.drift);
        CHECK(rec.drift <= 1e-6);
    }
}

TEST_CASE("cauchy vorticity formula") {
    const FlowField abc = make_abc(1, 1, 1);
    SUBCASE("beltrami: transported vorticity equals the velocity") {
        for (const Vec3& a : halton_box(10, 0.0, kTwoPi)) {
            const IntegratorConfig cfg = kCfg;
            const TrajectoryState s = flow_map(abc, a, 2.0, cfg);
            const Vec3 w = cauchy_vorticity(abc, a, 2.0, cfg);
            CHECK(norm(w - abc.velocity(s.x, 2.0)) <= 1e-6);
        }
    }
    SUBCASE("rigid rotation: uniform (0,0,2)") {
        const FlowField rigid = make_rigid_rotation(1.0);
        const Vec3 w = cauchy_vorticity(rigid, {0.7, -0.1, 0.4}, 2.5, kCfg);
        CHECK(std::abs(w.x) <= 1e-10);
        CHECK(std::abs(w.y) <= 1e-10);
        CHECK(w.z == doctest::Approx(2.0).epsilon(1e-10));
    }
    SUBCASE("shear at a1=0: omega preserved") {
        const FlowField shear = make_shear();
        const Vec3 w = cauchy_vorticity(shear, {0.0, 1.0, 2.0}, 3.0, kCfg);
        CHECK(std::abs(w.x) <= 1e-12);
        CHECK(std::abs(w.y) <= 1e-12);
        CHECK(w.z == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("transported vorticity agrees with the eulerian fd curl") {
    const FlowField abc = make_abc(1, 1, 1);
    for (const Vec3& a : halton_box(10, 0.0, kTwoPi)) {
        const TrajectoryState s = flow_map(abc, a, 2.0, kCfg);
        const Vec3 via_map = cauchy_vorticity(abc, a, 2.0, kCfg);
        const Vec3 via_curl = oracle::curl(abc, s.x, 2.0);
        CHECK(norm(via_map - via_curl) <= 1e-6);
    }
}

TEST_CASE("drift series bookkeeping") {
    const FlowField abc = make_abc(1, 1, 1);
    CHECK(invariant_drift_series(abc, {}, {0.0, 1.0}, kCfg).empty());

    const auto single = invariant_drift_series(abc, {{1, 2, 3}}, {0.0}, kCfg);
    REQUIRE(single.size() == 1);
    CHECK(single[0].drift <= 1e-12);  // analytic curl anchor at t=0

    const auto series =
        invariant_drift_series(abc, halton_box(4, 0.0, kTwoPi), {0.0, 1.0, 2.0}, kCfg);
    CHECK(series.size() == 12);
    double worst = 0.0;
    for (const auto& rec : series) worst = std::max(worst, rec.drift);
    CHECK(worst <= 1e-6);

    CHECK_THROWS_AS(invariant_drift_series(abc, {{1, 2, 3}}, {1.0, 0.5}, kCfg),
                    std::invalid_argument);
}
