#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "knotfield/curve.hpp"
#include "knotfield/knots.hpp"
#include "knotfield/solidangle.hpp"
#include "knotfield/spherical.hpp"
#include "knotfield/verify.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace knotfield;
using namespace testing_support;

namespace {

double axis_error(std::size_t n, double z) {
    const auto c = knots::circle(1.0, n);
    return std::abs(omega_point_infinity(c, {0, 0, z}, EvalConfig{}) - oracle::cap_omega(1.0, z));
}

}  // namespace

TEST_CASE("triangle sum: circle centre sees a hemisphere") {
    for (std::size_t n : {3u, 64u, 400u}) {
        CHECK(std::abs(omega_point_infinity(knots::circle(1.0, n), {0, 0, 0}, EvalConfig{}) - 2.0 * kPi) < 1e-9);
    }
}

TEST_CASE("triangle sum: axis values converge to the cap formula at second order") {
    for (double z : {-2.0, -0.3, 0.4, 1.0, 3.0}) {
        const double e400 = axis_error(400, z), e800 = axis_error(800, z);
        CHECK(e400 < 1e-4);
        CHECK(e400 / e800 == doctest::Approx(4.0).epsilon(0.02));
        CHECK(axis_error(4000, z) < 1e-6);
    }
}

TEST_CASE("triangle sum: the polygon deficit is the same for every exact evaluator") {
    // The gap to the smooth-circle value belongs to the polygon, not the evaluator.
    const auto c = knots::circle(1.0, 400);
    for (double z : {0.5, 1.5}) {
        const Vec3 x{0, 0, z};
        const double tri = omega_point_infinity(c, x, EvalConfig{});
        CHECK(std::abs(omega_gauss_bonnet(c, x) - tri) < 1e-11);
        CHECK(std::abs(omega_point_tangent_dev(c, x, 1) - tri) < 1e-9);
    }
}

TEST_CASE("triangle sum: far field tends to zero") {
    const auto c = knots::trefoil(300);
    Rng rng(1);
    for (int k = 0; k < 10; ++k) {
        const Vec3 x = rng.unit_vector() * (50.0 * 6.0);
        CHECK(oracle::dist4pi(omega_point_infinity(c, x, EvalConfig{}), 0.0) < 1e-3);
    }
}

TEST_CASE("triangle sum: piercing the disk accumulates 4 pi") {
    const auto c = knots::circle(1.0, 400);
    const EvalConfig cfg;
    double prev = omega_point_infinity(c, {0.2, 0.1, -2000.0}, cfg);
    double total = 0.0;
    for (int k = 1; k <= 4000; ++k) {
        const double t = -1.0 + 2.0 * k / 4000.0;  // cubic spacing: fine near the disk
        const double cur = omega_point_infinity(c, {0.2, 0.1, 2000.0 * t * t * t}, cfg);
        total += std::remainder(cur - prev, 4.0 * kPi);
        prev = cur;
    }
    CHECK(std::abs(std::abs(total) - 4.0 * kPi) < 1e-3);
}

TEST_CASE("quadrature: resolved on the axis, wrong in a band of width ~ ds") {
    const auto c = knots::circle(1.0, 400);
    for (double z : {0.5, 1.0, 2.0}) {
        CHECK(std::abs(omega_point_infinity_quadrature(c, {0, 0, z}, EvalConfig{}) - oracle::cap_omega(1.0, z)) <
              1e-4);
    }
    EvalConfig fixed;
    fixed.switch_threshold = 1e-12;  // keep n_inf = +z even next to the surface
    const double ds = c.total_length() / 400.0;
    const Vec3 near{1.0 + 0.2 * ds, 0.0, 1.0};
    const double err = std::remainder(
        omega_point_infinity_quadrature(c, near, fixed) - omega_point_infinity(c, near, fixed), 4.0 * kPi);
    CHECK(std::abs(err) > 0.1);
    const Vec3 far{1.0 + 4.0 * ds, 0.0, 1.0};
    CHECK(std::abs(omega_point_infinity_quadrature(c, far, fixed) - omega_point_infinity(c, far, fixed)) < 1e-3);
}

TEST_CASE("tangent developable: circle axis and sign agreement") {
    const auto c = knots::circle(1.0, 400);
    for (double z : {0.3, 1.0, 2.5}) {
        CHECK(std::abs(omega_point_tangent_dev(c, {0, 0, z}, 1) - oracle::cap_omega(1.0, z)) < 5e-4);
        CHECK(std::abs(omega_point_tangent_dev(c, {0, 0, z}, -1) - oracle::cap_omega(1.0, z)) < 5e-4);
    }
    const auto f = knots::figure_eight(400);
    for (const auto& x : sample_general_points(Link({f}), 40, 31)) {
        CHECK(oracle::dist4pi(omega_point_tangent_dev(f, x, 1), omega_point_tangent_dev(f, x, -1)) < 1e-3 * 4.0 * kPi);
    }
}

TEST_CASE("homotopy: identity is zero and translation matches direct evaluation") {
    const auto k0 = knots::circle(1.0, 200);
    const Vec3 x{0.3, 0.4, 0.5};
    CHECK(homotopy_delta(k0, k0, x) == 0.0);

    const auto k1 = k0.translated({0.2, -0.1, 0.9});
    const double direct = omega_point_infinity(k1, x, EvalConfig{}) - omega_point_infinity(k0, x, EvalConfig{});
    CHECK(oracle::dist4pi(homotopy_delta(k0, k1, x), direct) < 1e-3);
}

TEST_CASE("homotopy: a far curve brought in reproduces the direct value") {
    const auto k1 = knots::trefoil(200);
    const Vec3 shift{0.0, 0.0, 50.0 * 6.0};
    const auto k0 = k1.translated(shift);
    const Vec3 x{0.4, 0.7, 0.2};
    EvalConfig cfg;
    cfg.n_inf = normalized(shift);
    CHECK(oracle::dist4pi(homotopy_delta(k0, k1, x), omega_point_infinity(k1, x, cfg)) < 1e-3);
}

TEST_CASE("homotopy: mismatched vertex counts are rejected") {
    CHECK(error_kind([] { homotopy_delta(knots::circle(1, 50), knots::circle(1, 51), {0, 0, 3}); }) ==
          ErrorKind::validation);
}

TEST_CASE("additivity: link value is the sum of component values") {
    const Link h = knots::hopf(150);
    const EvalConfig cfg;
    for (const auto& x : sample_general_points(h, 20, 3)) {
        const double sum = wrap_4pi(omega_point_infinity(h[0], x, cfg) + omega_point_infinity(h[1], x, cfg));
        CHECK(std::abs(omega_point_infinity(h, x, cfg) - sum) < 1e-12);
    }
}

TEST_CASE("gradient matches the Biot-Savart field of a unit current") {
    const auto c = knots::trefoil(400);
    const EvalConfig cfg;
    const double h = 1e-4;
    Rng rng(8);
    int checked = 0;
    while (checked < 10) {
        const Vec3 x{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-3, 3)};
        if (distance_to_curve(c, x) < 5.0 * c.max_segment_length() * 5.0) continue;
        ++checked;
        Vec3 g;
        for (int a = 0; a < 3; ++a) {
            Vec3 e;
            (a == 0 ? e.x : a == 1 ? e.y : e.z) = h;
            const double d = std::remainder(omega_point_infinity(c, x + e, cfg) - omega_point_infinity(c, x - e, cfg),
                                            4.0 * kPi);
            (a == 0 ? g.x : a == 1 ? g.y : g.z) = d / (2.0 * h);
        }
        const auto b = oracle::biot_savart(p3(c.points()), p3(x));
        const Vec3 expect = 4.0 * kPi * Vec3{b[0], b[1], b[2]};
        CHECK(norm(g - expect) / norm(expect) < 1e-2);
    }
}

TEST_CASE("axis policy: configured, flipped and random choices") {
    const auto c = knots::circle(1.0, 100);
    EvalConfig cfg;
    CHECK(choose_axis(c, {0, 0, -5}, cfg).which == 0);
    CHECK(choose_axis(c, {0, 0, 5}, cfg).which == 1);

    const auto vertical = OrientedCurve::from_points([] {
        std::vector<Vec3> p;
        for (int i = 0; i < 100; ++i) p.push_back({std::cos(2 * kPi * i / 100), 0.0, std::sin(2 * kPi * i / 100)});
        return p;
    }());
    // Seen from its centre the circle fills a great circle of directions; pick a
    // seed whose random axis is far from that plane.
    while (std::hypot(fallback_axis(cfg.fallback_seed).x, fallback_axis(cfg.fallback_seed).z) > 0.9) {
        ++cfg.fallback_seed;
    }
    const auto choice = choose_axis(vertical, {0, 0, 0}, cfg);
    CHECK(choice.which == 2);
    CHECK(norm(choice.axis - fallback_axis(cfg.fallback_seed)) == 0.0);
    // The value does not depend on which axis was used.
    CHECK(std::abs(omega_point_infinity(vertical, {0, 0, 0}, cfg) - 2.0 * kPi) < 1e-9);

    // With a seed whose axis also lies near the plane, the best of the three is used.
    cfg.fallback_seed = 0;
    while (std::hypot(fallback_axis(cfg.fallback_seed).x, fallback_axis(cfg.fallback_seed).z) < 0.99) {
        ++cfg.fallback_seed;
    }
    CHECK(choose_axis(vertical, {0, 0, 0}, cfg).which == 3);
    CHECK(std::abs(omega_point_infinity(vertical, {0, 0, 0}, cfg) - 2.0 * kPi) < 1e-9);
}

TEST_CASE("axis policy: fallback axis is a deterministic unit vector") {
    for (std::uint64_t s : {0u, 1u, 99u}) {
        CHECK(std::abs(norm(fallback_axis(s)) - 1.0) < 1e-15);
        CHECK(fallback_axis(s) == fallback_axis(s));
    }
    CHECK(!(fallback_axis(1) == fallback_axis(2)));
}

TEST_CASE("config and grid validation") {
    EvalConfig cfg;
    cfg.n_inf = {0, 0, 2};
    CHECK(error_kind([&] { cfg.validate(); }) == ErrorKind::domain);
    cfg.n_inf = {0, 0, 1};
    cfg.switch_threshold = 0.0;
    CHECK(error_kind([&] { cfg.validate(); }) == ErrorKind::domain);

    GridSpec g;
    g.dims = {1, 4, 4};
    CHECK(error_kind([&] { g.validate(); }) == ErrorKind::domain);
    g.dims = {4, 4, 4};
    g.spacing = -1.0;
    CHECK(error_kind([&] { g.validate(); }) == ErrorKind::domain);
}

TEST_CASE("evaluator names round-trip") {
    for (Evaluator e : {Evaluator::infinity_triangle, Evaluator::infinity_quadrature, Evaluator::tangent_dev_plus,
                        Evaluator::tangent_dev_minus, Evaluator::gauss_bonnet}) {
        CHECK(parse_evaluator(to_string(e)) == e);
    }
    CHECK(error_kind([] { parse_evaluator("nope"); }) == ErrorKind::domain);
}

TEST_CASE("dispatch: every evaluator agrees at a generic point") {
    const Link link({knots::trefoil(400)});
    const Vec3 x{0.3, 0.2, 3.0};
    EvalConfig cfg;
    const double ref = omega_point(link, x, cfg);
    for (Evaluator e : {Evaluator::infinity_quadrature, Evaluator::tangent_dev_plus, Evaluator::tangent_dev_minus,
                        Evaluator::gauss_bonnet}) {
        cfg.evaluator = e;
        CHECK(oracle::dist4pi(omega_point(link, x, cfg), ref) < 1e-3);
    }
}

TEST_CASE("grid: circle axis nodes match the cap formula") {
    const Link link({knots::circle(1.0, 2000)});
    GridSpec g;
    g.dims = {17, 17, 33};
    g.spacing = 0.125;
    g.origin = {-1.0, -1.0, -2.0};
    const auto f = omega_grid(link, g, EvalConfig{}, 2);
    CHECK(f.sentinel_nodes.size() == 4);  // the circle passes through four nodes of the z = 0 plane
    for (std::size_t k = 0; k < g.dims[2]; ++k) {
        const double z = g.node(8, 8, k).z;
        CHECK(std::abs(f.values[g.index(8, 8, k)] - oracle::cap_omega(1.0, z)) < 1e-5);
    }
    for (std::size_t idx : f.sentinel_nodes) CHECK(f.values[idx] == kSentinel);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (f.values[i] == kSentinel) continue;
        CHECK(f.values[i] >= 0.0);
        CHECK(f.values[i] < 4.0 * kPi);
    }
}

TEST_CASE("grid: worker count does not change a single bit") {
    const Link link({knots::trefoil(200)});
    GridSpec g;
    g.dims = {12, 11, 10};
    g.spacing = 0.5;
    g.origin = {-3.0, -2.6, -2.2};
    const auto a = omega_grid(link, g, EvalConfig{}, 1);
    for (unsigned w : {2u, 3u, 7u}) {
        const auto b = omega_grid(link, g, EvalConfig{}, w);
        CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0);
    }
}
