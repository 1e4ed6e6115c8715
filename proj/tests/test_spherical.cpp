#include <doctest.h>

#include <cmath>
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

Vec3 centroid(const OrientedCurve& c) {
    Vec3 s;
    for (const auto& p : c.points()) s += p;
    return s / double(c.size());
}

// Horizontal circle of radius rho at height h, seen from the origin: a small
// circle of polar angle atan(rho / h).
SphericalPolyline small_circle(double rho, double h, std::size_t n) {
    return project(knots::circle(rho, n, {0.0, 0.0, h}), {0, 0, 0});
}

// Limacon with a dimple lifted gnomonically onto the sphere: one loop, two inflections.
SphericalPolyline dimpled_loop(std::size_t n) {
    std::vector<Vec3> v;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * double(i) / double(n);
        const double r = 0.3 * (1.0 + 0.7 * std::cos(t));
        v.push_back(normalized(Vec3{r * std::cos(t), r * std::sin(t), 1.0}));
    }
    return make_spherical_polyline(v);
}

}  // namespace

TEST_CASE("projection: circle from its centre is a great circle") {
    const auto proj = project(knots::circle(1.0, 256), {0, 0, 0});
    for (double a : proj.turning_angles) CHECK(std::abs(a) < 1e-9);
    CHECK(std::abs(total_turning(proj)) < 1e-9);
}

TEST_CASE("projection: circle from far along the axis turns by 2 pi") {
    const auto proj = project(knots::circle(1.0, 256), {0, 0, 1e3});
    CHECK(std::abs(std::abs(total_turning(proj)) - 2.0 * kPi) < 1e-4);
}

TEST_CASE("turning: small circle of polar angle theta0 turns by 2 pi cos theta0") {
    for (double h : {0.5, 1.0, 3.0}) {
        const double theta0 = std::atan2(1.0, h);
        const auto proj = small_circle(1.0, h, 4000);
        CHECK(std::abs(std::abs(total_turning(proj)) - 2.0 * kPi * std::cos(theta0)) < 1e-6);
    }
}

TEST_CASE("turning: mirror image negates the total") {
    const auto c = knots::trefoil(200);
    const Vec3 x{0.3, -0.2, 4.0};
    auto pts = points_of(c);
    for (auto& p : pts) p.x = -p.x;
    const auto m = OrientedCurve::from_points(pts);
    const double a = total_turning(project(c, x));
    const double b = total_turning(project(m, {-x.x, x.y, x.z}));
    CHECK(std::abs(a + b) < 1e-12);
}

TEST_CASE("crossings: circle from outside has none") {
    const auto c = knots::circle(1.0, 128);
    for (const Vec3 x : {Vec3{3, 0.1, 0.2}, Vec3{0.2, 0.1, 5}, Vec3{-4, 2, -1}}) {
        CHECK(crossing_count(project(c, x)) == 0);
    }
}

TEST_CASE("crossings: trefoil from a distant generic viewpoint has three") {
    const auto c = knots::trefoil(300);
    const Vec3 x = Vec3{0.31, -0.17, 1.0} * 40.0;
    CHECK(crossing_count(project(c, x)) == 3);
    CHECK(oracle::planar_crossings(p3(c.points()), p3(x), p3(normalized(centroid(c) - x))) == 3);
}

TEST_CASE("crossings: match a planar counter on the perspective image") {
    Rng rng(21);
    for (const auto& c : {knots::figure_eight(300), knots::trefoil(300), knots::torus_knot(2, 5, 2.0, 1.0, 300)}) {
        int checked = 0;
        for (int k = 0; k < 12; ++k) {
            const Vec3 x = rng.unit_vector() * rng.uniform(9.0, 20.0);
            const Vec3 view = normalized(centroid(c) - x);
            bool in_front = true;
            for (const auto& p : c.points()) in_front = in_front && dot(p - x, view) > 0.5;
            if (!in_front) continue;
            ++checked;
            CHECK(crossing_count(project(c, x)) == oracle::planar_crossings(p3(c.points()), p3(x), p3(view)));
        }
        CHECK(checked > 6);
    }
}

TEST_CASE("crossings: parity flips across the tangent developable") {
    for (const auto& c : {knots::trefoil(200), knots::figure_eight(200)}) {
        for (std::size_t i : {7u, 60u, 133u}) {
            const Vec3 a = c.point(i), b = c.point(i + 1);
            const Vec3 dir = normalized(b - a);
            const Vec3 off = normalized(cross(dir, c.normals()[i] + Vec3{0.1, 0.2, 0.3}));
            const Vec3 on = a - dir * 2.0;
            const int below = crossing_count(project(c, on - off * 1e-4));
            const int above = crossing_count(project(c, on + off * 1e-4));
            CHECK(std::abs(below - above) == 1);
            // Parity is constant on small moves that do not cross.
            CHECK(crossing_count(project(c, on + off * 2e-4)) == above);
        }
    }
}

TEST_CASE("dual: great circle collapses to its pole") {
    const auto proj = project(knots::circle(1.0, 128), {0, 0, 0});
    const auto dual = dual_curve(proj);
    for (const auto& p : dual.points) CHECK(norm(p - dual.points[0]) < 1e-12);
    CHECK(std::abs(dual.signed_length) < 1e-12);
}

TEST_CASE("dual: small circle maps to the complementary small circle") {
    const double h = 1.4;
    const double theta0 = std::atan2(1.0, h);
    const auto proj = small_circle(1.0, h, 4000);
    const auto dual = dual_curve(proj);
    for (const auto& p : dual.points) {
        const double polar = std::acos(std::abs(p.z));
        CHECK(std::abs(polar - (kPi / 2.0 - theta0)) < 1e-6);
    }
    CHECK(std::abs(std::abs(dual.signed_length) - 2.0 * kPi * std::cos(theta0)) < 1e-6);
    CHECK(dual.cusps == 0);
}

TEST_CASE("dual: signed length equals total turning") {
    const auto c = knots::figure_eight(300);
    for (const auto& x : sample_general_points(Link({c}), 10, 8)) {
        const auto proj = project(c, x);
        CHECK(std::abs(dual_curve(proj).signed_length - total_turning(proj)) < 1e-12);
    }
}

TEST_CASE("dual: one loop with two inflections has two cusps") {
    const auto loop = dimpled_loop(400);
    const auto dual = dual_curve(loop);
    CHECK(dual.cusps == 2);
    int pos = 0, neg = 0;
    for (double l : dual.joint_lengths) (l > 0 ? pos : neg) += 1;
    CHECK(pos > 0);
    CHECK(neg > 0);
}

TEST_CASE("gauss-bonnet: circle from centre and from far away") {
    const auto c = knots::circle(1.0, 256);
    CHECK(std::abs(omega_gauss_bonnet(c, {0, 0, 0}) - 2.0 * kPi) < 1e-9);
    CHECK(oracle::dist4pi(omega_gauss_bonnet(c, {0.3, 0.2, 500.0}), 0.0) < 1e-3);
    CHECK(oracle::dist4pi(omega_gauss_bonnet(c, {400.0, 10.0, 3.0}), 0.0) < 1e-3);
}

TEST_CASE("gauss-bonnet: exact for coarse polygons") {
    const EvalConfig cfg;
    for (const auto& c : {knots::trefoil(40), knots::figure_eight(36)}) {
        const Link link({c});
        GeneralPositionOptions opt;
        opt.min_distance_segments = 0.5;
        opt.padding = 1.0;
        for (const auto& x : sample_general_points(link, 40, 17, opt)) {
            CHECK(oracle::dist4pi(omega_gauss_bonnet(c, x), omega_point_infinity(c, x, cfg)) < 1e-9);
        }
    }
}

TEST_CASE("gauss-bonnet: agrees with the triangle sum around a trefoil") {
    const auto c = knots::trefoil(300);
    const EvalConfig cfg;
    for (const auto& x : sample_general_points(Link({c}), 30, 23)) {
        CHECK(oracle::dist4pi(omega_gauss_bonnet(c, x), omega_point_infinity(c, x, cfg)) < 1e-3 * 4.0 * kPi);
    }
}

TEST_CASE("spherical polyline: antipodal and repeated vertices are rejected") {
    CHECK(error_kind([] { make_spherical_polyline({{0, 0, 1}, {0, 0, -1}, {1, 0, 0}}); }) == ErrorKind::degenerate);
    CHECK(error_kind([] { make_spherical_polyline({{0, 0, 1}, {0, 0, 1}, {1, 0, 0}}); }) == ErrorKind::degenerate);
    CHECK(error_kind([] { project(knots::circle(1.0, 10), {1.0, 0.0, 0.0}); }) == ErrorKind::degenerate);
}
