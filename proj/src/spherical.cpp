#include "knotfield/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "knotfield/error.hpp"
#include "spherical_util.hpp"

namespace knotfield {

namespace {

constexpr double kContainTol = 1e-10;

struct Arc {
    Vec3 a, b;
    Vec3 pole;    // unit a x b
    Vec3 centre;  // unit midpoint
    double cos_reach;  // cos of half the arc length
};

Arc make_arc(const Vec3& a, const Vec3& b) {
    Arc arc{a, b, normalized(cross(a, b)), normalized(a + b), 0.0};
    arc.cos_reach = dot(arc.centre, a);
    return arc;
}

// Classify a point q of the great circle through an arc: +1 strictly inside,
// 0 too close to an endpoint to decide, -1 outside.
int arc_contains(const Arc& arc, const Vec3& q) {
    const double s1 = dot(cross(arc.a, q), arc.pole);
    const double s2 = dot(cross(q, arc.b), arc.pole);
    if (dot(q, arc.centre) < 0.0) return -1;
    if (s1 > kContainTol && s2 > kContainTol) return 1;
    if (s1 < -kContainTol || s2 < -kContainTol) return -1;
    return 0;
}

}  // namespace

SphericalPolyline make_spherical_polyline(std::vector<Vec3> verts) {
    const std::size_t n = verts.size();
    if (n < 3) throw Error(ErrorKind::validation, "spherical polyline needs at least 3 vertices");
    SphericalPolyline sp;
    sp.arc_tangents.resize(n);
    sp.poles.resize(n);
    sp.turning_angles.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& a = verts[i];
        const Vec3& b = verts[(i + 1) % n];
        if (dot(a, b) <= -1.0 + 1e-9) {
            throw Error(ErrorKind::degenerate, "arc " + std::to_string(i) + " joins antipodal points");
        }
        if (norm(cross(a, b)) < 1e-12) {
            throw Error(ErrorKind::degenerate,
                        "arc " + std::to_string(i) + " has zero length (viewpoint on a segment's line)");
        }
        sp.arc_tangents[i] = detail::arc_start_tangent(a, b);
        sp.poles[i] = cross(sp.arc_tangents[i], a);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i + n - 1) % n;
        const Vec3& v = verts[i];
        const Vec3 tin = detail::arc_end_tangent(verts[im], v);
        const Vec3& tout = sp.arc_tangents[i];
        sp.turning_angles[i] = std::atan2(dot(cross(tin, tout), v), dot(tin, tout));
    }
    sp.verts = std::move(verts);
    return sp;
}

SphericalPolyline project(const OrientedCurve& curve, const Vec3& x) {
    if (distance_to_curve(curve, x) <= 1e-9) {
        throw Error(ErrorKind::degenerate, "evaluation point lies on the curve");
    }
    std::vector<Vec3> verts;
    verts.reserve(curve.size());
    for (const auto& p : curve.points()) verts.push_back(normalized(p - x));
    return make_spherical_polyline(std::move(verts));
}

int crossing_count(const SphericalPolyline& proj) {
    const std::size_t n = proj.verts.size();
    std::vector<Arc> arcs;
    arcs.reserve(n);
    std::vector<double> reach(n);
    for (std::size_t i = 0; i < n; ++i) {
        arcs.push_back(make_arc(proj.verts[i], proj.verts[(i + 1) % n]));
        reach[i] = std::acos(std::clamp(arcs[i].cos_reach, -1.0, 1.0));
    }

    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const Arc& p = arcs[i];
            const Arc& q = arcs[j];
            // Cone test on arc centres before the exact check.
            const double limit = reach[i] + reach[j] + 1e-9;
            if (limit < kPi && dot(p.centre, q.centre) < std::cos(limit)) continue;

            const Vec3 line = cross(p.pole, q.pole);
            const double s = norm(line);
            if (s < 1e-12) {
                throw Error(ErrorKind::degenerate, "arcs " + std::to_string(i) + " and " + std::to_string(j) +
                                                       " lie on one great circle; perturb the viewpoint");
            }
            for (const Vec3 cand : {line / s, -line / s}) {
                const int ci = arc_contains(p, cand);
                const int cj = arc_contains(q, cand);
                if (ci < 0 || cj < 0) continue;
                if (ci == 0 || cj == 0) {
                    throw Error(ErrorKind::degenerate, "crossing between arcs " + std::to_string(i) + " and " +
                                                           std::to_string(j) +
                                                           " is too close to a vertex; perturb the viewpoint");
                }
                ++count;
            }
        }
    }
    return count;
}

double total_turning(const SphericalPolyline& proj) {
    double t = 0.0;
    for (double a : proj.turning_angles) t += a;
    return t;
}

DualCurve dual_curve(const SphericalPolyline& proj) {
    const std::size_t n = proj.verts.size();
    DualCurve d;
    d.points = proj.poles;
    d.joint_lengths.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Consecutive poles are both orthogonal to verts[i]; the joint is the
        // rotation about it carrying one onto the other.
        const Vec3& from = d.points[(i + n - 1) % n];
        const Vec3& to = d.points[i];
        d.joint_lengths[i] = std::atan2(dot(cross(from, to), proj.verts[i]), dot(from, to));
        d.signed_length += d.joint_lengths[i];
    }
    int last = 0;
    int first = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = proj.turning_angles[i];
        const int sgn = a > 0.0 ? 1 : (a < 0.0 ? -1 : 0);
        if (sgn == 0) continue;
        if (first == 0) first = sgn;
        if (last != 0 && sgn != last) ++d.cusps;
        last = sgn;
    }
    if (first != 0 && last != 0 && first != last) ++d.cusps;
    return d;
}

double omega_gauss_bonnet(const OrientedCurve& curve, const Vec3& x) {
    const auto proj = project(curve, x);
    const int crossings = crossing_count(proj);
    return wrap_4pi(kTwoPi * (crossings + 1) - total_turning(proj));
}

double omega_gauss_bonnet(const Link& link, const Vec3& x) {
    double total = 0.0;
    for (const auto& c : link) total += omega_gauss_bonnet(c, x);
    return wrap_4pi(total);
}

}  // namespace knotfield
