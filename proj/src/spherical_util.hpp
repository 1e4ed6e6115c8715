#pragma once

#include <algorithm>

#include "knotfield/vec3.hpp"

namespace knotfield::detail {

// Tangent of the minor arc a -> b at its start a.
inline Vec3 arc_start_tangent(const Vec3& a, const Vec3& b) { return normalized(b - dot(a, b) * a); }

// Tangent of the minor arc a -> b at its end b.
inline Vec3 arc_end_tangent(const Vec3& a, const Vec3& b) { return normalized(dot(a, b) * b - a); }

// Minimum of v . u over the minor great arc from unit a to unit b.
inline double arc_min_dot(const Vec3& a, const Vec3& b, const Vec3& v) {
    double best = std::min(dot(v, a), dot(v, b));
    const Vec3 k = cross(a, b);
    const double s = norm(k);
    if (s < 1e-15) return best;
    const Vec3 kh = k / s;
    const Vec3 vp = v - dot(v, kh) * kh;
    const double m = norm(vp);
    if (m < 1e-15) return best;
    const Vec3 u = -vp / m;  // minimiser on the full great circle
    if (dot(cross(a, u), kh) >= 0.0 && dot(cross(u, b), kh) >= 0.0) best = std::min(best, -m);
    return best;
}

}  // namespace knotfield::detail
