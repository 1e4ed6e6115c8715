// Independent reference computations for tests. Nothing here calls the library's
// evaluators; curves are passed as plain point lists.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

using P3 = std::array<double, 3>;

constexpr double pi = 3.14159265358979323846;

inline P3 sub(const P3& a, const P3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline P3 add(const P3& a, const P3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline P3 mul(double s, const P3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const P3& a, const P3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline P3 cross(const P3& a, const P3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const P3& a) { return std::sqrt(dot(a, a)); }

// Solid angle of a spherical cap seen from height z on the axis of a circle of radius rho.
inline double cap_omega(double rho, double z) { return 2.0 * pi * (1.0 - z / std::sqrt(z * z + rho * rho)); }

inline double wrap4pi(double w) {
    double r = std::fmod(w, 4.0 * pi);
    return r < 0.0 ? r + 4.0 * pi : r;
}

// Distance between two angles mod 4pi.
inline double dist4pi(double a, double b) {
    const double d = wrap4pi(a - b);
    return std::min(d, 4.0 * pi - d);
}

// Curvature of the (p, q) torus knot ((R + r cos qt) cos pt, (R + r cos qt) sin pt, r sin qt)
// from its analytic first and second derivatives.
inline double torus_knot_curvature(int p, int q, double R, double r, double t) {
    const double P = p, Q = q;
    const double rho = R + r * std::cos(Q * t);
    const double drho = -r * Q * std::sin(Q * t);
    const double ddrho = -r * Q * Q * std::cos(Q * t);
    const double c = std::cos(P * t), s = std::sin(P * t);
    const P3 d1{drho * c - rho * P * s, drho * s + rho * P * c, r * Q * std::cos(Q * t)};
    const P3 d2{ddrho * c - 2.0 * drho * P * s - rho * P * P * c, ddrho * s + 2.0 * drho * P * c - rho * P * P * s,
                -r * Q * Q * std::sin(Q * t)};
    const double v = norm(d1);
    return norm(cross(d1, d2)) / (v * v * v);
}

// Gauss double integral by the midpoint rule on every segment pair. Converges
// as O(h^2) for smooth well-separated curves; used as a resolution-independent
// check of the exact polygon formulas.
inline double gauss_linking_midpoint(const std::vector<P3>& a, const std::vector<P3>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const P3 a0 = a[i], a1 = a[(i + 1) % a.size()];
        const P3 am = mul(0.5, add(a0, a1)), da = sub(a1, a0);
        for (std::size_t j = 0; j < b.size(); ++j) {
            const P3 b0 = b[j], b1 = b[(j + 1) % b.size()];
            const P3 bm = mul(0.5, add(b0, b1)), db = sub(b1, b0);
            const P3 r = sub(am, bm);
            const double d = norm(r);
            sum += dot(r, cross(da, db)) / (d * d * d);
        }
    }
    return sum / (4.0 * pi);
}

// Writhe of a smooth parametrised curve by the midpoint rule on the Gauss
// integral, skipping the diagonal (the integrand is bounded there).
inline double writhe_midpoint(const std::function<P3(double)>& curve, std::size_t n) {
    std::vector<P3> mid(n), tan(n);
    const double h = 2.0 * pi / double(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (double(i) + 0.5) * h;
        mid[i] = curve(t);
        tan[i] = mul(1.0 / (2e-5), sub(curve(t + 1e-5), curve(t - 1e-5)));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const P3 r = sub(mid[i], mid[j]);
            const double d = norm(r);
            sum += dot(cross(tan[i], tan[j]), r) / (d * d * d);
        }
    }
    return sum * h * h / (4.0 * pi);
}

// Number of transverse self-crossings of the gnomonic projection of a closed
// polygon onto the plane perpendicular to `view` (unit) through x + view. All
// points must lie in the open half-space in front of x. Plain 2D segment tests.
inline int planar_crossings(const std::vector<P3>& pts, const P3& x, const P3& view) {
    P3 e1 = std::abs(view[0]) < 0.9 ? P3{1, 0, 0} : P3{0, 1, 0};
    e1 = sub(e1, mul(dot(e1, view), view));
    e1 = mul(1.0 / norm(e1), e1);
    const P3 e2 = cross(view, e1);
    const std::size_t n = pts.size();
    std::vector<std::array<double, 2>> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        const P3 r = sub(pts[i], x);
        const double depth = dot(r, view);
        q[i] = {dot(r, e1) / depth, dot(r, e2) / depth};
    }
    auto orient = [](const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    };
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const auto &a = q[i], &b = q[(i + 1) % n], &c = q[j], &d = q[(j + 1) % n];
            const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
            if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) ++count;
        }
    }
    return count;
}

// Magnetic field of a unit current along a closed polygon, by Gauss-Legendre
// quadrature on each segment: B = (1/4pi) sum dl x (x - y) / |x - y|^3.
inline P3 biot_savart(const std::vector<P3>& pts, const P3& x) {
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
    P3 b{0, 0, 0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const P3 p0 = pts[i], p1 = pts[(i + 1) % pts.size()];
        const P3 dl = sub(p1, p0);
        for (int g = 0; g < 4; ++g) {
            const P3 y = add(p0, mul(0.5 * (gx[g] + 1.0), dl));
            const P3 r = sub(x, y);
            const double d = norm(r);
            b = add(b, mul(0.5 * gw[g] / (d * d * d), cross(dl, r)));
        }
    }
    return mul(1.0 / (4.0 * pi), b);
}

// Distance from x to the nearest vertex only.
inline double vertex_distance(const std::vector<P3>& pts, const P3& x) {
    double best = 1e300;
    for (const auto& p : pts) best = std::min(best, norm(sub(p, x)));
    return best;
}

}  // namespace oracle
