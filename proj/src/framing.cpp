#include "knotfield/framing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "knotfield/error.hpp"

namespace knotfield {

namespace {

constexpr int kScan = 16;

// Root of omega on the normal circle at vertex i, as an angle from N towards B.
double frame_angle(const Link& link, const OrientedCurve& curve, std::size_t i, double eps, const EvalConfig& cfg) {
    const Vec3& y = curve.point(i);
    const Vec3& nv = curve.normals()[i];
    const Vec3& bv = curve.binormals()[i];
    auto omega_at = [&](double theta) {
        return omega_point_infinity(link, y + eps * (std::cos(theta) * nv + std::sin(theta) * bv), cfg);
    };

    std::array<double, kScan + 1> raw{};
    std::array<double, kScan + 1> lift{};
    for (int k = 0; k <= kScan; ++k) {
        raw[k] = k == kScan ? raw[0] : omega_at(kTwoPi * k / kScan);
        lift[k] = k == 0 ? raw[0] : lift[k - 1] + diff_4pi(raw[k], raw[k - 1]);
    }
    const double winding = (lift[kScan] - lift[0]) / kFourPi;
    if (std::abs(winding - 1.0) > 1e-6) {
        throw Error(ErrorKind::resolution, "omega winds " + std::to_string(winding) +
                                               " times around the normal circle at vertex " + std::to_string(i) +
                                               "; refine the curve or reduce eps");
    }
    if (raw[0] == 0.0) return 0.0;

    const double target = kFourPi;
    int k = 0;
    while (k < kScan && !(lift[k] < target && lift[k + 1] >= target)) ++k;
    if (k == kScan) {
        throw Error(ErrorKind::resolution, "could not bracket the framing root at vertex " + std::to_string(i));
    }
    double lo = kTwoPi * k / kScan;
    double hi = kTwoPi * (k + 1) / kScan;
    const double base = lift[k];
    const double ref = raw[k];
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = base + diff_4pi(omega_at(mid), ref) - target;
        if (g < 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double default_framing_epsilon(const OrientedCurve& curve) { return 0.02 * curve.min_radius_of_curvature(); }

Framing solid_angle_framing(const Link& link, std::size_t component, double eps, const EvalConfig& cfg,
                            unsigned workers) {
    if (component >= link.size()) throw Error(ErrorKind::domain, "no component " + std::to_string(component));
    cfg.validate();
    const OrientedCurve& curve = link[component];
    const double rho = curve.min_radius_of_curvature();
    if (!(eps > 0.0)) throw Error(ErrorKind::domain, "framing eps must be positive");
    if (!(eps < 0.05 * rho)) {
        throw Error(ErrorKind::domain, "framing eps " + std::to_string(eps) +
                                           " must be below 0.05 times the minimum radius of curvature " +
                                           std::to_string(rho));
    }
    const double self = curve.min_self_distance(kPi * rho);
    if (!(eps < 0.2 * self)) {
        throw Error(ErrorKind::domain, "framing eps " + std::to_string(eps) +
                                           " must be below 0.2 times the curve's self-distance " + std::to_string(self));
    }
    for (std::size_t c = 0; c < link.size(); ++c) {
        if (c == component) continue;
        double gap = std::numeric_limits<double>::infinity();
        for (const auto& p : curve.points()) gap = std::min(gap, distance_to_curve(link[c], p));
        if (!(eps < 0.2 * gap)) {
            throw Error(ErrorKind::domain, "framing eps " + std::to_string(eps) +
                                               " must be below 0.2 times the distance to component " +
                                               std::to_string(c));
        }
    }

    const std::size_t n = curve.size();
    std::vector<double> theta(n);
    parallel_for(n, workers, [&](std::size_t i) { theta[i] = frame_angle(link, curve, i, eps, cfg); });

    Framing f{curve, {}, {}, eps, 0.0};
    f.alpha.resize(n);
    f.pushoff.resize(n);
    f.alpha[0] = theta[0];
    for (std::size_t i = 1; i < n; ++i) f.alpha[i] = f.alpha[i - 1] + std::remainder(theta[i] - f.alpha[i - 1], kTwoPi);
    const double closing = f.alpha[n - 1] + std::remainder(theta[0] - f.alpha[n - 1], kTwoPi);
    f.alpha_winding = closing - f.alpha[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double a = f.alpha[i];
        f.pushoff[i] = curve.point(i) + eps * (std::cos(a) * curve.normals()[i] + std::sin(a) * curve.binormals()[i]);
    }
    return f;
}

Framing solid_angle_framing(const OrientedCurve& curve, double eps, const EvalConfig& cfg, unsigned workers) {
    return solid_angle_framing(Link({curve}), 0, eps, cfg, workers);
}

long framing_self_link(const Framing& framing) {
    return linking_number(framing.base, OrientedCurve::from_points(framing.pushoff));
}

double local_omega_model(double eps_tilde, double theta, double alpha) {
    if (!(eps_tilde > 0.0)) throw Error(ErrorKind::domain, "eps_tilde must be positive");
    return wrap_4pi(2.0 * (theta - alpha) + eps_tilde * std::log(8.0 / eps_tilde) * std::sin(theta));
}

Vec3 hyperbola_projection(double eps_tilde, double theta, double t) {
    if (!(eps_tilde > 0.0)) throw Error(ErrorKind::domain, "eps_tilde must be positive");
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const double r = std::sqrt(2.0 * eps_tilde);
    // Components in the frame rotated by theta/2 about T.
    const double xr = r * c * std::sinh(t);
    const double yr = -r * s * std::cosh(t);
    const double scale = 1.0 / std::sqrt(1.0 + eps_tilde * (std::cosh(2.0 * t) - std::cos(theta)));
    return scale * Vec3{c * xr - s * yr, s * xr + c * yr, 1.0};
}

std::vector<Vec3> oracle_circle_points(double rho, std::size_t n, const Vec3& centre) {
    std::vector<Vec3> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        pts[i] = centre + Vec3{rho * std::cos(t), -rho * std::sin(t), 0.0};
    }
    return pts;
}

double exact_circle_omega(double rho, const Vec3& x) {
    const double rxy = std::hypot(x.x, x.y);
    if (rxy <= 1e-15 * std::max(1.0, rho)) {
        return wrap_4pi(kTwoPi * (1.0 - x.z / std::hypot(x.z, rho)));
    }
    if (std::abs(x.z) < 1e-12 && std::abs(rxy - rho) < 1e-12) {
        throw Error(ErrorKind::degenerate, "point lies on the circle");
    }
    const EvalConfig cfg;
    auto polygon = [&](std::size_t n) {
        return omega_point_infinity(OrientedCurve::from_points(oracle_circle_points(rho, n)), x, cfg);
    };
    // Polygon error is O(1/n^2); extrapolate each doubling and stop once the
    // extrapolated values settle.
    std::size_t n = 64;
    double prev = polygon(n);
    double prev_extrap = std::numeric_limits<double>::quiet_NaN();
    for (n *= 2; n <= (std::size_t{1} << 20); n *= 2) {
        const double cur = prev + diff_4pi(polygon(n), prev);
        const double extrap = (4.0 * cur - prev) / 3.0;
        if (std::abs(extrap - prev_extrap) < 1e-9) return wrap_4pi(extrap);
        prev = cur;
        prev_extrap = extrap;
    }
    throw Error(ErrorKind::resolution, "circle refinement did not converge");
}

}  // namespace knotfield
