#include "knotfield/solidangle.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "knotfield/error.hpp"
#include "knotfield/io.hpp"
#include "spherical_util.hpp"
#include "knotfield/spherical.hpp"

namespace knotfield {

namespace {

constexpr std::array<std::pair<Evaluator, std::string_view>, 5> kEvaluatorNames{{
    {Evaluator::infinity_triangle, "infinity_triangle"},
    {Evaluator::infinity_quadrature, "infinity_quadrature"},
    {Evaluator::tangent_dev_plus, "tangent_dev_plus"},
    {Evaluator::tangent_dev_minus, "tangent_dev_minus"},
    {Evaluator::gauss_bonnet, "gauss_bonnet"},
}};

std::string fmt_vec(const Vec3& v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.9g, %.9g, %.9g)", v.x, v.y, v.z);
    return buf;
}

void require_off_curve(const OrientedCurve& curve, const Vec3& x) {
    if (distance_to_curve(curve, x) <= 1e-9) {
        throw Error(ErrorKind::degenerate, "evaluation point " + fmt_vec(x) + " lies on the curve");
    }
}

std::vector<Vec3>& projected(const OrientedCurve& curve, const Vec3& x) {
    thread_local std::vector<Vec3> buf;
    buf.resize(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) buf[i] = normalized(curve.point(i) - x);
    return buf;
}

AxisChoice choose_axis_from(const std::vector<Vec3>& ns, const EvalConfig& cfg) {
    const std::array<Vec3, 3> candidates{cfg.n_inf, -cfg.n_inf, fallback_axis(cfg.fallback_seed)};
    AxisChoice best{candidates[0], 0};
    double best_margin = -1.0;
    std::size_t best_vertex = 0;
    for (int which = 0; which < 3; ++which) {
        const Vec3& axis = candidates[which];
        double worst = 3.0;
        std::size_t worst_vertex = 0;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const double v = 1.0 + dot(ns[i], axis);
            if (v < worst) {
                worst = v;
                worst_vertex = i;
            }
        }
        if (worst >= cfg.switch_threshold) return {axis, which};
        if (worst > best_margin) {
            best_margin = worst;
            best_vertex = worst_vertex;
            best = {axis, which};
        }
    }
    // Close to the curve all three axes can fall under the threshold. The
    // triangle sum stays exact, so keep the best axis unless it is truly singular.
    if (best_margin <= 1e-9) {
        throw Error(ErrorKind::degenerate, "vertex " + std::to_string(best_vertex) +
                                               " projects onto the Dirac string of all three axes");
    }
    best.which = 3;
    return best;
}

double infinity_component(const OrientedCurve& curve, const Vec3& x, const EvalConfig& cfg, bool quadrature,
                          int* which) {
    require_off_curve(curve, x);
    const auto& ns = projected(curve, x);
    const AxisChoice choice = choose_axis_from(ns, cfg);
    if (which) *which = std::max(*which, choice.which);
    const Vec3& a = choice.axis;
    const std::size_t n = ns.size();
    double total = 0.0;
    if (!quadrature) {
        for (std::size_t i = 0; i < n; ++i) total += spherical_triangle_area(a, ns[i], ns[(i + 1) % n]);
    } else {
        // One node per cell centred on a sample point: the samples lie on the
        // curve, chord midpoints do not. Cell weights use the arclength of the
        // osculating arc over each chord rather than the chord itself.
        const auto tangents = curve.tangents();
        const auto lens = curve.seg_lengths();
        const auto kappa = curve.curvature();
        auto arc = [&](std::size_t s) {
            const double k = 0.5 * (kappa[s] + kappa[(s + 1) % n]);
            return lens[s] * (1.0 + k * k * lens[s] * lens[s] / 24.0);
        };
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 d = curve.point(i) - x;
            const double r = norm(d);
            const Vec3 nm = d / r;
            const double w = 0.5 * (arc((i + n - 1) % n) + arc(i));
            total += dot(cross(a, nm), tangents[i]) * w / (r * (1.0 + dot(a, nm)));
        }
    }
    return wrap_4pi(total);
}

double infinity_link(const Link& link, const Vec3& x, const EvalConfig& cfg, bool quadrature, int* which) {
    double total = 0.0;
    for (const auto& c : link) total += infinity_component(c, x, cfg, quadrature, which);
    return wrap_4pi(total);
}

double homotopy_integrand(const Vec3& y0, const Vec3& d0, const Vec3& y1, const Vec3& d1, const Vec3& x) {
    const Vec3 e0 = y0 - x;
    const Vec3 e1 = y1 - x;
    const double r0 = norm(e0);
    const double r1 = norm(e1);
    const Vec3 n0 = e0 / r0;
    const Vec3 n1 = e1 / r1;
    const double den = 1.0 + dot(n0, n1);
    if (!(den > 1e-9)) {
        throw Error(ErrorKind::degenerate, "evaluation point " + fmt_vec(x) + " lies on the swept surface");
    }
    const Vec3 dn0 = (d0 - dot(n0, d0) * n0) / r0;
    const Vec3 dn1 = (d1 - dot(n1, d1) * n1) / r1;
    return dot(cross(n0, n1), dn0 + dn1) / den;
}

constexpr std::array<double, 4> kGaussX{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                        0.9602898564975363};
constexpr std::array<double, 4> kGaussW{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                        0.1012285362903763};

struct SegmentPair {
    Vec3 a0, d0, a1, d1;  // start points and full-segment deltas
};

double gauss8(const SegmentPair& s, const Vec3& x, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        for (const double u : {mid - half * kGaussX[k], mid + half * kGaussX[k]}) {
            sum += kGaussW[k] * homotopy_integrand(s.a0 + u * s.d0, s.d0, s.a1 + u * s.d1, s.d1, x);
        }
    }
    return sum * half;
}

double adaptive_gauss(const SegmentPair& s, const Vec3& x, double lo, double hi, double whole, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double left = gauss8(s, x, lo, mid);
    const double right = gauss8(s, x, mid, hi);
    if (depth <= 0 || std::abs(left + right - whole) < 1e-11) return left + right;
    return adaptive_gauss(s, x, lo, mid, left, depth - 1) + adaptive_gauss(s, x, mid, hi, right, depth - 1);
}

}  // namespace

std::string_view to_string(Evaluator e) {
    for (const auto& [k, name] : kEvaluatorNames) {
        if (k == e) return name;
    }
    return "unknown";
}

Evaluator parse_evaluator(std::string_view name) {
    for (const auto& [k, n] : kEvaluatorNames) {
        if (n == name) return k;
    }
    throw Error(ErrorKind::domain, "unknown evaluator '" + std::string(name) + "'");
}

void EvalConfig::validate() const {
    if (std::abs(norm(n_inf) - 1.0) > 1e-9) {
        throw Error(ErrorKind::domain, "n_inf must be a unit vector, got " + fmt_vec(n_inf));
    }
    if (!(switch_threshold > 0.0 && switch_threshold < 2.0)) {
        throw Error(ErrorKind::domain, "switch threshold must lie in (0, 2)");
    }
}

Vec3 GridSpec::node(std::size_t flat) const {
    const std::size_t k = flat % dims[2];
    const std::size_t j = (flat / dims[2]) % dims[1];
    const std::size_t i = flat / (dims[1] * dims[2]);
    return node(i, j, k);
}

void GridSpec::validate() const {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw Error(ErrorKind::domain, "grid spacing must be positive");
    for (std::size_t d : dims) {
        if (d < 2) throw Error(ErrorKind::domain, "every grid dimension must be at least 2");
    }
}

Vec3 fallback_axis(std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    // Bits to [0, 1) by hand so the axis does not depend on the library's distributions.
    const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    const double v = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    const double z = 2.0 * u - 1.0;
    const double phi = kTwoPi * v;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

AxisChoice choose_axis(const OrientedCurve& curve, const Vec3& x, const EvalConfig& cfg) {
    require_off_curve(curve, x);
    return choose_axis_from(projected(curve, x), cfg);
}

double omega_point_infinity(const OrientedCurve& curve, const Vec3& x, const EvalConfig& cfg) {
    return infinity_component(curve, x, cfg, false, nullptr);
}

double omega_point_infinity(const Link& link, const Vec3& x, const EvalConfig& cfg) {
    return infinity_link(link, x, cfg, false, nullptr);
}

double omega_point_infinity_quadrature(const OrientedCurve& curve, const Vec3& x, const EvalConfig& cfg) {
    return infinity_component(curve, x, cfg, true, nullptr);
}

double omega_point_infinity_quadrature(const Link& link, const Vec3& x, const EvalConfig& cfg) {
    return infinity_link(link, x, cfg, true, nullptr);
}

double omega_point_tangent_dev(const OrientedCurve& curve, const Vec3& x, int sign) {
    if (sign != 1 && sign != -1) throw Error(ErrorKind::domain, "tangent developable sign must be +1 or -1");
    require_off_curve(curve, x);
    const std::size_t n = curve.size();
    const auto dirs = curve.seg_directions();
    const double s = sign;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 nv = normalized(curve.point(i) - x);
        const Vec3 a = s * dirs[(i + n - 1) % n];
        const Vec3 b = s * dirs[i];
        if (1.0 + detail::arc_min_dot(a, b, nv) < 1e-9) {
            throw Error(ErrorKind::degenerate,
                        "evaluation point " + fmt_vec(x) + " is on the tangent developable near arclength " +
                            std::to_string(curve.arclength()[i]) + "; use the other sign or another evaluator");
        }
        total += spherical_triangle_area(nv, a, b);
    }
    return wrap_4pi(kTwoPi * (1.0 + s * curve.writhe()) - total);
}

double omega_point_tangent_dev(const Link& link, const Vec3& x, int sign) {
    double total = 0.0;
    for (const auto& c : link) total += omega_point_tangent_dev(c, x, sign);
    return wrap_4pi(total);
}

double homotopy_delta(const OrientedCurve& k0, const OrientedCurve& k1, const Vec3& x) {
    if (k0.size() != k1.size()) {
        throw Error(ErrorKind::validation, "homotopy needs equal vertex counts, got " + std::to_string(k0.size()) +
                                               " and " + std::to_string(k1.size()));
    }
    require_off_curve(k0, x);
    require_off_curve(k1, x);
    double total = 0.0;
    for (std::size_t i = 0; i < k0.size(); ++i) {
        const SegmentPair s{k0.point(i), k0.point(i + 1) - k0.point(i), k1.point(i), k1.point(i + 1) - k1.point(i)};
        total += adaptive_gauss(s, x, 0.0, 1.0, gauss8(s, x, 0.0, 1.0), 12);
    }
    return std::fmod(total, kFourPi);
}

double omega_point(const Link& link, const Vec3& x, const EvalConfig& cfg) {
    switch (cfg.evaluator) {
        case Evaluator::infinity_triangle: return infinity_link(link, x, cfg, false, nullptr);
        case Evaluator::infinity_quadrature: return infinity_link(link, x, cfg, true, nullptr);
        case Evaluator::tangent_dev_plus: return omega_point_tangent_dev(link, x, 1);
        case Evaluator::tangent_dev_minus: return omega_point_tangent_dev(link, x, -1);
        case Evaluator::gauss_bonnet: return omega_gauss_bonnet(link, x);
    }
    throw Error(ErrorKind::domain, "unknown evaluator");
}

ScalarField omega_grid(const Link& link, const GridSpec& grid, const EvalConfig& cfg, unsigned workers) {
    grid.validate();
    cfg.validate();

    ScalarField f;
    f.grid = grid;
    f.values.assign(grid.count(), kSentinel);
    f.meta.quantity = "omega";
    f.meta.evaluator = std::string(to_string(cfg.evaluator));
    f.meta.curve_hash = link_hash(link);
    f.meta.config = cfg;
    f.meta.components = link.size();
    f.meta.fallback_axis = fallback_axis(cfg.fallback_seed);
    if (link.max_segment_length() > grid.spacing) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "curve segment length %.6g exceeds grid spacing %.6g; consider resampling",
                      link.max_segment_length(), grid.spacing);
        f.meta.warnings.emplace_back(buf);
    }

    // Curve-axis writhe is cached lazily; force it before the threads start.
    if (cfg.evaluator == Evaluator::tangent_dev_plus || cfg.evaluator == Evaluator::tangent_dev_minus) {
        for (const auto& c : link) (void)c.writhe();
    }

    std::vector<std::uint8_t> axis_used(grid.count(), 0);
    const bool infinity =
        cfg.evaluator == Evaluator::infinity_triangle || cfg.evaluator == Evaluator::infinity_quadrature;
    const bool quad = cfg.evaluator == Evaluator::infinity_quadrature;

    parallel_for(grid.count(), workers, [&](std::size_t idx) {
        const Vec3 x = grid.node(idx);
        if (distance_to_link(link, x) <= 1e-9) return;
        try {
            if (infinity) {
                int which = 0;
                f.values[idx] = infinity_link(link, x, cfg, quad, &which);
                axis_used[idx] = static_cast<std::uint8_t>(which);
            } else {
                f.values[idx] = omega_point(link, x, cfg);
            }
        } catch (const Error& e) {
            const std::size_t k = idx % grid.dims[2];
            const std::size_t j = (idx / grid.dims[2]) % grid.dims[1];
            const std::size_t i = idx / (grid.dims[1] * grid.dims[2]);
            throw Error(e.kind(), "node (" + std::to_string(i) + ", " + std::to_string(j) + ", " +
                                      std::to_string(k) + ") at " + fmt_vec(x) + ": " + e.what());
        }
    });

    for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
        if (f.values[idx] == kSentinel) f.sentinel_nodes.push_back(idx);
        if (axis_used[idx] == 1) ++f.meta.flipped_axis_nodes;
        if (axis_used[idx] == 2) ++f.meta.random_axis_nodes;
        if (axis_used[idx] == 3) ++f.meta.below_threshold_nodes;
    }
    return f;
}

}  // namespace knotfield
