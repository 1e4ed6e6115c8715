#include "knotfield/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <json.hpp>

#include "knotfield/error.hpp"
#include "knotfield/io.hpp"
#include "knotfield/spherical.hpp"

namespace knotfield {

Vec3 Rng::unit_vector() {
    const double z = 2.0 * uniform() - 1.0;
    const double phi = kTwoPi * uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

namespace {

struct Box {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};
};

Box bounding_box(const Link& link) {
    Box b;
    for (const auto& c : link) {
        for (const auto& p : c.points()) {
            b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y), std::min(b.lo.z, p.z)};
            b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y), std::max(b.hi.z, p.z)};
        }
    }
    return b;
}

bool cusp_free(const Link& link, const Vec3& x, double margin) {
    for (const auto& c : link) {
        const auto dirs = c.seg_directions();
        const std::size_t n = c.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 nv = normalized(c.point(i) - x);
            if (1.0 - std::abs(dot(nv, dirs[i])) < margin) return false;
            if (1.0 - std::abs(dot(nv, dirs[(i + n - 1) % n])) < margin) return false;
        }
    }
    return true;
}

// Small circle of radius r about vertex i in its normal plane, turning from N to B.
std::vector<Vec3> meridian(const OrientedCurve& c, std::size_t i, double r, std::size_t count, const Vec3& shift = {}) {
    std::vector<Vec3> loop(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(count);
        loop[k] = c.point(i) + shift + r * (std::cos(t) * c.normals()[i] + std::sin(t) * c.binormals()[i]);
    }
    return loop;
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

CheckResult check_cross_evaluator(const Link& link, const std::vector<Vec3>& pts) {
    const EvalConfig cfg;
    double worst = 0.0;
    std::size_t quad_used = 0;
    for (const auto& x : pts) {
        std::vector<double> vals{omega_point_infinity(link, x, cfg), omega_gauss_bonnet(link, x),
                                 omega_point_tangent_dev(link, x, 1), omega_point_tangent_dev(link, x, -1)};
        if (quadrature_resolved(link, x, cfg)) {
            vals.push_back(omega_point_infinity_quadrature(link, x, cfg));
            ++quad_used;
        }
        for (std::size_t a = 0; a < vals.size(); ++a) {
            for (std::size_t b = a + 1; b < vals.size(); ++b) worst = std::max(worst, std::abs(diff_4pi(vals[a], vals[b])));
        }
    }
    const double tol = 1e-3 * kFourPi;
    return {"cross_evaluator", worst <= tol, worst, tol,
            std::to_string(pts.size()) + " points, quadrature compared at " + std::to_string(quad_used)};
}

CheckResult check_circulation(const Link& link) {
    const EvalConfig cfg;
    double worst = 0.0;
    std::string detail;
    for (std::size_t ci = 0; ci < link.size(); ++ci) {
        const auto& c = link[ci];
        double clearance = c.min_self_distance(kPi * c.min_radius_of_curvature());
        for (std::size_t o = 0; o < link.size(); ++o) {
            if (o != ci) clearance = std::min(clearance, distance_to_curve(link[o], c.point(0)));
        }
        const double r = 0.1 * std::min(c.min_radius_of_curvature(), clearance);
        const auto linked = meridian(c, 0, r, 1000);
        const auto unlinked = meridian(c, 0, r, 1000, 2.5 * r * c.normals()[0]);
        const long lk = linking_number(OrientedCurve::from_points(linked), c);
        const double d1 = omega_lift_change(link, linked, cfg) - kFourPi * static_cast<double>(lk);
        const double d0 = omega_lift_change(link, unlinked, cfg);
        worst = std::max({worst, std::abs(d1), std::abs(d0)});
        detail += (ci ? "; " : "") + std::string("component ") + std::to_string(ci) + " meridian lk " +
                  std::to_string(lk);
    }
    return {"circulation", worst <= 1e-6, worst, 1e-6, detail};
}

CheckResult check_harmonicity(const Link& link, const std::vector<Vec3>& pts) {
    const EvalConfig cfg;
    double coarse = 0.0;
    double fine = 0.0;
    const std::size_t use = std::min<std::size_t>(pts.size(), 32);
    for (std::size_t i = 0; i < use; ++i) {
        const double h = 0.05 * distance_to_link(link, pts[i]);
        coarse += std::abs(omega_laplacian(link, pts[i], h, cfg));
        fine += std::abs(omega_laplacian(link, pts[i], 0.5 * h, cfg));
    }
    const double ratio = fine > 0.0 ? coarse / fine : std::numeric_limits<double>::infinity();
    return {"harmonicity", ratio >= 3.5, ratio, 3.5,
            fmt("mean residual %.3g at h, %.3g at h/2", coarse / double(use), fine / double(use))};
}

CheckResult check_self_linking(const Link& link, const std::vector<Vec3>& pts) {
    double worst = 0.0;
    std::size_t parity_fail = 0;
    const std::size_t use = std::min<std::size_t>(pts.size(), 100);
    for (const auto& c : link) {
        const double wr = c.writhe();
        for (std::size_t i = 0; i < use; ++i) {
            const double sl = projective_twist(c, pts[i]) + wr;
            const double near = std::round(sl);
            worst = std::max(worst, std::abs(sl - near));
            const int d = crossing_count(project(c, pts[i]));
            if (((static_cast<long>(near) - d) % 2 + 2) % 2 != 0) ++parity_fail;
        }
    }
    return {"self_linking", worst <= 2e-2 && parity_fail == 0, worst, 2e-2,
            std::to_string(parity_fail) + " parity mismatches against the crossing count"};
}

CheckResult check_fuller(const Link& link, Rng& rng) {
    double worst = 0.0;
    std::size_t used = 0;
    for (const auto& c : link) {
        const double wr = c.writhe();
        std::size_t found = 0;
        for (int attempt = 0; attempt < 1000 && found < 10; ++attempt) {
            const Vec3 n = rng.unit_vector();
            bool ok = true;
            for (const auto& t : c.seg_directions()) ok = ok && 1.0 + dot(n, t) >= 0.05;
            if (!ok) continue;
            worst = std::max(worst, std::abs(diff_4pi(fuller_writhe_mod2(c, n), kTwoPi * (1.0 + wr))));
            ++found;
        }
        used += found;
    }
    return {"fuller", worst <= 5e-3 && used > 0, worst, 5e-3, std::to_string(used) + " directions"};
}

}  // namespace

std::vector<Vec3> sample_general_points(const Link& link, std::size_t count, std::uint64_t seed,
                                        const GeneralPositionOptions& opt) {
    Rng rng(seed);
    const Box b = bounding_box(link);
    const double pad = opt.padding * norm(b.hi - b.lo);
    const Vec3 lo = b.lo - Vec3{pad, pad, pad};
    const Vec3 hi = b.hi + Vec3{pad, pad, pad};
    const double min_dist = opt.min_distance_segments * link.max_segment_length();
    const EvalConfig cfg;

    std::vector<Vec3> out;
    out.reserve(count);
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (++attempts > 1000 * (count + 10)) {
            throw Error(ErrorKind::degenerate, "could not find enough points in general position");
        }
        const Vec3 x{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), rng.uniform(lo.z, hi.z)};
        if (distance_to_link(link, x) < min_dist) continue;
        if (!cusp_free(link, x, opt.min_cusp_margin)) continue;
        try {
            (void)omega_point_infinity(link, x, cfg);
            (void)omega_gauss_bonnet(link, x);
            (void)omega_point_tangent_dev(link, x, 1);
            (void)omega_point_tangent_dev(link, x, -1);
            for (const auto& c : link) (void)projective_twist(c, x);
        } catch (const Error&) {
            continue;
        }
        out.push_back(x);
    }
    return out;
}

bool quadrature_resolved(const Link& link, const Vec3& x, const EvalConfig& cfg, double margin) {
    for (const auto& c : link) {
        const Vec3 a = choose_axis(c, x, cfg).axis;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Vec3 m = normalized(c.point(i) - x);
            if (1.0 + dot(m, a) < margin) return false;
        }
    }
    return true;
}

double omega_lift_change(const Link& link, const std::vector<Vec3>& loop, const EvalConfig& cfg) {
    const double first = omega_point_infinity(link, loop.front(), cfg);
    double prev = first;
    double total = 0.0;
    for (std::size_t k = 1; k <= loop.size(); ++k) {
        const double cur = k == loop.size() ? first : omega_point_infinity(link, loop[k], cfg);
        total += diff_4pi(cur, prev);
        prev = cur;
    }
    return total;
}

double omega_laplacian(const Link& link, const Vec3& x, double h, const EvalConfig& cfg) {
    const double c = omega_point_infinity(link, x, cfg);
    double sum = 0.0;
    for (const Vec3& d : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}) {
        sum += diff_4pi(omega_point_infinity(link, x + h * d, cfg), c);
        sum += diff_4pi(omega_point_infinity(link, x - h * d, cfg), c);
    }
    return sum / (h * h);
}

bool VerifyReport::passed() const {
    if (checks.empty()) return false;
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::to_json() const {
    nlohmann::ordered_json j;
    j["curve_hash"] = curve_hash;
    j["components"] = components;
    j["points"] = options.points;
    j["seed"] = options.seed;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"value", c.value},
                               {"tolerance", c.tolerance},
                               {"detail", c.detail}});
    }
    j["passed"] = passed();
    return j.dump(2) + "\n";
}

VerifyReport run_verify(const Link& link, const VerifyOptions& opt) {
    VerifyReport r;
    r.curve_hash = link_hash(link);
    r.components = link.size();
    r.options = opt;
    Rng rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto pts = sample_general_points(link, opt.points, opt.seed);
    r.checks.push_back(check_cross_evaluator(link, pts));
    r.checks.push_back(check_circulation(link));
    r.checks.push_back(check_harmonicity(link, pts));
    r.checks.push_back(check_self_linking(link, pts));
    r.checks.push_back(check_fuller(link, rng));
    return r;
}

VerifyReport failed_load_report(const std::string& message, const VerifyOptions& opt) {
    VerifyReport r;
    r.options = opt;
    r.checks.push_back({"load", false, 0.0, 0.0, message});
    return r;
}

}  // namespace knotfield
