#include "knotfield/knots.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <numeric>

#include "knotfield/error.hpp"

namespace knotfield::knots {

namespace {

OrientedCurve sample(std::size_t n, const std::function<Vec3(double)>& f) {
    std::vector<Vec3> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = f(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    return OrientedCurve::from_points(std::move(pts));
}

}  // namespace

OrientedCurve trefoil(std::size_t n) {
    return sample(n, [](double t) {
        return Vec3{std::sin(t) + 2.0 * std::sin(2.0 * t), std::cos(t) - 2.0 * std::cos(2.0 * t), -std::sin(3.0 * t)};
    });
}

OrientedCurve figure_eight(std::size_t n) {
    return sample(n, [](double t) {
        const double r = 2.0 + std::cos(2.0 * t);
        return Vec3{r * std::cos(3.0 * t), r * std::sin(3.0 * t), std::sin(4.0 * t)};
    });
}

OrientedCurve torus_knot(int p, int q, double big_r, double small_r, std::size_t n) {
    return sample(n, [=](double t) {
        const double r = big_r + small_r * std::cos(q * t);
        return Vec3{r * std::cos(p * t), r * std::sin(p * t), small_r * std::sin(q * t)};
    });
}

OrientedCurve circle(double rho, std::size_t n, const Vec3& centre) {
    return sample(n, [=](double t) { return centre + Vec3{rho * std::cos(t), -rho * std::sin(t), 0.0}; });
}

Link hopf(std::size_t n) {
    OrientedCurve a = sample(n, [](double t) { return Vec3{std::cos(t), std::sin(t), 0.0}; });
    OrientedCurve b = sample(n, [](double t) { return Vec3{1.0 + std::cos(t), 0.0, std::sin(t)}; });
    if (linking_number(a, b) < 0) b = b.reversed();
    return Link({std::move(a), std::move(b)});
}

Link whitehead(std::size_t n) {
    OrientedCurve a = sample(n, [](double t) {
        return Vec3{3.0 * std::sin(t), std::sin(2.0 * t), std::cos(3.0 * t)};
    });
    OrientedCurve b = sample(n, [](double t) { return Vec3{2.4 * std::cos(t), 2.4 * std::sin(t), 0.0}; });
    return Link({std::move(a), std::move(b)});
}

Link borromean(std::size_t n) {
    return Link({
        sample(n, [](double t) { return Vec3{2.0 * std::cos(t), std::sin(t), 0.0}; }),
        sample(n, [](double t) { return Vec3{0.0, 2.0 * std::cos(t), std::sin(t)}; }),
        sample(n, [](double t) { return Vec3{std::sin(t), 0.0, 2.0 * std::cos(t)}; }),
    });
}

std::vector<std::string> names() {
    return {"circle", "unknot", "trefoil", "figure-eight", "torus-P-Q", "hopf", "whitehead", "borromean"};
}

Link by_name(std::string_view name, std::size_t n) {
    if (name == "circle" || name == "unknot") return Link({circle(1.0, n)});
    if (name == "trefoil") return Link({trefoil(n)});
    if (name == "figure-eight") return Link({figure_eight(n)});
    if (name == "hopf") return hopf(n);
    if (name == "whitehead") return whitehead(n);
    if (name == "borromean") return borromean(n);
    if (name.starts_with("torus-")) {
        int p = 0;
        int q = 0;
        const char* b = name.data() + 6;
        const char* e = name.data() + name.size();
        auto r1 = std::from_chars(b, e, p);
        if (r1.ec == std::errc{} && r1.ptr < e && *r1.ptr == '-') {
            auto r2 = std::from_chars(r1.ptr + 1, e, q);
            if (r2.ec == std::errc{} && r2.ptr == e && p > 0 && q > 0 && std::gcd(p, q) == 1) {
                return Link({torus_knot(p, q, 2.0, 1.0, n)});
            }
        }
    }
    throw Error(ErrorKind::domain, "unknown curve name '" + std::string(name) + "'");
}

}  // namespace knotfield::knots
