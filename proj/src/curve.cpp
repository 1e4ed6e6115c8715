#include "knotfield/curve.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

#include "knotfield/error.hpp"
#include "spherical_util.hpp"

namespace knotfield {

struct OrientedCurve::WritheCache {
    std::once_flag once;
    double value = 0.0;
};

namespace {

std::size_t prev(std::size_t i, std::size_t n) { return i == 0 ? n - 1 : i - 1; }
std::size_t next(std::size_t i, std::size_t n) { return i + 1 == n ? 0 : i + 1; }

// Signed solid angle swept by the unit chord from segment [p1, p2] to
// segment [p3, p4]: the geodesic quadrilateral with corners at the four
// endpoint chords.
double segment_pair_solid_angle(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4) {
    const Vec3 a = normalized(p3 - p1);
    const Vec3 b = normalized(p4 - p1);
    const Vec3 c = normalized(p4 - p2);
    const Vec3 d = normalized(p3 - p2);
    return spherical_triangle_area(a, b, c) + spherical_triangle_area(a, c, d);
}

// Signed rotation angle taking u onto v about the unit axis t (u, v perpendicular to t).
double signed_angle_about(const Vec3& u, const Vec3& v, const Vec3& t) {
    return std::atan2(dot(cross(u, v), t), dot(u, v));
}

std::string line_error(std::size_t line, const std::string& msg) {
    return "line " + std::to_string(line) + ": " + msg;
}

}  // namespace

FrenetFrames frenet_frames(std::span<const Vec3> pts) {
    const std::size_t n = pts.size();
    FrenetFrames f;
    f.tangents.resize(n);
    f.normals.resize(n);
    f.binormals.resize(n);
    f.curvature.resize(n);
    f.transported.assign(n, 0);

    std::vector<Vec3> kperp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& a = pts[prev(i, n)];
        const Vec3& b = pts[i];
        const Vec3& c = pts[next(i, n)];
        const double h0 = norm(b - a);
        const double h1 = norm(c - b);
        const Vec3 t = normalized(c - a);
        const Vec3 kv = ((c - b) / h1 - (b - a) / h0) * (2.0 / (h0 + h1));
        kperp[i] = kv - dot(kv, t) * t;
        f.tangents[i] = t;
        f.curvature[i] = norm(kperp[i]);
        if (f.curvature[i] < 1e-9 / (0.5 * (h0 + h1))) f.transported[i] = 1;
    }

    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (!f.transported[i]) { start = i; break; }
    }
    if (start == n) {
        // Nowhere curved: seed with any perpendicular and transport around.
        start = 0;
        const Vec3& t = f.tangents[0];
        const Vec3 trial = std::abs(t.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        f.normals[0] = normalized(trial - dot(trial, t) * t);
    } else {
        f.normals[start] = kperp[start] / f.curvature[start];
    }
    f.binormals[start] = cross(f.tangents[start], f.normals[start]);

    for (std::size_t step = 1; step < n; ++step) {
        const std::size_t i = (start + step) % n;
        const Vec3& t = f.tangents[i];
        if (f.transported[i]) {
            const std::size_t j = prev(i, n);
            Vec3 nn = parallel_transport(f.normals[j], f.tangents[j], t);
            nn -= dot(nn, t) * t;
            f.normals[i] = normalized(nn);
            f.curvature[i] = 0.0;
        } else {
            f.normals[i] = kperp[i] / f.curvature[i];
        }
        f.binormals[i] = cross(t, f.normals[i]);
    }
    return f;
}

OrientedCurve OrientedCurve::from_points(std::vector<Vec3> points) {
    const std::size_t n = points.size();
    if (n < 3) {
        throw Error(ErrorKind::validation,
                    "curve needs at least 3 points, got " + std::to_string(n));
    }
    double extent = 0.0;
    for (const auto& p : points) extent = std::max({extent, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    const double tiny = 1e-12 * std::max(1.0, extent);

    OrientedCurve c;
    c.seg_lengths_.resize(n);
    c.seg_dirs_.resize(n);
    c.arclength_.resize(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 d = points[next(i, n)] - points[i];
        const double len = norm(d);
        if (!(len > tiny)) {
            throw Error(ErrorKind::validation,
                        "zero-length segment between points " + std::to_string(i) + " and " +
                            std::to_string(next(i, n)) + " (repeated point)");
        }
        c.seg_lengths_[i] = len;
        c.seg_dirs_[i] = d / len;
        c.arclength_[i] = s;
        s += len;
    }
    c.total_length_ = s;
    c.points_ = std::move(points);
    c.frames_ = frenet_frames(c.points_);
    c.writhe_cache_ = std::make_shared<WritheCache>();
    return c;
}

double OrientedCurve::min_segment_length() const {
    return *std::min_element(seg_lengths_.begin(), seg_lengths_.end());
}

double OrientedCurve::max_segment_length() const {
    return *std::max_element(seg_lengths_.begin(), seg_lengths_.end());
}

double OrientedCurve::min_radius_of_curvature() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i) {
        if (!frames_.transported[i]) best = std::min(best, 1.0 / frames_.curvature[i]);
    }
    return best;
}

double OrientedCurve::min_self_distance(double skip) const {
    const std::size_t n = size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            double sep = std::abs(arclength_[j] - arclength_[i]);
            sep = std::min(sep, total_length_ - sep);
            if (sep <= skip) continue;
            best = std::min(best, segment_segment_distance(points_[i], point(i + 1), points_[j], point(j + 1)));
        }
    }
    return best;
}

double OrientedCurve::writhe() const {
    std::call_once(writhe_cache_->once, [this] { writhe_cache_->value = knotfield::writhe(*this); });
    return writhe_cache_->value;
}

OrientedCurve OrientedCurve::reversed() const {
    std::vector<Vec3> pts(points_.rbegin(), points_.rend());
    return from_points(std::move(pts));
}

OrientedCurve OrientedCurve::translated(const Vec3& shift) const {
    std::vector<Vec3> pts = points_;
    for (auto& p : pts) p += shift;
    return from_points(std::move(pts));
}

Link::Link(std::vector<OrientedCurve> components) : components_(std::move(components)) {
    if (components_.empty()) throw Error(ErrorKind::validation, "link has no components");
    for (std::size_t a = 0; a < components_.size(); ++a) {
        for (std::size_t b = a + 1; b < components_.size(); ++b) {
            const auto& ca = components_[a];
            const auto& cb = components_[b];
            for (std::size_t i = 0; i < ca.size(); ++i) {
                for (std::size_t j = 0; j < cb.size(); ++j) {
                    if (segment_segment_distance(ca.point(i), ca.point(i + 1), cb.point(j), cb.point(j + 1)) <= 0.0) {
                        throw Error(ErrorKind::validation, "components " + std::to_string(a) + " and " +
                                                               std::to_string(b) + " intersect");
                    }
                }
            }
        }
    }
}

double Link::max_segment_length() const {
    double m = 0.0;
    for (const auto& c : components_) m = std::max(m, c.max_segment_length());
    return m;
}

OrientedCurve resample(const OrientedCurve& curve, double ds) {
    const double len = curve.total_length();
    if (!(ds > 0.0) || !(ds < len / 3.0)) {
        throw Error(ErrorKind::domain, "resample spacing " + std::to_string(ds) +
                                           " must be positive and below a third of the curve length " +
                                           std::to_string(len));
    }
    const auto count = static_cast<std::size_t>(std::max(3L, std::lround(len / ds)));
    const double step = len / static_cast<double>(count);
    const auto arc = curve.arclength();
    const auto seg = curve.seg_lengths();
    const std::size_t n = curve.size();

    std::vector<Vec3> out;
    out.reserve(count);
    std::size_t i = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double s = step * static_cast<double>(k);
        while (i + 1 < n && arc[i + 1] <= s) ++i;
        const double u = std::clamp((s - arc[i]) / seg[i], 0.0, 1.0);
        out.push_back(curve.point(i) + u * (curve.point(i + 1) - curve.point(i)));
    }
    return OrientedCurve::from_points(std::move(out));
}

Link resample(const Link& link, double ds) {
    std::vector<OrientedCurve> comps;
    comps.reserve(link.size());
    for (const auto& c : link) comps.push_back(resample(c, ds));
    return Link(std::move(comps));
}

double writhe(const OrientedCurve& curve) {
    const std::size_t n = curve.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& p1 = curve.point(i);
        const Vec3& p2 = curve.point(i + 1);
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the closing segment
            sum += segment_pair_solid_angle(p1, p2, curve.point(j), curve.point(j + 1));
        }
    }
    // Each unordered pair counted once; the Gauss integral counts it twice over 4pi.
    return -sum / kTwoPi;
}

LinkingIntegral linking_integral(const OrientedCurve& a, const OrientedCurve& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Vec3& p1 = a.point(i);
        const Vec3& p2 = a.point(i + 1);
        for (std::size_t j = 0; j < b.size(); ++j) {
            sum += segment_pair_solid_angle(p1, p2, b.point(j), b.point(j + 1));
        }
    }
    LinkingIntegral r;
    r.raw = -sum / kFourPi;
    r.value = std::lround(r.raw);
    r.residual = std::abs(r.raw - static_cast<double>(r.value));
    return r;
}

long linking_number(const OrientedCurve& a, const OrientedCurve& b) {
    const auto r = linking_integral(a, b);
    if (r.residual > 0.05) {
        throw Error(ErrorKind::resolution, "linking integral " + std::to_string(r.raw) +
                                               " is not close to an integer; refine the curves");
    }
    return r.value;
}

double projective_twist(const OrientedCurve& curve, const Vec3& x) {
    const std::size_t n = curve.size();
    const auto dirs = curve.seg_directions();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 d = curve.point(i) - x;
        const double r = norm(d);
        if (r < 1e-9) throw Error(ErrorKind::degenerate, "viewpoint lies on the curve");
        const Vec3 nv = d / r;
        const Vec3& a = dirs[prev(i, n)];
        const Vec3& b = dirs[i];
        for (const Vec3* t : {&a, &b}) {
            if (1.0 - std::abs(dot(nv, *t)) < 1e-9) {
                throw Error(ErrorKind::degenerate,
                            "projection has a cusp at arclength " + std::to_string(curve.arclength()[i]));
            }
        }
        Vec3 k = cross(a, b);
        const double s = norm(k);
        if (s < 1e-14) continue;
        k /= s;
        const double q = dot(nv, k);
        const double wa = -dot(nv, cross(k, a));
        const double wb = -dot(nv, cross(k, b));
        if (std::abs(q) < 1e-9) {
            // The line of sight lies in the osculating plane of the vertex.
            if (wa * wb < 0.0) {
                throw Error(ErrorKind::degenerate,
                            "projection has a cusp at arclength " + std::to_string(curve.arclength()[i]));
            }
            continue;
        }
        total += std::atan(wb / q) - std::atan(wa / q);
    }
    return total / kTwoPi;
}

double fuller_writhe_mod2(const OrientedCurve& curve, const Vec3& n_inf) {
    const std::size_t n = curve.size();
    const auto dirs = curve.seg_directions();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& a = dirs[prev(i, n)];
        const Vec3& b = dirs[i];
        if (1.0 + detail::arc_min_dot(a, b, n_inf) < 1e-9) {
            throw Error(ErrorKind::degenerate,
                        "tangent antipodal to n_inf near arclength " + std::to_string(curve.arclength()[i]) +
                            "; choose a different direction");
        }
        total += spherical_triangle_area(n_inf, a, b);
    }
    return wrap_4pi(total);
}

double frenet_twist(const OrientedCurve& curve) {
    const std::size_t n = curve.size();
    const auto t = curve.tangents();
    const auto nn = curve.normals();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = next(i, n);
        const Vec3 moved = parallel_transport(nn[i], t[i], t[j]);
        total += signed_angle_about(moved, nn[j], t[j]);
    }
    return total / kTwoPi;
}

// --- file format -------------------------------------------------------------

namespace {

struct LineReader {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t lineno = 0;

    // Next non-blank line with comments stripped; false at end of input.
    bool next(std::string_view& out) {
        while (pos < text.size()) {
            const std::size_t end = std::min(text.find('\n', pos), text.size());
            std::string_view line = text.substr(pos, end - pos);
            pos = end + 1;
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string_view::npos) continue;
            const auto last = line.find_last_not_of(" \t\r");
            out = line.substr(first, last - first + 1);
            return true;
        }
        return false;
    }
};

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_double(std::string_view tok, double& v) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    return ec == std::errc{} && ptr == tok.data() + tok.size() && std::isfinite(v);
}

std::size_t parse_header(LineReader& rd, std::string_view key) {
    std::string_view line;
    if (!rd.next(line)) {
        throw Error(ErrorKind::parse, line_error(rd.lineno + 1, "expected '" + std::string(key) + ": <count>'"));
    }
    const auto colon = line.find(':');
    std::string_view name = line.substr(0, colon);
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.remove_suffix(1);
    if (colon == std::string_view::npos || name != key) {
        throw Error(ErrorKind::parse, line_error(rd.lineno, "expected '" + std::string(key) + ": <count>', found '" +
                                                                std::string(line) + "'"));
    }
    const auto toks = split_ws(line.substr(colon + 1));
    long long count = -1;
    if (toks.size() == 1) {
        const auto [ptr, ec] = std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), count);
        if (ec != std::errc{} || ptr != toks[0].data() + toks[0].size()) count = -1;
    }
    if (count < 0) {
        throw Error(ErrorKind::parse, line_error(rd.lineno, "field '" + std::string(key) +
                                                                "' needs a non-negative integer count"));
    }
    return static_cast<std::size_t>(count);
}

}  // namespace

Link parse_link(std::string_view text) {
    LineReader rd{text};
    const std::size_t ncomp = parse_header(rd, "components");
    if (ncomp == 0) throw Error(ErrorKind::validation, "file declares zero components");

    std::vector<OrientedCurve> comps;
    for (std::size_t c = 0; c < ncomp; ++c) {
        const std::size_t npts = parse_header(rd, "points");
        if (npts < 3) {
            throw Error(ErrorKind::validation, "component " + std::to_string(c) + " has " + std::to_string(npts) +
                                                   " points; at least 3 are required");
        }
        std::vector<Vec3> pts;
        pts.reserve(npts);
        for (std::size_t k = 0; k < npts; ++k) {
            std::string_view line;
            if (!rd.next(line)) {
                throw Error(ErrorKind::parse, line_error(rd.lineno + 1, "component " + std::to_string(c) +
                                                                            ": expected " + std::to_string(npts) +
                                                                            " points, found " + std::to_string(k)));
            }
            const auto toks = split_ws(line);
            Vec3 p;
            if (toks.size() != 3 || !parse_double(toks[0], p.x) || !parse_double(toks[1], p.y) ||
                !parse_double(toks[2], p.z)) {
                throw Error(ErrorKind::parse,
                            line_error(rd.lineno, "expected three coordinates 'x y z', found '" + std::string(line) + "'"));
            }
            pts.push_back(p);
        }
        try {
            comps.push_back(OrientedCurve::from_points(std::move(pts)));
        } catch (const Error& e) {
            throw Error(e.kind(), "component " + std::to_string(c) + ": " + e.what());
        }
    }
    std::string_view extra;
    if (rd.next(extra)) {
        throw Error(ErrorKind::parse, line_error(rd.lineno, "unexpected content after last component"));
    }
    return Link(std::move(comps));
}

Link load_link(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open curve file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_link(ss.str());
}

std::string format_link(const Link& link) {
    std::string out = "components: " + std::to_string(link.size()) + "\n";
    char buf[96];
    for (const auto& c : link) {
        out += "points: " + std::to_string(c.size()) + "\n";
        for (const auto& p : c.points()) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
            out += buf;
        }
    }
    return out;
}

void save_link(const Link& link, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write curve file " + path.string());
    out << format_link(link);
}

// --- geometry helpers ----------------------------------------------------------

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b, double* t) {
    const Vec3 ab = b - a;
    const double l2 = norm2(ab);
    double u = l2 > 0.0 ? dot(p - a, ab) / l2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    if (t) *t = u;
    return norm(p - (a + u * ab));
}

double segment_segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
    // Closest points of two segments (Ericson, Real-Time Collision Detection 5.1.9).
    const Vec3 d1 = p1 - p0;
    const Vec3 d2 = q1 - q0;
    const Vec3 r = p0 - q0;
    const double a = dot(d1, d1);
    const double e = dot(d2, d2);
    const double f = dot(d2, r);
    double s = 0.0;
    double t = 0.0;
    if (a <= 0.0 && e <= 0.0) return norm(r);
    if (a <= 0.0) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = dot(d1, r);
        if (e <= 0.0) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = dot(d1, d2);
            const double denom = a * e - b * b;
            s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return norm((p0 + s * d1) - (q0 + t * d2));
}

double distance_to_curve(const OrientedCurve& curve, const Vec3& x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        best = std::min(best, point_segment_distance(x, curve.point(i), curve.point(i + 1)));
    }
    return best;
}

double distance_to_link(const Link& link, const Vec3& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : link) best = std::min(best, distance_to_curve(c, x));
    return best;
}

}  // namespace knotfield
