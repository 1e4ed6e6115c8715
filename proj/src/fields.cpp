#include "knotfield/fields.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "knotfield/error.hpp"
#include "knotfield/io.hpp"

namespace knotfield {

NearestPoint nearest_point(const Link& link, const Vec3& x) {
    NearestPoint best{std::numeric_limits<double>::infinity(), 0, 0.0};
    for (std::size_t c = 0; c < link.size(); ++c) {
        const auto& curve = link[c];
        const auto arc = curve.arclength();
        const auto seg = curve.seg_lengths();
        for (std::size_t i = 0; i < curve.size(); ++i) {
            double t = 0.0;
            const double d = point_segment_distance(x, curve.point(i), curve.point(i + 1), &t);
            if (d < best.distance) best = {d, c, arc[i] + t * seg[i]};
        }
    }
    return best;
}

ScalarField distance_field(const Link& link, const GridSpec& grid, unsigned workers) {
    grid.validate();
    ScalarField f;
    f.grid = grid;
    f.values.resize(grid.count());
    f.meta.quantity = "distance";
    f.meta.curve_hash = link_hash(link);
    f.meta.components = link.size();
    parallel_for(grid.count(), workers, [&](std::size_t i) { f.values[i] = distance_to_link(link, grid.node(i)); });
    return f;
}

Modulation::Modulation(std::vector<std::pair<double, double>> table) : table_(std::move(table)) {
    if (table_.empty()) throw Error(ErrorKind::validation, "modulation table is empty");
    for (std::size_t i = 0; i < table_.size(); ++i) {
        if (!(table_[i].first >= 0.0) || !std::isfinite(table_[i].second)) {
            throw Error(ErrorKind::validation, "modulation entry " + std::to_string(i) + " is invalid");
        }
        if (i > 0 && !(table_[i].first > table_[i - 1].first)) {
            throw Error(ErrorKind::validation, "modulation arclengths must increase strictly");
        }
    }
}

Modulation Modulation::parse(std::string_view text) {
    std::vector<std::pair<double, double>> table;
    std::size_t pos = 0;
    std::size_t lineno = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        double vals[2];
        int got = 0;
        const char* p = line.data();
        const char* e = line.data() + line.size();
        while (p < e) {
            while (p < e && (*p == ' ' || *p == '\t' || *p == '\r' || *p == ',')) ++p;
            if (p == e) break;
            if (got == 2) throw Error(ErrorKind::parse, "modulation line " + std::to_string(lineno) + ": too many values");
            const auto r = std::from_chars(p, e, vals[got]);
            if (r.ec != std::errc{}) {
                throw Error(ErrorKind::parse, "modulation line " + std::to_string(lineno) + ": expected 's m'");
            }
            p = r.ptr;
            ++got;
        }
        if (got == 0) continue;
        if (got != 2) throw Error(ErrorKind::parse, "modulation line " + std::to_string(lineno) + ": expected 's m'");
        table.emplace_back(vals[0], vals[1]);
    }
    return Modulation(std::move(table));
}

Modulation Modulation::load(const std::filesystem::path& path) { return parse(read_text(path)); }

Modulation Modulation::sinusoid(double amplitude, int periods, double length, std::size_t samples) {
    std::vector<std::pair<double, double>> table(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        const double s = length * static_cast<double>(j) / static_cast<double>(samples);
        table[j] = {s, amplitude * std::sin(kTwoPi * periods * s / length)};
    }
    return Modulation(std::move(table));
}

double Modulation::operator()(double s, double length) const {
    if (table_.size() == 1) return table_[0].second;
    s = std::fmod(s, length);
    if (s < 0.0) s += length;
    const auto it = std::upper_bound(table_.begin(), table_.end(), s,
                                     [](double v, const std::pair<double, double>& e) { return v < e.first; });
    std::pair<double, double> lo;
    std::pair<double, double> hi;
    if (it == table_.begin()) {
        lo = {table_.back().first - length, table_.back().second};
        hi = table_.front();
    } else if (it == table_.end()) {
        lo = table_.back();
        hi = {table_.front().first + length, table_.front().second};
    } else {
        lo = *(it - 1);
        hi = *it;
    }
    const double span = hi.first - lo.first;
    if (!(span > 0.0)) return lo.second;
    const double u = (s - lo.first) / span;
    return lo.second + u * (hi.second - lo.second);
}

namespace {

double phase(double omega, const NearestPoint& np, const Link& link, double k, const Modulation* modulation) {
    double d = np.distance;
    if (modulation) d -= (*modulation)(np.arclength, link[np.component].total_length());
    return wrap_2pi(k * d + 0.5 * omega);
}

}  // namespace

double scroll_phase_at(const Link& link, const Vec3& x, double k, const EvalConfig& cfg, const Modulation* modulation) {
    return phase(omega_point(link, x, cfg), nearest_point(link, x), link, k, modulation);
}

ScalarField scroll_phase(const ScalarField& omega, const Link& link, double k, const Modulation* modulation,
                         unsigned workers) {
    ScalarField f;
    f.grid = omega.grid;
    f.values.resize(omega.values.size());
    f.sentinel_nodes = omega.sentinel_nodes;
    f.meta = omega.meta;
    f.meta.quantity = "psi";
    parallel_for(f.values.size(), workers, [&](std::size_t i) {
        const double w = omega.values[i];
        f.values[i] = w == kSentinel ? kSentinel : phase(w, nearest_point(link, f.grid.node(i)), link, k, modulation);
    });
    return f;
}

ScalarField scroll_phase(const Link& link, const GridSpec& grid, double k, const EvalConfig& cfg,
                         const Modulation* modulation, unsigned workers) {
    return scroll_phase(omega_grid(link, grid, cfg, workers), link, k, modulation, workers);
}

Vec3 planar_director_at(double omega) { return {std::sin(0.25 * omega), 0.0, std::cos(0.25 * omega)}; }

Vec3 full_director_at(double omega_k, double omega_l) {
    const double s = std::sin(0.25 * omega_k);
    return {s * std::cos(0.5 * omega_l), s * std::sin(0.5 * omega_l), std::cos(0.25 * omega_k)};
}

VectorField planar_director(const ScalarField& omega) {
    VectorField f;
    f.grid = omega.grid;
    f.sentinel_nodes = omega.sentinel_nodes;
    f.meta = omega.meta;
    f.meta.quantity = "director";
    f.values.resize(omega.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double w = omega.values[i];
        f.values[i] = w == kSentinel ? Vec3{} : planar_director_at(w);
    }
    return f;
}

VectorField full_director(const ScalarField& omega_k, const ScalarField& omega_l) {
    if (!(omega_k.grid == omega_l.grid) || omega_k.values.size() != omega_l.values.size()) {
        throw Error(ErrorKind::validation, "director fields are on different grids");
    }
    VectorField f;
    f.grid = omega_k.grid;
    f.meta = omega_k.meta;
    f.meta.quantity = "director";
    f.values.resize(omega_k.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double wk = omega_k.values[i];
        const double wl = omega_l.values[i];
        if (wk == kSentinel || wl == kSentinel) {
            f.values[i] = Vec3{};
            f.sentinel_nodes.push_back(i);
        } else {
            f.values[i] = full_director_at(wk, wl);
        }
    }
    return f;
}

std::vector<double> component(const VectorField& f, int c) {
    std::vector<double> out(f.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Vec3& v = f.values[i];
        out[i] = c == 0 ? v.x : (c == 1 ? v.y : v.z);
    }
    return out;
}

}  // namespace knotfield
