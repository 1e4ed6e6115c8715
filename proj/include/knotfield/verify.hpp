#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "knotfield/curve.hpp"
#include "knotfield/solidangle.hpp"

namespace knotfield {

/// Seeded uniform doubles in [0, 1), independent of the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    Vec3 unit_vector();

private:
    std::mt19937_64 eng_;
};

struct GeneralPositionOptions {
    /// Minimum distance to the link in units of the longest segment.
    double min_distance_segments = 5.0;
    /// Lower bound on 1 - |n . T| at every vertex, for both adjacent segments.
    double min_cusp_margin = 0.02;
    /// Padding of the sampling box as a fraction of the link's bounding-box diagonal.
    double padding = 0.3;
};

/// Points around the link where every evaluator is well defined.
std::vector<Vec3> sample_general_points(const Link& link, std::size_t count, std::uint64_t seed,
                                        const GeneralPositionOptions& opt = {});

/// True when the midpoint quadrature is resolved at x: for every component,
/// 1 + n . a stays at least `margin` at the quadrature nodes, a being the axis the
/// switching policy picks.
bool quadrature_resolved(const Link& link, const Vec3& x, const EvalConfig& cfg, double margin = 0.02);

/// Continuous lift of omega along a closed polyline loop (returns lift(end) - lift(start)).
double omega_lift_change(const Link& link, const std::vector<Vec3>& loop, const EvalConfig& cfg);

/// Seven-point Laplacian of omega at x with step h, after unwrapping the
/// neighbours relative to the centre value.
double omega_laplacian(const Link& link, const Vec3& x, double h, const EvalConfig& cfg);

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyOptions {
    std::size_t points = 256;
    std::uint64_t seed = 1;
};

struct VerifyReport {
    std::string curve_hash;
    std::size_t components = 0;
    VerifyOptions options;
    std::vector<CheckResult> checks;

    bool passed() const;
    /// Stable JSON text; identical for identical inputs.
    std::string to_json() const;
};

VerifyReport run_verify(const Link& link, const VerifyOptions& opt = {});

/// Report for a curve that failed to load.
VerifyReport failed_load_report(const std::string& message, const VerifyOptions& opt);

}  // namespace knotfield
