#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "knotfield/curve.hpp"
#include "knotfield/vec3.hpp"

namespace knotfield {

enum class Evaluator {
    infinity_triangle,    // exact spherical-triangle sum with apex n_inf
    infinity_quadrature,  // midpoint rule on the same integrand
    tangent_dev_plus,     // tangent-developable homotopy, + sign
    tangent_dev_minus,    // tangent-developable homotopy, - sign
    gauss_bonnet,         // crossings and turning angles of the projection
};

std::string_view to_string(Evaluator e);
/// Throws Error(domain) for an unknown name.
Evaluator parse_evaluator(std::string_view name);

struct EvalConfig {
    Vec3 n_inf{0.0, 0.0, 1.0};
    /// Switch axis when min over vertices of 1 + n . n_inf falls below this.
    double switch_threshold = 0.05;
    std::uint64_t fallback_seed = 0;
    Evaluator evaluator = Evaluator::infinity_triangle;

    /// Throws Error(domain) unless n_inf is unit and the threshold is in (0, 2).
    void validate() const;
};

struct GridSpec {
    Vec3 origin;
    double spacing = 1.0;
    std::array<std::size_t, 3> dims{2, 2, 2};

    std::size_t count() const { return dims[0] * dims[1] * dims[2]; }
    /// Row-major, k fastest.
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * dims[1] + j) * dims[2] + k; }
    Vec3 node(std::size_t i, std::size_t j, std::size_t k) const {
        return origin + spacing * Vec3{double(i), double(j), double(k)};
    }
    Vec3 node(std::size_t flat) const;

    /// Throws Error(domain) for non-positive spacing or a dimension below 2.
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

/// Stored at nodes where no value could be computed (outside every valid range).
inline constexpr double kSentinel = -1.0;

struct Provenance {
    std::string quantity;   // "omega", "psi", ...
    std::string evaluator;
    std::string curve_hash;
    EvalConfig config;
    std::size_t components = 0;
    /// Nodes that needed the flipped or the random axis.
    std::size_t flipped_axis_nodes = 0;
    std::size_t random_axis_nodes = 0;
    /// Nodes where no axis met the threshold and the best one was used.
    std::size_t below_threshold_nodes = 0;
    Vec3 fallback_axis;
    std::vector<std::string> warnings;
};

struct ScalarField {
    GridSpec grid;
    std::vector<double> values;
    /// Flat indices of sentinel nodes, ascending.
    std::vector<std::size_t> sentinel_nodes;
    Provenance meta;
};

/// Axis actually used for one component at one point.
struct AxisChoice {
    Vec3 axis;
    int which = 0;  // 0 configured, 1 flipped, 2 random fallback, 3 best below threshold
};

/// Deterministic pseudorandom unit vector for a seed.
Vec3 fallback_axis(std::uint64_t seed);

/// Apply the switching policy for one component: the configured axis, its
/// negation, then the seeded random axis. When none meets the threshold the
/// one with the largest margin is used; Error(degenerate) naming the vertex is
/// thrown only if even that margin is below 1e-9.
AxisChoice choose_axis(const OrientedCurve& curve, const Vec3& x, const EvalConfig& cfg);

/// Exact polygon evaluation of the point-at-infinity formula, summed over components.
double omega_point_infinity(const Link& link, const Vec3& x, const EvalConfig& cfg);
double omega_point_infinity(const OrientedCurve& curve, const Vec3& x, const EvalConfig& cfg);

/// The same integrand by the midpoint rule, one node per sample point.
double omega_point_infinity_quadrature(const Link& link, const Vec3& x, const EvalConfig& cfg);
double omega_point_infinity_quadrature(const OrientedCurve& curve, const Vec3& x, const EvalConfig& cfg);

/// Tangent-developable formula with sign +1 or -1. Throws Error(degenerate)
/// when x is on (or within 1e-9 of) the chosen tangent developable.
double omega_point_tangent_dev(const OrientedCurve& curve, const Vec3& x, int sign);
double omega_point_tangent_dev(const Link& link, const Vec3& x, int sign);

/// Change of omega at x under the straight-line homotopy from k0 to k1
/// (vertices matched by index), in (-4pi, 4pi).
/// Throws Error(validation) for mismatched vertex counts and
/// Error(degenerate) when x is on the swept surface.
double homotopy_delta(const OrientedCurve& k0, const OrientedCurve& k1, const Vec3& x);

/// Dispatch on cfg.evaluator.
double omega_point(const Link& link, const Vec3& x, const EvalConfig& cfg);

/// Evaluate on every grid node using `workers` threads (0 = hardware
/// concurrency). Values do not depend on the worker count. Nodes within 1e-9
/// of the link get kSentinel; other evaluation failures throw Error naming the node.
ScalarField omega_grid(const Link& link, const GridSpec& grid, const EvalConfig& cfg, unsigned workers = 0);

/// Run fn(i) for i in [0, n) over contiguous blocks on `workers` threads.
/// The first exception (lowest block) is rethrown after all threads join.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn);

unsigned resolve_workers(unsigned workers);

}  // namespace knotfield

#include "knotfield/parallel.inl"
