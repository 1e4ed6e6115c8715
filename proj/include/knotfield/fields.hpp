#pragma once

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

#include "knotfield/curve.hpp"
#include "knotfield/solidangle.hpp"

namespace knotfield {

struct VectorField {
    GridSpec grid;
    /// Unit vectors; zero at sentinel nodes.
    std::vector<Vec3> values;
    std::vector<std::size_t> sentinel_nodes;
    Provenance meta;
};

struct NearestPoint {
    double distance = 0.0;
    std::size_t component = 0;
    /// Arclength of the closest point along its component, from vertex 0.
    double arclength = 0.0;
};

NearestPoint nearest_point(const Link& link, const Vec3& x);

ScalarField distance_field(const Link& link, const GridSpec& grid, unsigned workers = 0);

/// Offset m(s) as a function of arclength: piecewise linear through the
/// table entries and periodic in the component length.
class Modulation {
public:
    /// Pairs (s, m), s strictly increasing and non-negative.
    explicit Modulation(std::vector<std::pair<double, double>> table);

    /// Two numbers per line, '#' comments allowed.
    static Modulation parse(std::string_view text);
    static Modulation load(const std::filesystem::path& path);

    /// Sinusoid with `periods` full periods over `length`, sampled at `samples` points.
    static Modulation sinusoid(double amplitude, int periods, double length, std::size_t samples = 256);

    double operator()(double s, double length) const;

private:
    std::vector<std::pair<double, double>> table_;
};

/// psi = k (d - m(s*)) + omega / 2 mod 2pi at one point, with s* the arclength
/// of the nearest curve point.
double scroll_phase_at(const Link& link, const Vec3& x, double k, const EvalConfig& cfg,
                       const Modulation* modulation = nullptr);

/// Scroll phase on a grid. Sentinel omega nodes stay sentinel.
ScalarField scroll_phase(const Link& link, const GridSpec& grid, double k, const EvalConfig& cfg,
                         const Modulation* modulation = nullptr, unsigned workers = 0);

/// Combine an existing omega field with the distance data.
ScalarField scroll_phase(const ScalarField& omega, const Link& link, double k, const Modulation* modulation = nullptr,
                         unsigned workers = 0);

/// d = (sin(w/4), 0, cos(w/4)).
Vec3 planar_director_at(double omega);

/// d = (sin(wK/4) cos(wL/2), sin(wK/4) sin(wL/2), cos(wK/4)).
Vec3 full_director_at(double omega_k, double omega_l);

VectorField planar_director(const ScalarField& omega);

/// Throws Error(validation) when the grids differ.
VectorField full_director(const ScalarField& omega_k, const ScalarField& omega_l);

/// Component c (0, 1, 2) of every vector.
std::vector<double> component(const VectorField& f, int c);

}  // namespace knotfield
