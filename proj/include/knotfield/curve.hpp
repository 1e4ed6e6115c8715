#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "knotfield/vec3.hpp"

namespace knotfield {

/// Per-vertex Frenet data of a closed polyline.
struct FrenetFrames {
    std::vector<Vec3> tangents;
    std::vector<Vec3> normals;
    std::vector<Vec3> binormals;
    std::vector<double> curvature;
    // 1 where the curvature vanished and N was parallel-transported from a neighbour.
    std::vector<std::uint8_t> transported;
};

/// Closed, oriented polyline; the last point connects back to the first.
///
/// Immutable after construction. Frames are computed eagerly; the writhe is
/// computed on first use and shared between copies.
class OrientedCurve {
public:
    /// Throws Error(validation) for fewer than 3 points or a zero-length segment.
    static OrientedCurve from_points(std::vector<Vec3> points);

    std::size_t size() const { return points_.size(); }
    std::span<const Vec3> points() const { return points_; }
    const Vec3& point(std::size_t i) const { return points_[i % points_.size()]; }

    std::span<const Vec3> tangents() const { return frames_.tangents; }
    std::span<const Vec3> normals() const { return frames_.normals; }
    std::span<const Vec3> binormals() const { return frames_.binormals; }
    std::span<const double> curvature() const { return frames_.curvature; }
    std::span<const std::uint8_t> transported() const { return frames_.transported; }
    const FrenetFrames& frames() const { return frames_; }

    /// Length of segment i (from point i to point i+1).
    std::span<const double> seg_lengths() const { return seg_lengths_; }
    /// Unit direction of segment i.
    std::span<const Vec3> seg_directions() const { return seg_dirs_; }
    /// Arclength of vertex i measured from vertex 0.
    std::span<const double> arclength() const { return arclength_; }
    double total_length() const { return total_length_; }

    double min_segment_length() const;
    double max_segment_length() const;
    /// Smallest radius of curvature over vertices whose frame was not transported.
    double min_radius_of_curvature() const;
    /// Smallest distance between non-adjacent segments, ignoring pairs closer
    /// than `skip` arclength along the curve.
    double min_self_distance(double skip) const;

    /// Polygon writhe, cached.
    double writhe() const;

    OrientedCurve reversed() const;
    OrientedCurve translated(const Vec3& shift) const;

private:
    OrientedCurve() = default;

    struct WritheCache;

    std::vector<Vec3> points_;
    std::vector<double> seg_lengths_;
    std::vector<Vec3> seg_dirs_;
    std::vector<double> arclength_;
    double total_length_ = 0.0;
    FrenetFrames frames_;
    std::shared_ptr<WritheCache> writhe_cache_;
};

/// Ordered collection of pairwise disjoint oriented curves.
class Link {
public:
    /// Throws Error(validation) when empty or when two components touch.
    explicit Link(std::vector<OrientedCurve> components);

    std::size_t size() const { return components_.size(); }
    const OrientedCurve& operator[](std::size_t i) const { return components_[i]; }
    std::span<const OrientedCurve> components() const { return components_; }

    auto begin() const { return components_.begin(); }
    auto end() const { return components_.end(); }

    double max_segment_length() const;

private:
    std::vector<OrientedCurve> components_;
};

/// Frenet frames by central differences on a closed polyline.
FrenetFrames frenet_frames(std::span<const Vec3> points);

/// Re-sample at (near) uniform arclength spacing `ds`.
///
/// The vertex count is round(L / ds); the realised spacing is L / count.
/// Throws Error(domain) when ds is not below L / 3.
OrientedCurve resample(const OrientedCurve& curve, double ds);

Link resample(const Link& link, double ds);

/// Exact polygon writhe: sum over segment pairs of the signed solid angle
/// swept by the unit chord, divided by 4pi.
double writhe(const OrientedCurve& curve);

struct LinkingIntegral {
    long value = 0;        // nearest integer
    double raw = 0.0;      // Gauss integral
    double residual = 0.0; // |raw - value|
};

/// Gauss linking integral evaluated exactly for two disjoint polygons.
LinkingIntegral linking_integral(const OrientedCurve& a, const OrientedCurve& b);

/// Rounded linking number. Throws Error(resolution) when the residual exceeds 0.05.
long linking_number(const OrientedCurve& a, const OrientedCurve& b);

/// Twist of the framing obtained by projecting the line of sight from x into
/// the normal plane of the curve. Exact for polygons: the framing is constant
/// along each segment and rotates in closed form at each vertex.
/// Throws Error(degenerate) when x sees a cusp (n.T = +-1).
double projective_twist(const OrientedCurve& curve, const Vec3& x);

/// Integral of n_inf . (T x dT) / (1 + n_inf . T) over the polygon's tangent
/// indicatrix, reduced to [0, 4pi). Congruent to 2pi(1 + Wr) mod 4pi.
/// Throws Error(degenerate) when a segment direction is antipodal to n_inf.
double fuller_writhe_mod2(const OrientedCurve& curve, const Vec3& n_inf);

/// Total twist (in turns) of the Frenet normal field along the curve.
double frenet_twist(const OrientedCurve& curve);

// --- curve file format -----------------------------------------------------

/// Parse the plain-text curve format:
///
///     components: N
///     points: M
///     x y z        (M lines)
///     ...          (repeated N times)
///
/// '#' starts a comment. Throws Error(parse) naming the line, or
/// Error(validation) for degenerate components.
Link parse_link(std::string_view text);
Link load_link(const std::filesystem::path& path);

/// Serialise with round-trip precision.
std::string format_link(const Link& link);
void save_link(const Link& link, const std::filesystem::path& path);

// --- small geometry helpers --------------------------------------------------

/// Distance from p to the segment [a, b]; `t` receives the parameter of the
/// closest point in [0, 1].
double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b, double* t = nullptr);

/// Smallest distance between segments [p0, p1] and [q0, q1].
double segment_segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);

/// Smallest distance from x to any segment of the curve.
double distance_to_curve(const OrientedCurve& curve, const Vec3& x);
double distance_to_link(const Link& link, const Vec3& x);

}  // namespace knotfield
