#pragma once

#include <cstddef>
#include <vector>

#include "knotfield/curve.hpp"
#include "knotfield/vec3.hpp"

namespace knotfield {

/// Closed geodesic polygon on the unit sphere.
struct SphericalPolyline {
    std::vector<Vec3> verts;
    /// Unit tangent of arc i (verts[i] -> verts[i+1]) at its start.
    std::vector<Vec3> arc_tangents;
    /// Signed turning angle at vertex i, positive towards gamma = n x t.
    std::vector<double> turning_angles;
    /// t x n for arc i; constant along the arc.
    std::vector<Vec3> poles;
};

/// Build from unit vertices. Throws Error(degenerate) when two consecutive
/// vertices are (nearly) antipodal or coincide.
SphericalPolyline make_spherical_polyline(std::vector<Vec3> verts);

/// Radial projection of the curve onto the unit sphere centred at x.
/// Throws Error(degenerate) when x is within 1e-9 of the curve.
SphericalPolyline project(const OrientedCurve& curve, const Vec3& x);

/// Number of transverse self-intersections between non-adjacent arcs.
/// Throws Error(degenerate) for crossings too close to a vertex or for
/// overlapping arcs.
int crossing_count(const SphericalPolyline& proj);

/// Integrated geodesic curvature: the sum of turning angles.
double total_turning(const SphericalPolyline& proj);

struct DualCurve {
    /// One point per arc of the primal polyline (its pole).
    std::vector<Vec3> points;
    /// Signed length of the joint arc from points[i-1] to points[i], one per vertex.
    std::vector<double> joint_lengths;
    double signed_length = 0.0;
    /// Number of sign changes of the turning angle around the curve.
    std::size_t cusps = 0;
};

DualCurve dual_curve(const SphericalPolyline& proj);

/// 2pi(D + 1) minus the total turning, reduced to [0, 4pi).
double omega_gauss_bonnet(const OrientedCurve& curve, const Vec3& x);

/// Per-component evaluation summed mod 4pi.
double omega_gauss_bonnet(const Link& link, const Vec3& x);

}  // namespace knotfield
