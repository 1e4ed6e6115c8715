#pragma once

#include <cstddef>
#include <vector>

#include "knotfield/curve.hpp"
#include "knotfield/solidangle.hpp"

namespace knotfield {

/// Framing of one component by the omega = 0 level set on a thin tube.
struct Framing {
    OrientedCurve base;
    /// Angle from the Frenet normal to the framing direction, unwrapped along the curve.
    std::vector<double> alpha;
    std::vector<Vec3> pushoff;
    double epsilon = 0.0;
    /// Change of alpha over one full traversal (closing back onto vertex 0).
    double alpha_winding = 0.0;
};

/// 0.02 times the smallest radius of curvature.
double default_framing_epsilon(const OrientedCurve& curve);

/// Frame component `component` of the link; omega includes every component.
/// Throws Error(domain) when eps is too large for the curve and
/// Error(resolution) when the winding on a normal circle is not one turn.
Framing solid_angle_framing(const Link& link, std::size_t component, double eps, const EvalConfig& cfg = {},
                            unsigned workers = 0);
Framing solid_angle_framing(const OrientedCurve& curve, double eps, const EvalConfig& cfg = {}, unsigned workers = 0);

/// Linking number of the base curve with the pushoff.
long framing_self_link(const Framing& framing);

/// Leading-order omega on a normal circle of relative radius eps_tilde,
/// including the curvature correction, reduced to [0, 4pi).
double local_omega_model(double eps_tilde, double theta, double alpha);

/// Near-tangent projection model: components along (N, B, T) of the unit
/// vector seen from relative offset eps_tilde at normal-plane angle theta.
/// The curve parameter is s = sqrt(2 rho eps) e^t.
Vec3 hyperbola_projection(double eps_tilde, double theta, double t);

/// Vertices of a circle of radius rho in the xy-plane, oriented so that
/// omega on the +z axis is 2pi(1 - z / sqrt(z^2 + rho^2)).
std::vector<Vec3> oracle_circle_points(double rho, std::size_t n, const Vec3& centre = {});

/// Solid angle of the smooth circle from oracle_circle_points at x: closed
/// form on the axis, converged polygon refinement elsewhere.
/// Throws Error(resolution) if refinement has not converged by 2^20 vertices.
double exact_circle_omega(double rho, const Vec3& x);

}  // namespace knotfield
