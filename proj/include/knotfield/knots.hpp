#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "knotfield/curve.hpp"

namespace knotfield::knots {

/// (sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t)
OrientedCurve trefoil(std::size_t n);

/// ((2 + cos 2t) cos 3t, (2 + cos 2t) sin 3t, sin 4t)
OrientedCurve figure_eight(std::size_t n);

/// (p, q) torus knot ((R + r cos qt) cos pt, (R + r cos qt) sin pt, r sin qt).
OrientedCurve torus_knot(int p, int q, double big_r, double small_r, std::size_t n);

/// Circle of radius rho about the z axis, oriented so that omega on the +z
/// axis is 2pi(1 - z / sqrt(z^2 + rho^2)).
OrientedCurve circle(double rho, std::size_t n, const Vec3& centre = {});

/// Two unit circles with linking number +1.
Link hopf(std::size_t n);

/// Whitehead link: a curve with three self-crossings in projection and a
/// circle threading it; linking number 0.
Link whitehead(std::size_t n);

/// Three mutually perpendicular ellipses.
Link borromean(std::size_t n);

/// Names accepted by by_name.
std::vector<std::string> names();

/// "trefoil", "figure-eight", "torus-2-5", "circle", "hopf", "whitehead",
/// "borromean", "unknot" (alias for circle). Throws Error(domain) otherwise.
Link by_name(std::string_view name, std::size_t n);

}  // namespace knotfield::knots
