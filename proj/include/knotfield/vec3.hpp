#pragma once

#include <cmath>
#include <ostream>

namespace knotfield {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kFourPi = 4.0 * kPi;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    constexpr Vec3& operator/=(double s) { x /= s; y /= s; z /= s; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return a /= s; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Vec3& v) {
        return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
    }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double norm2(const Vec3& a) { return dot(a, a); }

inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

/// Scalar triple product a . (b x c).
constexpr double triple(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

/// Angle between two unit vectors, accurate for nearly (anti)parallel inputs.
inline double unit_angle(const Vec3& a, const Vec3& b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

/// Signed area of the geodesic triangle (a, b, c) on the unit sphere, in (-2pi, 2pi).
///
/// Half-angle (Van Oosterom-Strackee) form; positive when a, b, c wind
/// counterclockwise seen from outside the sphere.
inline double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double num = triple(a, b, c);
    const double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    return 2.0 * std::atan2(num, den);
}

/// Minimal rotation taking unit vector `from` onto unit vector `to`, applied to v.
inline Vec3 parallel_transport(const Vec3& v, const Vec3& from, const Vec3& to) {
    const Vec3 c = cross(from, to);
    const double d = 1.0 + dot(from, to);
    return v + cross(c, v) + cross(c, cross(c, v)) / d;
}

/// Reduce an angle into [0, 4pi).
inline double wrap_4pi(double a) {
    double r = std::fmod(a, kFourPi);
    if (r < 0.0) r += kFourPi;
    if (r >= kFourPi) r -= kFourPi;
    return r;
}

/// Reduce an angle into [0, 2pi).
inline double wrap_2pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

/// Representative of (a - b) mod 4pi in [-2pi, 2pi).
inline double diff_4pi(double a, double b) {
    return wrap_4pi(a - b + kTwoPi) - kTwoPi;
}

}  // namespace knotfield
