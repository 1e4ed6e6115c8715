// Small conversions between library types and the oracle's plain arrays.
#pragma once

#include <span>
#include <vector>

#include "knotfield/curve.hpp"
#include "knotfield/error.hpp"
#include "oracles.hpp"

namespace testing_support {

inline oracle::P3 p3(const knotfield::Vec3& v) { return {v.x, v.y, v.z}; }

inline std::vector<oracle::P3> p3(std::span<const knotfield::Vec3> pts) {
    std::vector<oracle::P3> out;
    out.reserve(pts.size());
    for (const auto& v : pts) out.push_back(p3(v));
    return out;
}

// Rotation about an arbitrary unit axis (Rodrigues).
inline knotfield::Vec3 rotate(const knotfield::Vec3& v, const knotfield::Vec3& axis, double angle) {
    using namespace knotfield;
    const double c = std::cos(angle), s = std::sin(angle);
    return v * c + cross(axis, v) * s + axis * (dot(axis, v) * (1.0 - c));
}

inline std::vector<knotfield::Vec3> points_of(const knotfield::OrientedCurve& c) {
    return {c.points().begin(), c.points().end()};
}

template <class Fn>
knotfield::ErrorKind error_kind(Fn&& fn) {
    try {
        fn();
    } catch (const knotfield::Error& e) {
        return e.kind();
    }
    throw std::runtime_error("expected an exception");
}

template <class Fn>
std::string error_text(Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace testing_support
