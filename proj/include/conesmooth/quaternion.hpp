#pragma once

#include <array>
#include <cmath>

namespace conesmooth {

/// w + x i + y j + z k
struct Quaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr std::array<double, 4> components() const { return {w, x, y, z}; }

    friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
        return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z, a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x, a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
    }

    friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;

    constexpr Quaternion conjugate() const { return {w, -x, -y, -z}; }
    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Quaternion normalized() const {
        const double n = norm();
        return {w / n, x / n, y / n, z / n};
    }
};

constexpr double dot(const Quaternion& a, const Quaternion& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Imaginary part v of the logarithm of a unit quaternion, q = exp(v),
/// with |v| in [0, pi]. For q = -1 the axis is taken along i.
inline std::array<double, 3> log_unit(const Quaternion& q) {
    const double s = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    const double angle = std::atan2(s, q.w);
    if (s == 0.0) return {q.w < 0.0 ? angle : 0.0, 0.0, 0.0};
    const double k = angle / s;
    return {k * q.x, k * q.y, k * q.z};
}

} // namespace conesmooth
