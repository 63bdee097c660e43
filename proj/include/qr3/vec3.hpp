#pragma once

#include <cmath>
#include <stdexcept>

namespace qr3 {

// A point of R^3 in spatial coordinates.
struct Vec3 {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3}; }
    friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x1, s * v.x2, s * v.x3}; }
    friend Vec3 operator*(const Vec3& v, double s) { return s * v; }
    friend Vec3 operator/(const Vec3& v, double s) { return {v.x1 / s, v.x2 / s, v.x3 / s}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3; }
inline double norm_sq(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm_sq(v)); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline bool finite(const Vec3& v) {
    return std::isfinite(v.x1) && std::isfinite(v.x2) && std::isfinite(v.x3);
}

inline Vec3 normalized(const Vec3& v) {
    double n = norm(v);
    if (n == 0.0) throw std::domain_error("normalized: zero vector");
    return v / n;
}

} // namespace qr3
