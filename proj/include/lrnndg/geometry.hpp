#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace lrnndg {

/// Space-time coordinate (t, x, y). For one spatial dimension y is unused and kept at 0.
using Point = std::array<double, 3>;

inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

/// z-component of the (t, x) cross product; twice the signed area of the triangle (0, a, b).
inline double cross2(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

/// Space-time domain I x Omega with Omega = (x0, x1) or (x0, x1) x (y0, y1).
struct Domain {
    double t0 = 0.0, t1 = 1.0;
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;
    int d = 1;

    [[nodiscard]] int dims() const { return 1 + d; }
    [[nodiscard]] double lo(int axis) const { return axis == 0 ? t0 : axis == 1 ? x0 : y0; }
    [[nodiscard]] double hi(int axis) const { return axis == 0 ? t1 : axis == 1 ? x1 : y1; }
    [[nodiscard]] double measure() const {
        double m = (t1 - t0) * (x1 - x0);
        return d == 2 ? m * (y1 - y0) : m;
    }
    [[nodiscard]] double spatial_measure() const { return d == 2 ? (x1 - x0) * (y1 - y0) : (x1 - x0); }
};

}  // namespace lrnndg
