#pragma once

#include "lrnndg/geometry.hpp"

#include <array>
#include <vector>

namespace lrnndg {

struct Cell;
struct Face;

/// One-dimensional rule on the reference interval [-1, 1].
struct GaussRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with n points, exact for polynomials of degree 2n - 1.
/// Throws std::invalid_argument unless 1 <= n <= 256.
GaussRule1D gauss_legendre(int n);

/// Quadrature rule in physical space-time coordinates.
struct QuadRule {
    std::vector<Point> points;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return points.size(); }
    [[nodiscard]] double total_weight() const;

    template <class F>
    [[nodiscard]] double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t q = 0; q < points.size(); ++q) s += weights[q] * f(points[q]);
        return s;
    }
};

enum class TriangleRule { Collapsed, Subdivided27 };

/// Rule over a mesh cell with n points per direction. Boxes use the tensor Gauss rule, parallelograms
/// the affinely mapped tensor rule, triangles the collapsed n x n Gauss rule or the 27-point rule.
QuadRule cell_rule(const Cell& cell, int n, TriangleRule triangles = TriangleRule::Collapsed);

/// Gauss rule on a triangle through the collapsed square map, n x n points (exact to degree 2n - 2).
QuadRule triangle_rule_collapsed(const std::array<Point, 3>& vertices, int n);

/// Rule over a face: mapped n-point Gauss rule on segments, n x n tensor rule on rectangular patches.
QuadRule face_rule(const Face& face, int n);

/// Trisect each edge (9 congruent sub-triangles), split each through its centroid into 3 equal-area
/// pieces, and put one point with weight area/27 at the centroid of each piece.
QuadRule triangle_rule_27(const std::array<Point, 3>& vertices);

/// Tensor Gauss rule on the axis-aligned box [lo, hi] over the first `dims` coordinates.
QuadRule box_rule(const Point& lo, const Point& hi, int dims, int n);

/// Mapped Gauss rule on the segment a-b (line measure).
QuadRule segment_rule(const Point& a, const Point& b, int n);

}  // namespace lrnndg
