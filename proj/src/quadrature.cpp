#include "lrnndg/quadrature.hpp"

#include "lrnndg/mesh.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrnndg {

double QuadRule::total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

GaussRule1D gauss_legendre(int n) {
    if (n < 1 || n > 256) throw std::invalid_argument("gauss_legendre: n must lie in [1, 256], got " + std::to_string(n));
    GaussRule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

QuadRule box_rule(const Point& lo, const Point& hi, int dims, int n) {
    if (dims < 1 || dims > 3) throw std::invalid_argument("box_rule: dims must be 1, 2 or 3");
    const GaussRule1D g = gauss_legendre(n);
    QuadRule rule;
    std::size_t total = 1;
    for (int a = 0; a < dims; ++a) total *= g.size();
    rule.points.reserve(total);
    rule.weights.reserve(total);
    Point half{}, mid{};
    for (int a = 0; a < dims; ++a) {
        if (!(hi[a] > lo[a])) throw std::invalid_argument("box_rule: degenerate box");
        half[a] = 0.5 * (hi[a] - lo[a]);
        mid[a] = 0.5 * (hi[a] + lo[a]);
    }
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t r = k;
        for (int a = dims - 1; a >= 0; --a) {
            idx[a] = r % g.size();
            r /= g.size();
        }
        Point p{};
        double w = 1.0;
        for (int a = 0; a < 3; ++a) {
            if (a < dims) {
                p[a] = mid[a] + half[a] * g.nodes[idx[a]];
                w *= half[a] * g.weights[idx[a]];
            } else {
                p[a] = lo[a];
            }
        }
        rule.points.push_back(p);
        rule.weights.push_back(w);
    }
    return rule;
}

QuadRule segment_rule(const Point& a, const Point& b, int n) {
    const double len = norm(b - a);
    if (!(len > 0.0)) throw std::invalid_argument("segment_rule: degenerate segment");
    const GaussRule1D g = gauss_legendre(n);
    QuadRule rule;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = 0.5 * (g.nodes[i] + 1.0);
        rule.points.push_back(a + s * (b - a));
        rule.weights.push_back(0.5 * len * g.weights[i]);
    }
    return rule;
}

namespace {

QuadRule parallelogram_rule(const std::vector<Point>& v, int n) {
    const Point e1 = v[1] - v[0];
    const Point e2 = v[3] - v[0];
    const double area = std::abs(cross2(e1, e2));
    if (!(area > 0.0)) throw std::invalid_argument("cell_rule: degenerate parallelogram");
    const GaussRule1D g = gauss_legendre(n);
    QuadRule rule;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double s = 0.5 * (g.nodes[i] + 1.0);
            const double r = 0.5 * (g.nodes[j] + 1.0);
            rule.points.push_back(v[0] + s * e1 + r * e2);
            rule.weights.push_back(0.25 * area * g.weights[i] * g.weights[j]);
        }
    }
    return rule;
}

}  // namespace

QuadRule triangle_rule_27(const std::array<Point, 3>& v) {
    const double area = 0.5 * std::abs(cross2(v[1] - v[0], v[2] - v[0]));
    if (!(area > 0.0)) throw std::invalid_argument("triangle_rule_27: degenerate triangle");
    // barycentric lattice with step 1/3
    auto lattice = [&](int i, int j) {
        const double a = i / 3.0, b = j / 3.0;
        return v[0] + a * (v[1] - v[0]) + b * (v[2] - v[0]);
    };
    std::vector<std::array<Point, 3>> subs;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; i + j < 3; ++j) {
            subs.push_back({lattice(i, j), lattice(i + 1, j), lattice(i, j + 1)});
            if (i + j < 2) subs.push_back({lattice(i + 1, j), lattice(i + 1, j + 1), lattice(i, j + 1)});
        }
    }
    QuadRule rule;
    const double w = area / 27.0;
    for (const auto& s : subs) {
        const Point c = (1.0 / 3.0) * (s[0] + s[1] + s[2]);
        for (int e = 0; e < 3; ++e) {
            const Point piece_centroid = (1.0 / 3.0) * (s[e] + s[(e + 1) % 3] + c);
            rule.points.push_back(piece_centroid);
            rule.weights.push_back(w);
        }
    }
    return rule;
}

QuadRule triangle_rule_collapsed(const std::array<Point, 3>& v, int n) {
    const double area = 0.5 * std::abs(cross2(v[1] - v[0], v[2] - v[0]));
    if (!(area > 0.0)) throw std::invalid_argument("triangle_rule_collapsed: degenerate triangle");
    const GaussRule1D g = gauss_legendre(n);
    QuadRule rule;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = 0.5 * (g.nodes[i] + 1.0);
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double b = 0.5 * (g.nodes[j] + 1.0);
            rule.points.push_back(v[0] + a * (v[1] - v[0]) + (1.0 - a) * b * (v[2] - v[0]));
            rule.weights.push_back(0.5 * area * g.weights[i] * g.weights[j] * (1.0 - a));
        }
    }
    return rule;
}

QuadRule cell_rule(const Cell& cell, int n, TriangleRule triangles) {
    if (n < 1) throw std::invalid_argument("cell_rule: n must be positive");
    switch (cell.shape) {
        case CellShape::Box:
            return box_rule(cell.lo, cell.hi, cell.dims, n);
        case CellShape::Parallelogram:
            return parallelogram_rule(cell.vertices, n);
        case CellShape::Triangle:
            if (triangles == TriangleRule::Subdivided27) return triangle_rule_27({cell.vertices[0], cell.vertices[1], cell.vertices[2]});
            return triangle_rule_collapsed({cell.vertices[0], cell.vertices[1], cell.vertices[2]}, n);
    }
    throw std::logic_error("cell_rule: unknown shape");
}

QuadRule face_rule(const Face& face, int n) {
    if (n < 1) throw std::invalid_argument("face_rule: n must be positive");
    if (face.is_segment()) return segment_rule(face.vertices[0], face.vertices[1], n);
    // axis-aligned patch in (t, x, y): tensor rule over the two free axes
    const GaussRule1D g = gauss_legendre(n);
    int free_axes[2];
    int k = 0;
    for (int a = 0; a < 3; ++a)
        if (a != face.axis) free_axes[k++] = a;
    QuadRule rule;
    const double ha = 0.5 * (face.hi[free_axes[0]] - face.lo[free_axes[0]]);
    const double hb = 0.5 * (face.hi[free_axes[1]] - face.lo[free_axes[1]]);
    if (!(ha > 0.0 && hb > 0.0)) throw std::invalid_argument("face_rule: degenerate patch");
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            Point p = face.lo;
            p[free_axes[0]] = face.lo[free_axes[0]] + ha * (g.nodes[i] + 1.0);
            p[free_axes[1]] = face.lo[free_axes[1]] + hb * (g.nodes[j] + 1.0);
            rule.points.push_back(p);
            rule.weights.push_back(ha * hb * g.weights[i] * g.weights[j]);
        }
    }
    return rule;
}

}  // namespace lrnndg
