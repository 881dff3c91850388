#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrnndg/mesh.hpp"
#include "lrnndg/quadrature.hpp"

#include <cmath>
#include <random>

using namespace lrnndg;

TEST_CASE("gauss_legendre closed forms") {
    const auto g1 = gauss_legendre(1);
    REQUIRE(g1.size() == 1);
    CHECK(g1.nodes[0] == doctest::Approx(0.0));
    CHECK(g1.weights[0] == doctest::Approx(2.0));
    const auto g2 = gauss_legendre(2);
    CHECK(std::abs(std::abs(g2.nodes[0]) - 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(g2.weights[0] - 1.0) < 1e-15);
    CHECK(std::abs(g2.weights[1] - 1.0) < 1e-15);
}

TEST_CASE("gauss_legendre exactness degree 2n-1") {
    for (int n = 1; n <= 10; ++n) {
        const auto g = gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
            CHECK(std::abs(s - (k % 2 ? 0.0 : 2.0 / (k + 1))) < 1e-12);
        }
    }
    const auto g5 = gauss_legendre(5);
    double s8 = 0.0, s9 = 0.0;
    for (std::size_t i = 0; i < g5.size(); ++i) {
        s8 += g5.weights[i] * std::pow(g5.nodes[i], 8);
        s9 += g5.weights[i] * std::pow(g5.nodes[i], 9);
    }
    CHECK(std::abs(s8 - 2.0 / 9.0) < 1e-13);
    CHECK(std::abs(s9) < 1e-13);
}

TEST_CASE("gauss_legendre rejects bad n") {
    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_legendre(257), std::invalid_argument);
}

TEST_CASE("box rule on the unit square") {
    const auto r = box_rule({0, 0, 0}, {1, 1, 0}, 2, 3);
    CHECK(r.size() == 9);
    CHECK(std::abs(r.total_weight() - 1.0) < 1e-14);
}

TEST_CASE("parallelogram cell integrates affine functions") {
    Cell c;
    c.shape = CellShape::Parallelogram;
    c.vertices = {{0.0, 0.0, 0.0}, {2.0, 2.1, 0.0}, {2.0, 2.6, 0.0}, {0.0, 0.5, 0.0}};
    const auto r = cell_rule(c, 5);
    CHECK(std::abs(r.total_weight() - 1.0) < 1e-12);
    // centroid (1, 1.3)
    CHECK(std::abs(r.integrate([](const Point& p) { return 3.0 * p[0] - p[1] + 2.0; }) - (3.0 - 1.3 + 2.0)) < 1e-12);
}

TEST_CASE("27-point triangle rule") {
    const auto r = triangle_rule_27({Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}});
    CHECK(r.size() == 27);
    CHECK(std::abs(r.total_weight() - 0.5) < 1e-15);
    CHECK(std::abs(r.integrate([](const Point& p) { return p[0] + p[1]; }) - 1.0 / 3.0) < 1e-3);
}

TEST_CASE("collapsed triangle rule exact to degree 2n-2") {
    const std::array<Point, 3> v = {Point{0.2, -0.1, 0}, Point{1.5, 0.3, 0}, Point{0.4, 1.1, 0}};
    const auto r = triangle_rule_collapsed(v, 6);
    const auto fine = triangle_rule_collapsed(v, 20);
    auto f = [](const Point& p) { return std::pow(p[0], 6) * std::pow(p[1], 4) - 3.0 * std::pow(p[1], 7) + p[0]; };
    CHECK(std::abs(r.integrate(f) - fine.integrate(f)) < 1e-13);
}

TEST_CASE("segment faces") {
    const auto r = segment_rule({0, 0, 0}, {0, 2, 0}, 4);
    CHECK(std::abs(r.total_weight() - 2.0) < 1e-15);
    // oblique segment: linear integrand is exact
    const Point a{0.0, -1.0, 0.0}, b{2.0, 1.0023549092, 0.0};
    const auto s = segment_rule(a, b, 3);
    const double len = norm(b - a);
    auto lin = [](const Point& p) { return 2.0 * p[0] + 5.0 * p[1] - 1.0; };
    CHECK(std::abs(s.integrate(lin) - len * lin(0.5 * (a + b))) < 1e-12);
}

TEST_CASE("hanging fragments add up to the parent face") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> U(-1, 1);
    double c[6];
    for (double& v : c) v = U(gen);
    auto poly = [&](const Point& p) { return c[0] + c[1] * p[0] + c[2] * p[0] * p[0] * p[0] + c[3] * std::pow(p[0], 5) + c[4] * p[1] + c[5] * p[2]; };
    const auto whole = segment_rule({0.0, 0.5, 0.0}, {1.0, 0.5, 0.0}, 4).integrate(poly);
    const auto parts = segment_rule({0.0, 0.5, 0.0}, {0.25, 0.5, 0.0}, 4).integrate(poly) +
                       segment_rule({0.25, 0.5, 0.0}, {0.5, 0.5, 0.0}, 4).integrate(poly) +
                       segment_rule({0.5, 0.5, 0.0}, {1.0, 0.5, 0.0}, 4).integrate(poly);
    CHECK(std::abs(whole - parts) <= 1e-12 * std::max(1.0, std::abs(whole)));
}

TEST_CASE("box additivity under refinement") {
    auto poly = [](const Point& p) { return std::pow(p[0], 7) * p[1] - std::pow(p[1], 9) + 2.0; };
    const double parent = box_rule({0, 0, 0}, {1, 2, 0}, 2, 5).integrate(poly);
    const double kids = box_rule({0, 0, 0}, {0.5, 1, 0}, 2, 5).integrate(poly) + box_rule({0.5, 0, 0}, {1, 1, 0}, 2, 5).integrate(poly) +
                        box_rule({0, 1, 0}, {0.5, 2, 0}, 2, 5).integrate(poly) + box_rule({0.5, 1, 0}, {1, 2, 0}, 2, 5).integrate(poly);
    CHECK(std::abs(parent - kids) <= 1e-12 * std::abs(parent));
}
