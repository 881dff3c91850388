#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrnndg/basis.hpp"
#include "lrnndg/mesh.hpp"
#include "lrnndg/solution.hpp"

#include <cmath>
#include <random>

using namespace lrnndg;

TEST_CASE("init_space draws parameters in [-r, r]") {
    const auto s = init_space(0, 160, 1, ActivationKind::tanh(), 1.76, 7);
    CHECK(s.weights().rows() == 160);
    CHECK(s.weights().cols() == 2);
    CHECK(s.weights().cwiseAbs().maxCoeff() <= 1.76);
    CHECK(s.biases().cwiseAbs().maxCoeff() <= 1.76);
    CHECK(s.weights().cwiseAbs().maxCoeff() > 1.0);
}

TEST_CASE("zero range gives zero features") {
    const auto s = init_space(0, 4, 1, ActivationKind::tanh(), 0.0, 1);
    CHECK(s.weights().isZero(0.0));
    CHECK(s.biases().isZero(0.0));
    const Point p[] = {{0.3, -0.7, 0.0}};
    CHECK(s.eval(p, kValue).isZero(0.0));
}

TEST_CASE("initialization is keyed by seed and cell key") {
    const auto a = init_space(5, 20, 2, ActivationKind::tanh(), 1.0, 3);
    const auto b = init_space(5, 20, 2, ActivationKind::tanh(), 1.0, 3);
    const auto c = init_space(6, 20, 2, ActivationKind::tanh(), 1.0, 3);
    const auto d = init_space(5, 20, 2, ActivationKind::tanh(), 1.0, 4);
    CHECK(a.weights() == b.weights());
    CHECK(a.biases() == b.biases());
    CHECK(a.weights() != c.weights());
    CHECK(a.weights() != d.weights());
}

TEST_CASE("wavelet features lie in (0, 1]") {
    const auto s = init_space(3, 80, 1, ActivationKind::wavelet(1.0011774546, 0.5), 15.0, 2);
    std::vector<Point> pts;
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) pts.push_back({0.2 * i, -2.0 + 0.5 * j, 0.0});
    const auto v = s.eval(pts, kValue);
    CHECK(v.maxCoeff() <= 1.0);
    CHECK(v.minCoeff() >= 0.0);
}

TEST_CASE("single tanh unit derivatives at the origin") {
    Eigen::MatrixXd W(1, 2);
    W << 0.7, -1.3;
    const RandomFeatureSpace s(W, Eigen::VectorXd::Zero(1), 1, ActivationKind::tanh());
    const Point p[] = {{0.0, 0.0, 0.0}};
    CHECK(s.eval(p, kValue)(0, 0) == doctest::Approx(0.0));
    CHECK(s.eval(p, kDx)(0, 0) == doctest::Approx(-1.3));
    CHECK(s.eval(p, kDt)(0, 0) == doctest::Approx(0.7));
    const RandomFeatureSpace z(Eigen::MatrixXd::Zero(1, 2), Eigen::VectorXd::Zero(1), 1, ActivationKind::tanh());
    for (Deriv d : {kValue, kDt, kDx, kDxx, kDxxx}) CHECK(z.eval(p, d)(0, 0) == 0.0);
}

namespace {

double fd_check(const RandomFeatureSpace& s, const Point& p, Deriv target, Deriv base, int axis) {
    const double h = 1e-4;
    auto at = [&](double off) {
        Point q = p;
        q[axis] += off;
        const Point one[] = {q};
        return s.eval(one, base)(0, 0);
    };
    const double fd = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
    const Point one[] = {p};
    const double exact = s.eval(one, target)(0, 0);
    return std::abs(fd - exact) / std::max(1e-3, std::abs(exact));
}

}  // namespace

TEST_CASE("derivatives match finite differences") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd W(1, 3);
        W << 2 * U(gen), 2 * U(gen), 2 * U(gen);
        Eigen::VectorXd b(1);
        b << U(gen);
        const RandomFeatureSpace s1(W.leftCols(2), b, 1, ActivationKind::tanh());
        const RandomFeatureSpace s2(W, b, 2, ActivationKind::tanh());
        const RandomFeatureSpace sw(W.leftCols(2), b, 1, ActivationKind::wavelet(1.2, 0.3));
        const Point p{U(gen), U(gen), U(gen)};
        for (const auto* s : {&s1, &sw}) {
            CHECK(fd_check(*s, p, kDxx, kDx, 1) < 1e-5);
            CHECK(fd_check(*s, p, kDxxx, kDxx, 1) < 1e-5);
            CHECK(fd_check(*s, p, kDt, kValue, 0) < 1e-5);
            CHECK(fd_check(*s, p, Deriv{1, 3, 0}, kDxxx, 0) < 1e-5);
        }
        CHECK(fd_check(s2, p, kDyy, kDy, 2) < 1e-5);
        CHECK(fd_check(s2, p, Deriv{0, 1, 1}, kDx, 2) < 1e-5);
    }
}

TEST_CASE("wavelet time weight zero gives functions of the characteristic coordinate") {
    const double k = 1.0011774546;
    const auto s = init_space(5, 30, 1, ActivationKind::wavelet(k, 0.5, 0.0), 15.0, 4);
    const std::vector<Point> pts = {{0.2, 0.6, 0.0}, {1.3, -0.4, 0.0}, {0.7, 1.1, 0.0}};
    const Eigen::MatrixXd dt = s.eval(pts, kDt);
    const Eigen::MatrixXd dx = s.eval(pts, kDx);
    CHECK((dt + k * dx).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + dx.cwiseAbs().maxCoeff()));
    // shifting along the characteristic leaves every feature unchanged
    const std::vector<Point> moved = {{0.2 + 0.3, 0.6 + 0.3 * k, 0.0}};
    const std::vector<Point> here = {pts[0]};
    CHECK((s.eval(moved, kValue) - s.eval(here, kValue)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("input normalization maps the cell to the reference box") {
    Eigen::MatrixXd W(1, 2);
    W << 1.0, 1.0;
    InputMap map;
    map.center = {1.0, 2.0, 0.0};
    map.half = {0.5, 0.25, 1.0};
    const RandomFeatureSpace s(W, Eigen::VectorXd::Zero(1), 1, ActivationKind::tanh(), map);
    const Point p[] = {{1.5, 2.25, 0.0}};
    CHECK(s.eval(p, kValue)(0, 0) == doctest::Approx(std::tanh(2.0)));
    CHECK(s.eval(p, kDx)(0, 0) == doctest::Approx(4.0 * (1 - std::tanh(2.0) * std::tanh(2.0))));
}

TEST_CASE("sheared map for slanted cells") {
    Cell c;
    c.shape = CellShape::Parallelogram;
    c.vertices = {{0.0, 0.0, 0.0}, {2.0, 2.0, 0.0}, {2.0, 2.2, 0.0}, {0.0, 0.2, 0.0}};
    c.lo = {0.0, 0.0, 0.0};
    c.hi = {2.0, 2.2, 0.0};
    const InputMap m = cell_input_map(c);
    CHECK(m.shear == doctest::Approx(1.0));
    CHECK(m.half[1] == doctest::Approx(0.1));
    CHECK(m.half[0] == doctest::Approx(1.0));
}

TEST_CASE("evaluation outside the closure is rejected") {
    auto s = init_space(0, 3, 1, ActivationKind::tanh(), 1.0, 0);
    s.set_closure({0, 0, 0}, {1, 1, 0}, 1e-12);
    const Point p[] = {{1.5, 0.5, 0.0}};
    CHECK_THROWS_AS((void)s.eval(p, kValue), std::domain_error);
    CHECK_THROWS_AS((void)s.eval(p, Deriv{2, 0, 0}), std::exception);
}

TEST_CASE("compression keeps the span of the features") {
    const auto s = init_space(0, 40, 1, ActivationKind::tanh(), 1.0, 1);
    std::vector<Point> pts;
    std::vector<double> w;
    for (int i = 0; i < 15; ++i)
        for (int j = 0; j < 15; ++j) {
            pts.push_back({-1 + 2.0 * i / 14, -1 + 2.0 * j / 14, 0.0});
            w.push_back(1.0);
        }
    const Deriv d[] = {kValue};
    const LocalBasis lb = compress(s, pts, w, d, {1, 1, 1}, 1e-4);
    CHECK(lb.size() < 40);
    CHECK(lb.size() > 3);
    // orthonormal in the sampled inner product
    const Eigen::MatrixXd V = lb.eval(pts, kValue);
    CHECK((V.transpose() * V - Eigen::MatrixXd::Identity(lb.size(), lb.size())).norm() < 1e-8);
    // each original feature is reproduced from the compressed span
    const Eigen::MatrixXd F = s.eval(pts, kValue);
    const Eigen::MatrixXd proj = V * (V.transpose() * F);
    CHECK((proj - F).norm() / F.norm() < 1e-3);
}
