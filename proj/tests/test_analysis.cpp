#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrnndg/analysis.hpp"

#include <cmath>

using namespace lrnndg;

TEST_CASE("gKdV soliton") {
    const GKdVSoliton s(0.2275, 0.2058e-4, 0.5);
    CHECK(s.u(0.0, 0.5) == doctest::Approx(0.2275));
    const double t = 0.7, crest = 0.5 + s.omega * t / s.K;
    for (double off : {0.01, 0.1, 0.3}) CHECK(std::abs(s.u(t, crest + off) - s.u(t, crest - off)) < 1e-14);
    CHECK(std::abs(s.u_x(t, crest)) < 1e-10);
    const double h = 1e-5, x = 0.61;
    CHECK(s.u_x(t, x) == doctest::Approx((s.u(t, x + h) - s.u(t, x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(s.u_xx(t, x) == doctest::Approx((s.u_x(t, x + h) - s.u_x(t, x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(s.u_t(t, x) == doctest::Approx((s.u(t + h, x) - s.u(t - h, x)) / (2 * h)).epsilon(1e-6));
    // u_t + u_x + u^3 u_x + eps u_xxx = 0
    const double uxxx = (s.u_xx(t, x + h) - s.u_xx(t, x - h)) / (2 * h);
    const double u = s.u(t, x);
    CHECK(std::abs(s.u_t(t, x) + s.u_x(t, x) + u * u * u * s.u_x(t, x) + 0.2058e-4 * uxxx) < 1e-6);
}

TEST_CASE("Burgers front") {
    const auto e = exact_burgers(0.1, 2);
    CHECK(e.value({0.3, 0.1, 0.2}) == doctest::Approx(0.5));
    CHECK(e.value({0.0, 50.0, 50.0}) < 1e-100);
    CHECK(e.value({0.0, -50.0, -50.0}) == doctest::Approx(1.0));
    const Point p{0.4, 0.3, 0.25};
    const Point g = e.gradient(p);
    CHECK(g[0] == doctest::Approx(-g[1]));
    const double h = 1e-6;
    CHECK(g[0] == doctest::Approx((e.value({p[0] + h, p[1], p[2]}) - e.value({p[0] - h, p[1], p[2]})) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("double soliton initial data") {
    const auto u0 = double_soliton_u0();
    const double k2 = 0.5 * std::sqrt(0.1 / 4.84e-4);
    CHECK(u0(0.4) == doctest::Approx(0.9 + 0.3 / std::pow(std::cosh(k2 * (0.4 - 0.8)), 2)));
    double best1 = 0, best2 = 0, arg1 = 0, arg2 = 0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = 2.0 * i / 2000;
        CHECK(u0(x) > 0.0);
        if (x < 0.6 && u0(x) > best1) best1 = u0(x), arg1 = x;
        if (x > 0.6 && u0(x) > best2) best2 = u0(x), arg2 = x;
    }
    CHECK(std::abs(arg1 - 0.4) < 0.01);
    CHECK(std::abs(arg2 - 0.8) < 0.01);
}

namespace {

std::shared_ptr<const Discretization> zero_disc(const Domain& d, double tau, double h, bool periodic = false) {
    BasisConfig b;
    b.M = 2;
    b.r = 0.0;
    b.compression_tol = 0.0;
    return std::make_shared<const Discretization>(build_uniform_mesh(d, tau, h, periodic), b);
}

}  // namespace

TEST_CASE("global errors against closed forms") {
    const Domain unit{0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1};
    auto disc = zero_disc(unit, 0.5, 0.25);
    const SolutionField zero(disc, Eigen::VectorXd::Ones(disc->n_cols()));
    const ExactSolution nil{[](const Point&) { return 0.0; }, [](const Point&) { return Point{}; }};
    const auto e0 = global_errors(zero, nil, 8);
    CHECK(e0.E_L2 <= 1e-12);
    CHECK(e0.E_H1 <= 1e-12);
    const ExactSolution sine{[](const Point& p) { return std::sin(M_PI * p[1]); },
                             [](const Point& p) { return Point{0.0, M_PI * std::cos(M_PI * p[1]), 0.0}; }};
    const auto e = global_errors(zero, sine, 12);
    CHECK(e.E_L2 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(e.E_H1 == doctest::Approx(std::sqrt(0.5 * M_PI * M_PI)).epsilon(1e-12));
    REQUIRE(e.E_L2_slice.has_value());
    CHECK(*e.E_L2_slice == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(e.N_e == 8);
    CHECK(e.dof == 16);
    CHECK(global_errors(zero, sine, 24).E_L2 == doctest::Approx(e.E_L2).epsilon(1e-10));
}

TEST_CASE("iterate difference and norm properties") {
    const Domain dom{0.0, 2.0, -2.0, 3.0, 0.0, 1.0, 1};
    BasisConfig b;
    b.M = 6;
    b.r = 1.0;
    b.seed = 2;
    b.compression_tol = 0.0;
    auto disc = std::make_shared<const Discretization>(build_uniform_mesh(dom, 1.0, 1.0), b);
    const Eigen::Index n = disc->n_cols();
    const SolutionField a(disc, Eigen::VectorXd::LinSpaced(n, -1, 1));
    const SolutionField c(disc, Eigen::VectorXd::LinSpaced(n, 2, -0.5));
    const SolutionField z(disc, Eigen::VectorXd::Zero(n));
    CHECK(iterate_diff(a, a, 10) == 0.0);
    CHECK(iterate_diff(a, c, 10) == doctest::Approx(iterate_diff(c, a, 10)));
    CHECK(iterate_diff(a, c, 10) <= iterate_diff(a, z, 10) + iterate_diff(z, c, 10) + 1e-10);
    CHECK(iterate_diff(a, z, 12) == doctest::Approx(iterate_diff(a, z, 24)).epsilon(1e-8));
}

TEST_CASE("mass drift") {
    const Domain dom{0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1};
    auto disc = zero_disc(dom, 0.25, 0.25, true);
    const SolutionField zero(disc, Eigen::VectorXd::Zero(disc->n_cols()));
    CHECK(mass_drift(zero, [](const Point&) { return 0.0; }, 8) == 0.0);
    CHECK(mass_drift(zero, [](const Point&) { return 1.0; }, 8) == doctest::Approx(1.0));
    BasisConfig b;
    b.M = 4;
    b.r = 1.0;
    b.compression_tol = 0.0;
    auto rnd = std::make_shared<const Discretization>(build_uniform_mesh(dom, 0.25, 0.25, true), b);
    const SolutionField u(rnd, Eigen::VectorXd::LinSpaced(rnd->n_cols(), -1, 2));
    CHECK(mass_drift(u, [](const Point&) { return 0.0; }, 8) > 0.0);
    auto nonper = zero_disc(dom, 0.25, 0.25, false);
    CHECK_THROWS(mass_drift(SolutionField(nonper, Eigen::VectorXd::Zero(nonper->n_cols())), [](const Point&) { return 0.0; }, 8));
}

TEST_CASE("sample grids") {
    const Domain dom{0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1};
    auto disc = zero_disc(dom, 0.5, 0.5);
    const SolutionField zero(disc, Eigen::VectorXd::Zero(disc->n_cols()));
    const auto g = sample_grid(zero, 3, 5);
    CHECK(g.points.size() == 15);
    CHECK(grid_l2_difference(g, g, 1.0) == 0.0);
    CHECK_THROWS(sample_grid(zero, 1, 5));
}
