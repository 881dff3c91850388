#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrnndg/adapt.hpp"
#include "lrnndg/quadrature.hpp"

#include <cmath>

using namespace lrnndg;

TEST_CASE("bulk marking examples") {
    const double e1[] = {3, 2, 1};
    CHECK(mark(e1, 0.7) == std::vector<std::size_t>{0, 1});
    const double e2[] = {1, 0, 2, 0.5};
    CHECK(mark(e2, 1.0) == std::vector<std::size_t>{2, 0, 3});
    const double e3[] = {1, 1, 1, 1};
    CHECK(mark(e3, 0.5) == std::vector<std::size_t>{0, 1});
    const double e4[] = {0, 0};
    CHECK(mark(e4, 0.7).empty());
    CHECK_THROWS_AS(mark(e1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mark(e1, 1.5), std::invalid_argument);
    const double bad[] = {1, -1};
    CHECK_THROWS_AS(mark(bad, 0.5), std::invalid_argument);
}

TEST_CASE("local estimator formula") {
    ProblemSpec p;
    p.equation = Equation::LinearKdV;
    p.domain = Domain{0.0, 1.0, 0.0, 2.0, 0.0, 1.0, 1};
    p.u0 = p.g0 = p.g1 = p.g2 = [](const Point&) { return 0.0; };
    BasisConfig b;
    b.M = 3;
    b.r = 1.0;
    b.seed = 5;
    b.compression_tol = 0.0;
    auto disc = std::make_shared<const Discretization>(build_uniform_mesh(p.domain, 0.5, 1.0), b);
    const SolutionField u(disc, Eigen::VectorXd::LinSpaced(disc->n_cols(), 0.5, 1.5));
    const auto est = local_residuals(p, u, 12);
    REQUIRE(est.size() == disc->mesh().num_cells());
    for (const auto& cell : disc->mesh().cells()) {
        const QuadRule rule = cell_rule(cell, 12);
        const Eigen::ArrayXd r = u.eval(cell.id, rule.points, kDt).array() + u.eval(cell.id, rule.points, kDxxx).array();
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * r(q) * r(q);
        const double h = std::hypot(0.5, 1.0);
        CHECK(est[cell.id] == doctest::Approx(std::sqrt(h * h * std::sqrt(s))).epsilon(1e-12));
    }
}

TEST_CASE("zero residual stops after one solve") {
    ProblemSpec p;
    p.equation = Equation::LinearKdV;
    p.domain = Domain{0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1};
    p.u0 = p.g0 = p.g1 = p.g2 = [](const Point&) { return 0.0; };
    BasisConfig b;
    b.M = 10;
    b.r = 1.0;
    const auto hist = adaptive_solve(p, build_uniform_mesh(p.domain, 0.5, 0.5), b, AssemblyConfig{}, SolverParams{}, AdaptParams{});
    CHECK(hist.size() == 1);
    CHECK(hist[0].marked.empty());
}

TEST_CASE("adaptive loop grows the mesh by the refinement rule") {
    const ProblemSpec p = make_gkdv_problem();
    BasisConfig b;
    b.M = 40;
    b.r = 1.9;
    b.seed = 1;
    AssemblyConfig a;
    a.scheme = Scheme::C1DG;
    SolverParams s;
    s.eps0 = 1e-6;
    s.N_ni = 6;
    AdaptParams ap;
    ap.max_cycles = 2;
    std::size_t calls = 0;
    const auto hist = adaptive_solve(p, build_uniform_mesh(p.domain, 1.0, 1.0), b, a, s, ap, [&](const AdaptCycle&, std::size_t) { ++calls; });
    REQUIRE(hist.size() == 3);
    CHECK(calls == 3);
    CHECK(hist[0].disc->mesh().num_cells() == 10);
    for (std::size_t i = 0; i + 1 < hist.size(); ++i)
        CHECK(hist[i + 1].disc->mesh().num_cells() == hist[i].disc->mesh().num_cells() + 3 * hist[i].marked.size());
    CHECK(hist.back().marked.empty());
    CHECK(hist[0].errors.has_value());
    CHECK(hist.back().errors->E_L2 < hist[0].errors->E_L2);

    ap.max_cells = 12;
    const auto capped = adaptive_solve(p, build_uniform_mesh(p.domain, 1.0, 1.0), b, a, s, ap);
    CHECK(capped.size() == 1);
}

TEST_CASE("adaptive parameters are validated") {
    AdaptParams ap;
    ap.beta = 0.0;
    CHECK_THROWS_AS(ap.validate(), std::invalid_argument);
    ap = AdaptParams{};
    ap.max_cycles = -1;
    CHECK_THROWS_AS(ap.validate(), std::invalid_argument);
}
