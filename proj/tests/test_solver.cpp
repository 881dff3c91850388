#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrnndg/analysis.hpp"
#include "lrnndg/solver.hpp"

#include <cstring>
#include <random>

using namespace lrnndg;

namespace {

Eigen::SparseMatrix<double> sparse(const Eigen::MatrixXd& m) { return m.sparseView(); }

}  // namespace

TEST_CASE("least squares examples") {
    SolverParams p;
    p.ls_mode = LsMode::Dense;
    Eigen::MatrixXd A(2, 1);
    A << 1, 1;
    Eigen::VectorXd b(2);
    b << 1, 3;
    auto r = least_squares_solve(sparse(A), b, p);
    CHECK(r.x(0) == doctest::Approx(2.0));
    CHECK(r.residual_norm == doctest::Approx(std::sqrt(2.0)));

    Eigen::MatrixXd S(2, 2);
    S << 1, 1, 1, 1;
    Eigen::VectorXd c(2);
    c << 2, 2;
    r = least_squares_solve(sparse(S), c, p);
    CHECK(r.x(0) == doctest::Approx(1.0));
    CHECK(r.x(1) == doctest::Approx(1.0));
    CHECK(r.rank == 1);

    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(5, 5);
    const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(5, -2, 2);
    for (LsMode m : {LsMode::Dense, LsMode::Iterative, LsMode::SparseQR, LsMode::SparseLU}) {
        p.ls_mode = m;
        CHECK((least_squares_solve(sparse(I), v, p).x - v).norm() < 1e-8);
    }
}

TEST_CASE("every mode solves a well-conditioned overdetermined system") {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> N;
    Eigen::MatrixXd A(60, 20);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = N(gen);
    Eigen::VectorXd x(20);
    for (auto& v : x) v = N(gen);
    const Eigen::VectorXd b = A * x;
    SolverParams p;
    for (LsMode m : {LsMode::Dense, LsMode::Iterative, LsMode::SparseQR, LsMode::Auto}) {
        p.ls_mode = m;
        const auto r = least_squares_solve(sparse(A), b, p);
        CHECK((r.x - x).norm() / x.norm() < 1e-6);
    }
    p.ls_mode = LsMode::SparseLU;
    CHECK_THROWS_AS(least_squares_solve(sparse(A), b, p), std::invalid_argument);
}

TEST_CASE("auto mode picks a path by size and shape") {
    SolverParams p;
    p.dense_threshold = 3;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(5, 5);
    const Eigen::VectorXd v = Eigen::VectorXd::Ones(5);
    CHECK(least_squares_solve(sparse(I), v, p).mode == LsMode::SparseLU);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(6, 5);
    R.topRows(5) = I;
    CHECK(least_squares_solve(sparse(R), Eigen::VectorXd::Ones(6), p).mode == LsMode::SparseQR);
    p.dense_threshold = 10;
    CHECK(least_squares_solve(sparse(I), v, p).mode == LsMode::Dense);
}

TEST_CASE("mode names round-trip") {
    for (LsMode m : {LsMode::Auto, LsMode::Dense, LsMode::Iterative, LsMode::SparseQR, LsMode::SparseLU})
        CHECK(ls_mode_from_string(to_string(m)) == m);
    CHECK(ls_mode_from_string("lsqr") == LsMode::Iterative);
    CHECK_THROWS(ls_mode_from_string("cholesky"));
}

TEST_CASE("parameter validation") {
    SolverParams p;
    p.eps0 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SolverParams{};
    p.N_ni = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SolverParams{};
    p.max_backtracks = -1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("linear problems take one solve") {
    const Domain dom{0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1};
    const auto problem = make_linear_kdv_sine_problem(dom);
    BasisConfig b;
    b.M = 40;
    b.r = 1.0;
    b.seed = 1;
    auto disc = std::make_shared<const Discretization>(build_uniform_mesh(dom, 0.5, 0.5), b);
    AssemblyConfig cfg;
    cfg.penalties.eta_time = cfg.penalties.eta_adv = cfg.penalties.eta2 = cfg.penalties.eta3 = 1.0;
    const Assembler a(disc, problem, cfg);
    const auto res = nonlinear_solve(a, SolverParams{});
    CHECK(res.trace.D.empty());
    CHECK(res.trace.converged);
    CHECK(global_errors(res.solution, *problem.exact, 10).E_L2 < 1e-3);
}

TEST_CASE("Newton iteration on a coarse soliton run") {
    const auto problem = make_gkdv_problem();
    BasisConfig b;
    b.M = 80;
    b.r = 1.76;
    b.seed = 1;
    auto disc = std::make_shared<const Discretization>(build_uniform_mesh(problem.domain, 1.0, 1.0), b);
    const Assembler a(disc, problem, AssemblyConfig{});
    SolverParams p;
    p.eps0 = 1e-6;
    p.N_ni = 10;
    const auto res = nonlinear_solve(a, p);
    CHECK(res.trace.converged);
    CHECK(res.trace.D.size() == static_cast<std::size_t>(res.trace.iterations_used));
    CHECK(res.trace.D.back() < 1e-6);
    CHECK(global_errors(res.solution, *problem.exact, 15).E_L2 < 0.1);
    for (double a : res.trace.step_lengths) CHECK((a > 0.0 && a <= 1.0));

    p.line_search = false;
    const auto plain = nonlinear_solve(a, p);
    CHECK(plain.trace.converged);
    CHECK(plain.trace.step_lengths.empty());
}

TEST_CASE("dense mode is bitwise deterministic") {
    const auto problem = make_gkdv_problem();
    BasisConfig b;
    b.M = 30;
    b.r = 1.76;
    b.seed = 9;
    auto run = [&] {
        auto disc = std::make_shared<const Discretization>(build_uniform_mesh(problem.domain, 1.0, 1.0), b);
        const Assembler a(disc, problem, AssemblyConfig{});
        SolverParams p;
        p.ls_mode = LsMode::Dense;
        p.N_ni = 3;
        return global_errors(nonlinear_solve(a, p).solution, *problem.exact, 10).E_L2;
    };
    const double e1 = run(), e2 = run();
    CHECK(std::memcmp(&e1, &e2, sizeof(double)) == 0);
}
