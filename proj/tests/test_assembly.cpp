#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrnndg/analysis.hpp"
#include "lrnndg/assembly.hpp"

#include <cmath>
#include <random>

using namespace lrnndg;

namespace {

std::shared_ptr<const Discretization> make_disc(const SpaceTimeMesh& mesh, int M, double comp = 0.0) {
    BasisConfig b;
    b.M = M;
    b.r = 1.0;
    b.seed = 4;
    b.compression_tol = comp;
    return std::make_shared<const Discretization>(mesh, b);
}

ProblemSpec zero_linear_kdv(const Domain& dom) {
    ProblemSpec p;
    p.equation = Equation::LinearKdV;
    p.domain = dom;
    p.u0 = p.g0 = p.g1 = p.g2 = [](const Point&) { return 0.0; };
    return p;
}

const Domain kUnit{0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1};

}  // namespace

TEST_CASE("linearization examples") {
    const Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(11, -1.0, 1.0);
    const Eigen::ArrayXd one = Eigen::ArrayXd::Ones(11);
    const Eigen::ArrayXd none;
    // constant state: b_L(w) = c w_x, b_R = 0
    const auto Lc = newton_linearize(NonlinearKind::UUx, 2.5 * one, Eigen::ArrayXd::Zero(11), none);
    CHECK(Lc.c_w.abs().maxCoeff() == 0.0);
    CHECK((Lc.c_wx - 2.5).abs().maxCoeff() == 0.0);
    CHECK(Lc.rhs.abs().maxCoeff() == 0.0);
    // u = x
    const auto L1 = newton_linearize(NonlinearKind::UUx, x, one, none);
    CHECK(((L1.c_w * x + L1.c_wx * one) - L1.rhs - x).abs().maxCoeff() < 1e-15);
    const auto L3 = newton_linearize(NonlinearKind::U3Ux, x, one, none);
    CHECK(((L3.c_w * x + L3.c_wx * one) - L3.rhs - x * x * x).abs().maxCoeff() < 1e-15);
}

TEST_CASE("linearization identity at random samples") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> U(-3, 3);
    Eigen::ArrayXd u(1000), ux(1000), uy(1000);
    for (int i = 0; i < 1000; ++i) u(i) = U(gen), ux(i) = U(gen), uy(i) = U(gen);
    for (auto kind : {NonlinearKind::UUx, NonlinearKind::U3Ux, NonlinearKind::Burgers}) {
        const Eigen::ArrayXd y = kind == NonlinearKind::Burgers ? uy : Eigen::ArrayXd();
        const auto L = newton_linearize(kind, u, ux, y);
        Eigen::ArrayXd bl = L.c_w * u + L.c_wx * ux;
        if (y.size()) bl += L.c_wy * uy;
        const Eigen::ArrayXd b = nonlinear_term(kind, u, ux, y);
        CHECK(((bl - L.rhs - b).abs() / b.abs().max(1.0)).maxCoeff() < 1e-12);
    }
    const auto P = newton_linearize(NonlinearKind::UUx, u, ux, Eigen::ArrayXd(), Linearization::Picard);
    CHECK(P.rhs.abs().maxCoeff() == 0.0);
    CHECK(((P.c_wx * ux) - u * ux).abs().maxCoeff() < 1e-14);
}

TEST_CASE("integration by parts and jump identities") {
    const auto mesh = build_uniform_mesh(kUnit, 0.25, 0.2);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> U(-1, 1);
    const std::size_t n = mesh.num_cells();
    std::vector<std::array<double, 4>> cv(n), cq(n), cw(n);
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < 4; ++k) cv[i][k] = U(gen), cq[i][k] = U(gen), cw[i][k] = U(gen);
    auto make = [](std::vector<std::array<double, 4>> c) {
        // a + b t x^2 + c x^3 + d t^2 x
        return CellField{[c](std::size_t i, const Point& p) {
                             return c[i][0] + c[i][1] * p[0] * p[1] * p[1] + c[i][2] * std::pow(p[1], 3) + c[i][3] * p[0] * p[0] * p[1];
                         },
                         [c](std::size_t i, const Point& p) {
                             return Point{c[i][1] * p[1] * p[1] + 2 * c[i][3] * p[0] * p[1],
                                          2 * c[i][1] * p[0] * p[1] + 3 * c[i][2] * p[1] * p[1] + c[i][3] * p[0] * p[0], 0.0};
                         }};
    };
    const CellField v = make(cv), w = make(cw), qs = make(cq);
    const CellVectorField q{[qs](std::size_t i, const Point& p) { return Point{0.0, qs.value(i, p), 0.0}; },
                            [qs](std::size_t i, const Point& p) { return qs.gradient(i, p)[1]; }};
    const auto d = verify_identities(mesh, v, q, w, 8);
    CHECK(d.max() <= 1e-10);

    // constants: no jump contributions at all
    const CellField c1{[](std::size_t, const Point&) { return 1.0; }, [](std::size_t, const Point&) { return Point{}; }};
    const CellVectorField qc{[](std::size_t, const Point&) { return Point{0.0, 2.0, 0.0}; }, [](std::size_t, const Point&) { return 0.0; }};
    CHECK(verify_identities(mesh, c1, qc, c1, 4).max() <= 1e-13);
}

TEST_CASE("identities for tanh feature fields") {
    const auto mesh = build_uniform_mesh(kUnit, 0.5, 0.25);
    auto disc = make_disc(mesh, 6);
    Eigen::VectorXd coeffs = Eigen::VectorXd::LinSpaced(disc->n_cols(), -1.0, 1.0);
    const SolutionField u(disc, coeffs);
    const CellField v{[u](std::size_t c, const Point& p) {
                          const Point one[] = {p};
                          return u.eval(c, one, kValue)(0);
                      },
                      [u](std::size_t c, const Point& p) {
                          const Point one[] = {p};
                          return Point{u.eval(c, one, kDt)(0), u.eval(c, one, kDx)(0), 0.0};
                      }};
    const CellVectorField q{[v](std::size_t c, const Point& p) { return Point{0.0, v.value(c, p), 0.0}; },
                            [v](std::size_t c, const Point& p) { return v.gradient(c, p)[1]; }};
    CHECK(verify_identities(mesh, v, q, v, 20).max() <= 1e-8);
}

TEST_CASE("weak residual of the exact linear KdV solution vanishes") {
    const auto mesh = build_uniform_mesh(kUnit, 0.5, 0.2);
    const auto problem = make_linear_kdv_sine_problem(kUnit);
    const DerivativeFn u = [](const Point& p, Deriv d) { return d.y ? 0.0 : std::sin(p[0] + p[1] + 0.5 * M_PI * d.order()); };
    for (Scheme s : {Scheme::DG, Scheme::C1DG}) {
        AssemblyConfig cfg;
        cfg.scheme = s;
        cfg.quad_n = 15;
        const Assembler a(make_disc(mesh, 20), problem, cfg);
        CHECK(a.weak_residual(u).lpNorm<Eigen::Infinity>() <= 1e-8);
    }
}

TEST_CASE("homogeneous data gives a zero right-hand side") {
    const auto mesh = build_uniform_mesh(kUnit, 0.5, 0.5);
    for (Scheme s : {Scheme::DG, Scheme::C1DG}) {
        AssemblyConfig cfg;
        cfg.scheme = s;
        const Assembler a(make_disc(mesh, 10), zero_linear_kdv(kUnit), cfg);
        const auto sys = a.assemble();
        CHECK(sys.rhs.lpNorm<Eigen::Infinity>() == 0.0);
    }
    auto burgers = make_burgers_problem(0.1, 1);
    burgers.g = burgers.u0 = [](const Point&) { return 0.0; };
    burgers.exact.reset();
    const Assembler b(make_disc(mesh, 10), burgers, AssemblyConfig{});
    CHECK(b.assemble().rhs.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("DG system dimensions and sparsity") {
    const auto problem = make_gkdv_problem();
    const auto mesh = build_uniform_mesh(problem.domain, 1.0, 1.0);
    const Assembler a(make_disc(mesh, 80), problem, AssemblyConfig{});
    const auto sys = a.assemble();
    CHECK(sys.n_rows() == 800);
    CHECK(sys.n_cols() == 800);
    // cell blocks only couple face neighbors
    for (std::size_t i = 0; i < mesh.num_cells(); ++i)
        for (std::size_t j = 0; j < mesh.num_cells(); ++j) {
            bool neighbors = i == j;
            for (std::size_t f : mesh.cell_faces()[i]) {
                const Face& face = mesh.face(f);
                if (face.interior() && (face.plus_cell == j || *face.minus_cell == j)) neighbors = true;
            }
            if (neighbors) continue;
            const Eigen::MatrixXd block = Eigen::MatrixXd(sys.A).block(80 * i, 80 * j, 80, 80);
            CHECK(block.isZero(0.0));
        }
}

TEST_CASE("C1DG constraint row counts") {
    const auto problem = make_gkdv_problem();
    const auto mesh = build_uniform_mesh(problem.domain, 1.0, 1.0);
    AssemblyConfig cfg;
    cfg.scheme = Scheme::C1DG;
    cfg.n_c = 5;
    const Assembler a(make_disc(mesh, 10), problem, cfg);
    const auto sets = collocation_points(mesh, 5);
    using C = CollocationSets;
    const Eigen::Index expected = C::count(sets.initial) + C::count(sets.temporal_interior) + C::count(sets.boundary_left) +
                                  2 * C::count(sets.boundary_right) + 3 * C::count(sets.spatial_interior);
    const auto rc = a.row_counts();
    CHECK(rc[1] + rc[2] + rc[3] == expected);
    CHECK(rc[0] == 100);

    const auto burgers = make_burgers_problem(0.1, 2);
    const auto m3 = build_uniform_mesh(burgers.domain, 0.5, 0.5);
    const Assembler b(make_disc(m3, 10), burgers, cfg);
    const auto s3 = collocation_points(m3, 5);
    const Eigen::Index e3 = C::count(s3.initial) + C::count(s3.temporal_interior) + C::count(s3.boundary) + 3 * C::count(s3.spatial_interior);
    const auto rb = b.row_counts();
    CHECK(rb[1] + rb[2] + rb[3] == e3);
}

TEST_CASE("invalid penalties are rejected") {
    PenaltyConfig p;
    p.eta2 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    const auto problem = make_gkdv_problem();
    const auto mesh = build_uniform_mesh(problem.domain, 1.0, 1.0);
    AssemblyConfig cfg;
    cfg.penalties.eta_time = 0.0;
    CHECK_THROWS_AS(Assembler(make_disc(mesh, 5), problem, cfg), std::invalid_argument);
}

TEST_CASE("linearized system around the exact state") {
    // the Newton system evaluated at a discrete state reproduces the nonlinear residual identity
    const auto problem = make_gkdv_problem();
    const auto mesh = build_uniform_mesh(problem.domain, 1.0, 1.0);
    auto disc = make_disc(mesh, 12);
    const Assembler a(disc, problem, AssemblyConfig{});
    const SolutionField u(disc, Eigen::VectorXd::Constant(disc->n_cols(), 0.01));
    const auto lin = a.assemble(nullptr);
    const auto newton = a.assemble(&u);
    CHECK(newton.n_rows() == lin.n_rows());
    CHECK((Eigen::MatrixXd(newton.A) - Eigen::MatrixXd(lin.A)).norm() > 0.0);
}
