#include "lrnndg/experiment.hpp"
#include "lrnndg/quadrature.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace lrnndg {

namespace {

template <class F>
CheckResult timed(const std::string& name, double limit, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    r.name = name;
    r.limit = limit;
    try {
        r.value = body(r.detail);
        r.passed = std::isfinite(r.value) && r.value <= limit;
    } catch (const std::exception& e) {
        r.passed = false;
        r.value = std::numeric_limits<double>::quiet_NaN();
        r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// cubic in (t, x) with cell-dependent coefficients
struct Cubic {
    std::array<double, 10> c{};
    [[nodiscard]] double value(const Point& p) const {
        const double t = p[0], x = p[1];
        return c[0] + c[1] * t + c[2] * x + c[3] * t * t + c[4] * t * x + c[5] * x * x + c[6] * t * t * t + c[7] * t * t * x +
               c[8] * t * x * x + c[9] * x * x * x;
    }
    [[nodiscard]] Point gradient(const Point& p) const {
        const double t = p[0], x = p[1];
        const double dt = c[1] + 2 * c[3] * t + c[4] * x + 3 * c[6] * t * t + 2 * c[7] * t * x + c[8] * x * x;
        const double dx = c[2] + c[4] * t + 2 * c[5] * x + c[7] * t * t + 2 * c[8] * t * x + 3 * c[9] * x * x;
        return {dt, dx, 0.0};
    }
};

std::vector<Cubic> random_cubics(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<Cubic> out(n);
    for (auto& q : out)
        for (double& v : q.c) v = U(gen);
    return out;
}

CellField cell_field(std::vector<Cubic> f) {
    auto shared = std::make_shared<std::vector<Cubic>>(std::move(f));
    return {[shared](std::size_t c, const Point& p) { return (*shared)[c].value(p); },
            [shared](std::size_t c, const Point& p) { return (*shared)[c].gradient(p); }};
}

}  // namespace

CheckResult check_quadrature() {
    return timed("quadrature", 1e-12, [](std::string& detail) {
        double worst = 0.0;
        for (int n = 1; n <= 10; ++n) {
            const GaussRule1D g = gauss_legendre(n);
            for (int k = 0; k <= 2 * n - 1; ++k) {
                double s = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
                const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
                worst = std::max(worst, std::abs(s - exact));
            }
        }
        const std::array<Point, 3> tri = {Point{0.0, 0.0, 0.0}, Point{2.0, 0.5, 0.0}, Point{0.3, 1.7, 0.0}};
        const QuadRule r27 = triangle_rule_27(tri);
        const double area = 0.5 * std::abs(cross2(tri[1] - tri[0], tri[2] - tri[0]));
        worst = std::max(worst, std::abs(r27.total_weight() - area));
        const Point centroid = (1.0 / 3.0) * (tri[0] + tri[1] + tri[2]);
        auto lin = [](const Point& p) { return 1.0 + 2.0 * p[0] - 3.0 * p[1]; };
        const double lin_err = std::abs(r27.integrate(lin) - area * lin(centroid));
        if (lin_err > 1e-3) worst = std::max(worst, lin_err);
        // additivity: parent box vs. its four children for a polynomial of degree 2n - 1 per direction
        const int n = 6;
        auto poly = [](const Point& p) { return std::pow(p[0], 11) - 2.0 * std::pow(p[1], 9) * p[0] + std::pow(p[1], 5) + 1.0; };
        const Point lo{0.0, -1.0, 0.0}, hi{1.5, 0.5, 0.0}, mid = 0.5 * (lo + hi);
        const double parent = box_rule(lo, hi, 2, n).integrate(poly);
        double children = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const Point clo{i ? mid[0] : lo[0], j ? mid[1] : lo[1], 0.0};
                const Point chi{i ? hi[0] : mid[0], j ? hi[1] : mid[1], 0.0};
                children += box_rule(clo, chi, 2, n).integrate(poly);
            }
        const double additivity = std::abs(parent - children) / std::abs(parent);
        worst = std::max(worst, additivity);
        std::ostringstream s;
        s << "linear defect on triangle " << lin_err << ", additivity " << additivity;
        detail = s.str();
        return worst;
    });
}

CheckResult check_identities() {
    return timed("identities", 1e-10, [](std::string& detail) {
        const Domain dom{0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1};
        const SpaceTimeMesh mesh = build_uniform_mesh(dom, 1.0 / 4.0, 1.0 / 5.0, false);
        const std::size_t n = mesh.num_cells();
        const CellField v = cell_field(random_cubics(n, 11));
        const CellField w = cell_field(random_cubics(n, 12));
        const CellField qf = cell_field(random_cubics(n, 13));
        const CellVectorField q{[qf](std::size_t c, const Point& p) { return Point{0.0, qf.value(c, p), 0.0}; },
                                [qf](std::size_t c, const Point& p) { return qf.gradient(c, p)[1]; }};
        const IdentityDefects d = verify_identities(mesh, v, q, w, 8);
        std::ostringstream s;
        s << "ibps " << d.ibps << ", iden_dg " << d.iden_dg << ", iden_tdg " << d.iden_tdg;
        detail = s.str();
        return d.max();
    });
}

CheckResult check_linearization() {
    return timed("linearization", 1e-12, [](std::string& detail) {
        std::mt19937_64 gen(7);
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        const int n = 1000;
        Eigen::ArrayXd u(n), ux(n), uy(n);
        for (int i = 0; i < n; ++i) {
            u(i) = U(gen);
            ux(i) = U(gen);
            uy(i) = U(gen);
        }
        double worst = 0.0;
        for (NonlinearKind kind : {NonlinearKind::UUx, NonlinearKind::U3Ux, NonlinearKind::Burgers}) {
            const Eigen::ArrayXd y = kind == NonlinearKind::Burgers ? uy : Eigen::ArrayXd();
            const Linearized L = newton_linearize(kind, u, ux, y);
            Eigen::ArrayXd bl = L.c_w * u + L.c_wx * ux;
            if (kind == NonlinearKind::Burgers) bl += L.c_wy * uy;
            const Eigen::ArrayXd b = nonlinear_term(kind, u, ux, y);
            const Eigen::ArrayXd rel = (bl - L.rhs - b).abs() / b.abs().max(1.0);
            worst = std::max(worst, rel.maxCoeff());
        }
        detail = "three kinds, 1000 samples";
        return worst;
    });
}

CheckResult check_linear_consistency() {
    return timed("linear KdV consistency", 1e-8, [](std::string& detail) {
        const Domain dom{0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1};
        const ProblemSpec problem = make_linear_kdv_sine_problem(dom);
        BasisConfig basis;
        basis.M = 20;
        basis.r = 1.0;
        basis.seed = 3;
        basis.compression_tol = 0.0;
        auto disc = std::make_shared<const Discretization>(build_uniform_mesh(dom, 0.5, 0.2, false), basis);
        AssemblyConfig cfg;
        cfg.quad_n = 15;
        const Assembler assembler(disc, problem, cfg);
        const DerivativeFn u = [](const Point& p, Deriv d) {
            // d^k sin(s) = sin(s + k pi / 2), s = x + t
            const int k = d.t + d.x + d.y;
            if (d.y > 0) return 0.0;
            return std::sin(p[1] + p[0] + 0.5 * M_PI * k);
        };
        const Eigen::VectorXd r = assembler.weak_residual(u);
        detail = std::to_string(r.size()) + " rows";
        return r.lpNorm<Eigen::Infinity>();
    });
}

std::vector<CheckResult> run_invariant_checks() {
    return {check_quadrature(), check_identities(), check_linearization(), check_linear_consistency()};
}

}  // namespace lrnndg
