#include "lrnndg/analysis.hpp"

#include "lrnndg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lrnndg {

namespace {

double sech(double z) {
    const double c = std::cosh(z);
    return std::isfinite(c) ? 1.0 / c : 0.0;
}

}  // namespace

void ProblemSpec::validate() const {
    if (domain.d != 1 && domain.d != 2) throw std::invalid_argument("problem: spatial dimension must be 1 or 2");
    if (!(domain.t1 > domain.t0) || !(domain.x1 > domain.x0) || (domain.d == 2 && !(domain.y1 > domain.y0)))
        throw std::invalid_argument("problem: empty domain");
    if (!(epsilon > 0.0)) throw std::invalid_argument("problem: epsilon must be positive");
    if (!u0) throw std::invalid_argument("problem: initial data u0 missing");
    if (kdv()) {
        if (domain.d != 1) throw std::invalid_argument("problem: KdV problems need one spatial dimension");
        if (!periodic && (!g0 || !g1 || !g2)) throw std::invalid_argument("problem: KdV boundary data g0, g1, g2 missing");
    } else {
        if (periodic) throw std::invalid_argument("problem: periodic Burgers problems are not supported");
        if (advection != 0.0) throw std::invalid_argument("problem: advection applies to KdV problems only");
        if (!g) throw std::invalid_argument("problem: Burgers boundary data g missing");
    }
}

std::string to_string(Equation e) {
    switch (e) {
        case Equation::LinearKdV: return "LinearKdV";
        case Equation::GKdV_u3ux: return "GKdV_u3ux";
        case Equation::KdV_uux: return "KdV_uux";
        case Equation::Burgers: return "Burgers";
    }
    return "Unknown";
}

GKdVSoliton::GKdVSoliton(double A_, double eps_, double x0_) : A(A_), eps(eps_), x0(x0_) {
    if (!(eps > 0.0)) throw std::invalid_argument("exact_gkdv: eps must be positive");
    K = 3.0 * std::sqrt(A * A * A / (40.0 * eps));
    omega = K * (1.0 + A * A * A / 10.0);
}

double GKdVSoliton::u(double t, double x) const {
    const double z = K * (x - x0) - omega * t;
    return A * std::pow(sech(z), 2.0 / 3.0);
}

double GKdVSoliton::u_x(double t, double x) const {
    const double z = K * (x - x0) - omega * t;
    const double s = std::pow(sech(z), 2.0 / 3.0);
    return K * (-2.0 / 3.0) * A * s * std::tanh(z);
}

double GKdVSoliton::u_xx(double t, double x) const {
    const double z = K * (x - x0) - omega * t;
    const double s = std::pow(sech(z), 2.0 / 3.0);
    const double th = std::tanh(z);
    return K * K * A * s * (4.0 / 9.0 * th * th - 2.0 / 3.0 * (1.0 - th * th));
}

double GKdVSoliton::u_t(double t, double x) const { return -omega / K * u_x(t, x); }

ExactSolution GKdVSoliton::exact() const {
    const GKdVSoliton s = *this;
    return {[s](const Point& p) { return s.u(p[0], p[1]); },
            [s](const Point& p) { return Point{s.u_t(p[0], p[1]), s.u_x(p[0], p[1]), 0.0}; }};
}

GKdVSoliton exact_gkdv(double A, double eps, double x0) { return GKdVSoliton(A, eps, x0); }

ExactSolution exact_burgers(double eps, int d) {
    if (!(eps > 0.0)) throw std::invalid_argument("exact_burgers: eps must be positive");
    if (d != 1 && d != 2) throw std::invalid_argument("exact_burgers: d must be 1 or 2");
    auto xi = [d](const Point& p) { return p[1] + (d == 2 ? p[2] : 0.0) - p[0]; };
    auto value = [eps, xi](const Point& p) { return 0.5 * (1.0 - std::tanh(xi(p) / (4.0 * eps))); };
    auto gradient = [eps, xi, d](const Point& p) {
        const double s = sech(xi(p) / (4.0 * eps));
        const double du = -s * s / (8.0 * eps);
        return Point{-du, du, d == 2 ? du : 0.0};
    };
    return {value, gradient};
}

double DoubleSoliton::operator()(double x) const {
    const double k1 = 0.5 * std::sqrt(c1 / eps);
    const double k2 = 0.5 * std::sqrt(c2 / eps);
    const double s1 = sech(k1 * (x - x1));
    const double s2 = sech(k2 * (x - x2));
    return 3.0 * c1 * s1 * s1 + 3.0 * c2 * s2 * s2;
}

DoubleSoliton double_soliton_u0() { return {}; }

ExactSolution exact_sine_kdv() {
    return {[](const Point& p) { return std::sin(p[1] + p[0]); },
            [](const Point& p) {
                const double c = std::cos(p[1] + p[0]);
                return Point{c, c, 0.0};
            }};
}

ProblemSpec make_gkdv_problem(double A, double eps, double x0) {
    const GKdVSoliton s(A, eps, x0);
    ProblemSpec p;
    p.equation = Equation::GKdV_u3ux;
    p.epsilon = eps;
    p.advection = 1.0;
    p.domain = Domain{0.0, 2.0, -2.0, 3.0, 0.0, 1.0, 1};
    p.u0 = [s](const Point& q) { return s.u(0.0, q[1]); };
    const double xl = p.domain.x0, xr = p.domain.x1;
    p.g0 = [s, xl](const Point& q) { return s.u(q[0], xl); };
    p.g1 = [s, xr](const Point& q) { return s.u_x(q[0], xr); };
    p.g2 = [s, xr](const Point& q) { return s.u_xx(q[0], xr); };
    p.exact = s.exact();
    return p;
}

ProblemSpec make_double_soliton_problem(double eps) {
    DoubleSoliton u0;
    u0.eps = eps;
    ProblemSpec p;
    p.equation = Equation::KdV_uux;
    p.epsilon = eps;
    p.domain = Domain{0.0, 2.0, 0.0, 2.0, 0.0, 1.0, 1};
    p.periodic = true;
    p.u0 = [u0](const Point& q) { return u0(q[1]); };
    return p;
}

ProblemSpec make_burgers_problem(double eps, int d) {
    ProblemSpec p;
    p.equation = Equation::Burgers;
    p.epsilon = eps;
    p.domain = Domain{0.0, 1.0, 0.0, 1.0, 0.0, 1.0, d};
    p.exact = exact_burgers(eps, d);
    const ScalarFn u = p.exact->value;
    p.g = u;
    p.u0 = [u](const Point& q) { return u(Point{0.0, q[1], q[2]}); };
    return p;
}

ProblemSpec make_linear_kdv_sine_problem(const Domain& domain) {
    ProblemSpec p;
    p.equation = Equation::LinearKdV;
    p.epsilon = 1.0;
    p.domain = domain;
    p.exact = exact_sine_kdv();
    const double t0 = domain.t0, xl = domain.x0, xr = domain.x1;
    p.u0 = [t0](const Point& q) { return std::sin(q[1] + t0); };
    p.g0 = [xl](const Point& q) { return std::sin(xl + q[0]); };
    p.g1 = [xr](const Point& q) { return std::cos(xr + q[0]); };
    p.g2 = [xr](const Point& q) { return -std::sin(xr + q[0]); };
    return p;
}

ErrorReport global_errors(const SolutionField& solution, const ExactSolution& exact, int quad_n) {
    if (!exact.value) throw std::invalid_argument("global_errors: exact solution missing");
    const Discretization& disc = solution.disc();
    const SpaceTimeMesh& mesh = disc.mesh();
    const int d = mesh.d();
    std::vector<Deriv> derivs = {kValue, kDt, kDx};
    if (d == 2) derivs.push_back(kDy);
    double l2 = 0.0, h1 = 0.0;
    for (const auto& cell : mesh.cells()) {
        const QuadRule rule = cell_rule(cell, quad_n);
        const LocalBasis& b = disc.basis(cell.id);
        const Eigen::VectorXd a = solution.alpha(cell.id);
        const auto mats = b.space.eval(rule.points, derivs);
        std::vector<Eigen::VectorXd> vals;
        for (const auto& m : mats) vals.push_back(m * a);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto i = static_cast<Eigen::Index>(q);
            const double e = vals[0](i) - exact.value(rule.points[q]);
            l2 += rule.weights[q] * e * e;
            if (exact.gradient) {
                const Point g = exact.gradient(rule.points[q]);
                double s = 0.0;
                for (int k = 0; k <= d; ++k) {
                    const double de = vals[1 + k](i) - g[k];
                    s += de * de;
                }
                h1 += rule.weights[q] * s;
            }
        }
    }
    ErrorReport rep;
    rep.E_L2 = std::sqrt(l2);
    rep.E_H1 = exact.gradient ? std::sqrt(h1) : 0.0;
    double slice = 0.0;
    bool any = false;
    for (const auto& f : mesh.faces()) {
        if (f.kind != FaceKind::TemporalFinal) continue;
        any = true;
        const QuadRule rule = face_rule(f, quad_n);
        const Eigen::VectorXd v = solution.eval(f.plus_cell, rule.points, kValue);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double e = v(static_cast<Eigen::Index>(q)) - exact.value(rule.points[q]);
            slice += rule.weights[q] * e * e;
        }
    }
    if (any) rep.E_L2_slice = std::sqrt(slice);
    rep.N_e = mesh.num_cells();
    rep.dof = disc.dof();
    return rep;
}

double mass_drift(const SolutionField& solution, const ScalarFn& u0, int quad_n) {
    const SpaceTimeMesh& mesh = solution.disc().mesh();
    if (mesh.d() != 1 || !mesh.periodic()) throw std::invalid_argument("mass_drift: needs a periodic problem in one spatial dimension");
    double m0 = 0.0;
    std::map<double, double> mass;  // time node -> int u(t^-, x) dx
    const double tol = mesh.tolerance();
    for (const auto& f : mesh.faces()) {
        const QuadRule rule = face_rule(f, quad_n);
        if (f.kind == FaceKind::TemporalInitial) {
            for (std::size_t q = 0; q < rule.size(); ++q) m0 += rule.weights[q] * u0(rule.points[q]);
            continue;
        }
        if (f.kind != FaceKind::TemporalInterior && f.kind != FaceKind::TemporalFinal) continue;
        if (!(f.normal[0] > 0.5)) continue;
        const Eigen::VectorXd v = solution.eval(f.plus_cell, rule.points, kValue);
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * v(static_cast<Eigen::Index>(q));
        const double t = f.vertices[0][0];
        auto it = std::find_if(mass.begin(), mass.end(), [&](const auto& kv) { return std::abs(kv.first - t) <= tol; });
        if (it == mass.end())
            mass.emplace(t, s);
        else
            it->second += s;
    }
    double drift = 0.0;
    for (const auto& [t, m] : mass) drift = std::max(drift, std::abs(m - m0));
    return drift;
}

SampleGrid sample_grid(const SolutionField& solution, int n_t, int n_x, int n_y) {
    if (n_t < 2 || n_x < 2 || n_y < 1) throw std::invalid_argument("sample_grid: need at least two points per direction");
    const Domain& dom = solution.disc().mesh().domain();
    const bool two = dom.d == 2;
    if (two && n_y < 2) throw std::invalid_argument("sample_grid: need at least two points in y");
    SampleGrid g;
    for (int i = 0; i < n_t; ++i)
        for (int j = 0; j < n_x; ++j)
            for (int k = 0; k < (two ? n_y : 1); ++k) {
                Point p{dom.t0 + (dom.t1 - dom.t0) * i / (n_t - 1), dom.x0 + (dom.x1 - dom.x0) * j / (n_x - 1),
                        two ? dom.y0 + (dom.y1 - dom.y0) * k / (n_y - 1) : 0.0};
                g.points.push_back(p);
                g.values.push_back(solution.value(p));
            }
    return g;
}

double grid_l2_difference(const SampleGrid& a, const SampleGrid& b, double measure) {
    if (a.values.size() != b.values.size() || a.values.empty()) throw std::invalid_argument("grid_l2_difference: grids differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double e = a.values[i] - b.values[i];
        s += e * e;
    }
    return std::sqrt(s / static_cast<double>(a.values.size()) * measure);
}

}  // namespace lrnndg
