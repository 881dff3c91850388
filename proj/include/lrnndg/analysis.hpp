#pragma once

#include "lrnndg/problem.hpp"
#include "lrnndg/solution.hpp"

#include <optional>
#include <vector>

namespace lrnndg {

/// Traveling wave u = A sech^{2/3}(K (x - x0) - omega t), K = 3 sqrt(A^3 / (40 eps)), omega = K (1 + A^3 / 10).
struct GKdVSoliton {
    double A = 0.2275;
    double eps = 0.2058e-4;
    double x0 = 0.5;
    double K = 0.0;
    double omega = 0.0;

    GKdVSoliton(double A, double eps, double x0);
    [[nodiscard]] double u(double t, double x) const;
    [[nodiscard]] double u_x(double t, double x) const;
    [[nodiscard]] double u_xx(double t, double x) const;
    [[nodiscard]] double u_t(double t, double x) const;
    [[nodiscard]] double speed() const { return omega / K; }
    [[nodiscard]] ExactSolution exact() const;
};

GKdVSoliton exact_gkdv(double A, double eps, double x0);

/// u = 1 / (1 + exp((x [+ y] - t) / (2 eps))).
ExactSolution exact_burgers(double eps, int d);

/// 3 c1 sech^2(k1 (x - x1)) + 3 c2 sech^2(k2 (x - x2)), k_i = sqrt(c_i / eps) / 2.
struct DoubleSoliton {
    double eps = 4.84e-4;
    double c1 = 0.3, c2 = 0.1, x1 = 0.4, x2 = 0.8;
    [[nodiscard]] double operator()(double x) const;
};
DoubleSoliton double_soliton_u0();

/// u = sin(x + t), solving u_t + u_xxx = 0.
ExactSolution exact_sine_kdv();

/// Ready-made problems for the three examples.
ProblemSpec make_gkdv_problem(double A = 0.2275, double eps = 0.2058e-4, double x0 = 0.5);
ProblemSpec make_double_soliton_problem(double eps = 4.84e-4);
ProblemSpec make_burgers_problem(double eps, int d = 2);
/// u_t + eps u_xxx = 0 (a = 0) with data from u* = sin(x + t) on the given domain, eps = 1.
ProblemSpec make_linear_kdv_sine_problem(const Domain& domain);

struct ErrorReport {
    double E_L2 = 0.0;
    double E_H1 = 0.0;
    std::optional<double> E_L2_slice;
    std::optional<double> mass_drift;
    std::size_t N_e = 0;
    std::size_t dof = 0;
};

/// Global L2 and H1 (space-time gradient) errors plus the L2 error over Omega at t = T.
ErrorReport global_errors(const SolutionField& solution, const ExactSolution& exact, int quad_n);

/// max over the time nodes of |int u(t_i^-, x) dx - int u0 dx| (one spatial dimension).
double mass_drift(const SolutionField& solution, const ScalarFn& u0, int quad_n);

/// Values on a tensor grid of n_t x n_x (x n_y) points spanning the closed domain.
struct SampleGrid {
    std::vector<Point> points;
    std::vector<double> values;
};
SampleGrid sample_grid(const SolutionField& solution, int n_t, int n_x, int n_y = 1);

/// Root-mean-square difference of two fields on the same sample grid, scaled by sqrt(|Sigma|).
double grid_l2_difference(const SampleGrid& a, const SampleGrid& b, double measure);

}  // namespace lrnndg
