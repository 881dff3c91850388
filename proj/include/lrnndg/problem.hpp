#pragma once

#include "lrnndg/geometry.hpp"

#include <functional>
#include <optional>
#include <string>

namespace lrnndg {

enum class Equation { LinearKdV, GKdV_u3ux, KdV_uux, Burgers };

enum class Linearization { Newton, Picard };

using ScalarFn = std::function<double(const Point&)>;

/// Exact solution with its space-time gradient (u_t, u_x, u_y).
struct ExactSolution {
    ScalarFn value;
    std::function<Point(const Point&)> gradient;
};

/// KdV family: u_t + a u_x + N(u) + eps u_xxx = 0 with N in {0, u^3 u_x, u u_x}.
/// Burgers: u_t + u (grad u . 1) - eps Laplace u = 0.
struct ProblemSpec {
    Equation equation = Equation::LinearKdV;
    double epsilon = 1.0;
    double advection = 0.0;  // a, KdV family only
    Domain domain{};
    bool periodic = false;
    Linearization linearization = Linearization::Newton;

    ScalarFn u0;
    ScalarFn g0, g1, g2;  // KdV: u(t, x0), u_x(t, x1), u_xx(t, x1)
    ScalarFn g;           // Burgers Dirichlet data
    std::optional<ExactSolution> exact;

    [[nodiscard]] bool nonlinear() const { return equation != Equation::LinearKdV; }
    [[nodiscard]] bool kdv() const { return equation != Equation::Burgers; }
    /// Throws std::invalid_argument when required data are missing.
    void validate() const;
};

std::string to_string(Equation e);

}  // namespace lrnndg
