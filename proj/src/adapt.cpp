#include "lrnndg/adapt.hpp"

#include "lrnndg/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lrnndg {

Eigen::ArrayXd pde_residual(const ProblemSpec& problem, const SolutionField& u, std::size_t cell, std::span<const Point> points) {
    const int d = u.disc().mesh().d();
    auto ev = [&](Deriv dv) { return u.eval(cell, points, dv).array().eval(); };
    const Eigen::ArrayXd v = ev(kValue), vt = ev(kDt), vx = ev(kDx);
    const double eps = problem.epsilon;
    switch (problem.equation) {
        case Equation::LinearKdV: return vt + problem.advection * vx + eps * ev(kDxxx);
        case Equation::GKdV_u3ux: return vt + problem.advection * vx + v * v * v * vx + eps * ev(kDxxx);
        case Equation::KdV_uux: return vt + problem.advection * vx + v * vx + eps * ev(kDxxx);
        case Equation::Burgers: {
            if (d == 2) {
                const Eigen::ArrayXd vy = ev(kDy);
                return vt + v * (vx + vy) - eps * (ev(kDxx) + ev(kDyy));
            }
            return vt + v * vx - eps * ev(kDxx);
        }
    }
    throw std::invalid_argument("pde_residual: unknown equation");
}

std::vector<double> local_residuals(const ProblemSpec& problem, const SolutionField& u, int quad_n) {
    const auto& mesh = u.disc().mesh();
    std::vector<double> out(mesh.num_cells());
    for (const auto& cell : mesh.cells()) {
        const QuadRule rule = cell_rule(cell, quad_n);
        const Eigen::ArrayXd r = pde_residual(problem, u, cell.id, rule.points);
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * r(static_cast<Eigen::Index>(q)) * r(static_cast<Eigen::Index>(q));
        const double h = cell.diameter();
        out[cell.id] = std::sqrt(h * h * std::sqrt(s));
    }
    return out;
}

std::vector<std::size_t> mark(std::span<const double> estimators, double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("mark: beta must lie in (0, 1]");
    std::vector<std::size_t> order(estimators.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return estimators[a] > estimators[b]; });
    double total = 0.0;
    for (double e : estimators) {
        if (!(e >= 0.0) || !std::isfinite(e)) throw std::invalid_argument("mark: estimators must be finite and non-negative");
        total += e * e;
    }
    std::vector<std::size_t> marked;
    if (total <= 0.0) return marked;
    double acc = 0.0;
    for (std::size_t i : order) {
        if (estimators[i] <= 0.0) break;
        marked.push_back(i);
        acc += estimators[i] * estimators[i];
        if (acc >= beta * total * (1.0 - 1e-14)) break;
    }
    return marked;
}

void AdaptParams::validate() const {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("adapt: beta must lie in (0, 1]");
    if (max_cycles < 0) throw std::invalid_argument("adapt: max_cycles must be non-negative");
    if (quad_n < 1) throw std::invalid_argument("adapt: quad_n must be positive");
    if (!(R_tol_stop >= 0.0)) throw std::invalid_argument("adapt: R_tol_stop must be non-negative");
}

std::vector<AdaptCycle> adaptive_solve(const ProblemSpec& problem, const SpaceTimeMesh& initial, const BasisConfig& basis,
                                       const AssemblyConfig& assembly, const SolverParams& solver, const AdaptParams& params,
                                       const CycleCallback& on_cycle) {
    params.validate();
    if (!initial.all_boxes()) throw std::invalid_argument("adaptive_solve: the initial mesh must consist of boxes");
    std::vector<AdaptCycle> history;
    SpaceTimeMesh mesh = initial;
    for (int cycle = 0; cycle <= params.max_cycles; ++cycle) {
        const auto t0 = std::chrono::steady_clock::now();
        auto disc = std::make_shared<const Discretization>(mesh, basis);
        const Assembler assembler(disc, problem, assembly);
        NonlinearResult res = nonlinear_solve(assembler, solver);
        AdaptCycle c{disc, std::move(res.solution), std::move(res.trace), {}, 0.0, {}, std::nullopt, 0.0};
        c.estimators = local_residuals(problem, c.solution, params.quad_n);
        for (double e : c.estimators) c.R_tol += e * e;
        if (problem.exact) {
            c.errors = global_errors(c.solution, *problem.exact, params.quad_n);
            c.errors->dof = disc->dof();
        }
        if (cycle < params.max_cycles && !(c.R_tol < params.R_tol_stop)) {
            c.marked = mark(c.estimators, params.beta);
            const std::size_t children = std::size_t{1} << (mesh.d() + 1);
            if (params.max_cells > 0 && mesh.num_cells() + c.marked.size() * (children - 1) > params.max_cells) c.marked.clear();
        }
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_cycle) on_cycle(c, static_cast<std::size_t>(cycle));
        const std::vector<std::size_t> marked = c.marked;
        history.push_back(std::move(c));
        if (marked.empty()) break;
        mesh = refine(mesh, marked);
    }
    return history;
}

}  // namespace lrnndg
