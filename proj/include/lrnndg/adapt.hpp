#pragma once

#include "lrnndg/analysis.hpp"
#include "lrnndg/assembly.hpp"
#include "lrnndg/solver.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace lrnndg {

/// Pointwise PDE residual L u - f of a discrete field (f = 0 for every supported equation).
Eigen::ArrayXd pde_residual(const ProblemSpec& problem, const SolutionField& u, std::size_t cell, std::span<const Point> points);

/// R_i = (h_i^2 * ||L u - f||_{L2(cell)})^{1/2} with h_i the space-time diameter of the cell.
std::vector<double> local_residuals(const ProblemSpec& problem, const SolutionField& u, int quad_n);

/// Smallest set of cells (largest estimators first, ties by id) whose squared sum reaches beta * total.
std::vector<std::size_t> mark(std::span<const double> estimators, double beta);

struct AdaptParams {
    double beta = 0.7;
    int max_cycles = 9;
    int quad_n = 15;
    std::size_t max_cells = 0;  // stop before a refinement would exceed this count (0: no limit)
    double R_tol_stop = 0.0;    // stop once the total squared estimator drops below this

    void validate() const;
};

struct AdaptCycle {
    std::shared_ptr<const Discretization> disc;
    SolutionField solution;
    IterationTrace trace;
    std::vector<double> estimators;
    double R_tol = 0.0;
    std::vector<std::size_t> marked;
    std::optional<ErrorReport> errors;
    double seconds = 0.0;
};

using CycleCallback = std::function<void(const AdaptCycle&, std::size_t cycle)>;

/// Solve, estimate, mark, refine; one entry per solved mesh (max_cycles + 1 solves at most).
/// The last entry has an empty `marked` list.
std::vector<AdaptCycle> adaptive_solve(const ProblemSpec& problem, const SpaceTimeMesh& initial, const BasisConfig& basis,
                                       const AssemblyConfig& assembly, const SolverParams& solver, const AdaptParams& params,
                                       const CycleCallback& on_cycle = {});

}  // namespace lrnndg
