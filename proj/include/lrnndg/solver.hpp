#pragma once

#include "lrnndg/assembly.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <string>
#include <vector>

namespace lrnndg {

enum class LsMode {
    Auto,       // Dense up to dense_threshold unknowns; SparseLU (square) or SparseQR above
    Dense,      // truncated complete orthogonal factorization
    Iterative,  // LSQR with block column preconditioning
    SparseQR,   // damped multifrontal sparse QR
    SparseLU,   // shifted sparse LU, square systems only
};

std::string to_string(LsMode m);
LsMode ls_mode_from_string(const std::string& s);

struct SolverParams {
    double eps0 = 1e-4;
    int N_ni = 30;
    LsMode ls_mode = LsMode::Auto;
    double truncation = 1e-12;
    double damping = 1e-10;    // sparse QR: Tikhonov weight on unit-norm columns
    double shift = 1e-10;      // sparse LU: diagonal shift relative to the mean column norm
    Eigen::Index dense_threshold = 2000;
    int max_lsqr_factor = 5;   // LSQR cap = factor * n_cols
    double lsqr_tol = 1e-12;
    int quad_n = 12;           // quadrature for D
    bool line_search = true;   // backtrack on the nonlinear residual norm
    int max_backtracks = 4;

    void validate() const;
};

struct LsResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0;
    Eigen::Index rank = 0;
    int iterations = 0;
    bool converged = true;
    LsMode mode = LsMode::Dense;
};

/// Minimizer of |A x - b|; minimum-norm in dense mode.
LsResult least_squares_solve(const AssembledSystem& system, const SolverParams& params);
LsResult least_squares_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b, const SolverParams& params,
                             const std::vector<Eigen::Index>& column_blocks = {});

struct IterationTrace {
    std::vector<double> D;
    std::vector<double> ls_residual_norms;
    std::vector<double> seconds;
    std::vector<double> step_lengths;
    bool converged = false;
    int iterations_used = 0;
};

struct NonlinearResult {
    SolutionField solution;
    IterationTrace trace;
};

NonlinearResult nonlinear_solve(const Assembler& assembler, const SolverParams& params);

}  // namespace lrnndg
