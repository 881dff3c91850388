#include "lrnndg/solver.hpp"

#include <SuiteSparseQR.hpp>
#include <Eigen/UmfPackSupport>
#include <lapacke.h>

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace lrnndg {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

std::string to_string(LsMode m) {
    switch (m) {
        case LsMode::Auto: return "auto";
        case LsMode::Dense: return "dense";
        case LsMode::Iterative: return "iterative";
        case LsMode::SparseQR: return "sparse-qr";
        case LsMode::SparseLU: return "sparse-lu";
    }
    return "auto";
}

LsMode ls_mode_from_string(const std::string& s) {
    if (s == "auto") return LsMode::Auto;
    if (s == "dense") return LsMode::Dense;
    if (s == "iterative" || s == "lsqr") return LsMode::Iterative;
    if (s == "sparse-qr" || s == "spqr") return LsMode::SparseQR;
    if (s == "sparse-lu") return LsMode::SparseLU;
    throw std::invalid_argument("unknown least-squares mode '" + s + "'");
}

void SolverParams::validate() const {
    if (!(eps0 > 0.0)) throw std::invalid_argument("solver: eps0 must be positive");
    if (N_ni < 1) throw std::invalid_argument("solver: N_ni must be at least 1");
    if (!(truncation >= 0.0 && truncation < 1.0)) throw std::invalid_argument("solver: truncation must lie in [0, 1)");
    if (dense_threshold < 0) throw std::invalid_argument("solver: dense_threshold must be non-negative");
    if (!(damping >= 0.0) || !(shift >= 0.0)) throw std::invalid_argument("solver: damping and shift must be non-negative");
    if (max_lsqr_factor < 1 || !(lsqr_tol > 0.0)) throw std::invalid_argument("solver: invalid LSQR settings");
    if (quad_n < 1) throw std::invalid_argument("solver: quad_n must be positive");
    if (max_backtracks < 0) throw std::invalid_argument("solver: max_backtracks must be non-negative");
}

namespace {

LsResult solve_dense(const SpMat& A, const VectorXd& b, double rcond) {
    const Index m = A.rows(), n = A.cols();
    MatrixXd D = MatrixXd(A);
    const Index ldb = std::max(m, n);
    VectorXd rhs = VectorXd::Zero(ldb);
    rhs.head(m) = b;
    std::vector<lapack_int> jpvt(static_cast<std::size_t>(n), 0);
    lapack_int rank = 0;
    const lapack_int info = LAPACKE_dgelsy(LAPACK_COL_MAJOR, static_cast<lapack_int>(m), static_cast<lapack_int>(n), 1, D.data(),
                                           static_cast<lapack_int>(m), rhs.data(), static_cast<lapack_int>(ldb), jpvt.data(), rcond, &rank);
    if (info != 0) throw std::runtime_error("dense least squares failed (dgelsy info " + std::to_string(info) + ")");
    LsResult r;
    r.x = rhs.head(n);
    r.rank = rank;
    r.mode = LsMode::Dense;
    return r;
}

LsResult solve_spqr(const SpMat& A, const VectorXd& b, double damping) {
    // unit column norms, optional damping rows, Q-less factorization
    const Index m = A.rows(), n = A.cols();
    const Index mrows = damping > 0.0 ? m + n : m;
    VectorXd scale(n);
    for (Index j = 0; j < n; ++j) {
        const double nrm = A.col(j).norm();
        scale(j) = nrm > 0.0 ? 1.0 / nrm : 1.0;
    }
    cholmod_common cc;
    cholmod_l_start(&cc);
    const std::size_t nnz = static_cast<std::size_t>(A.nonZeros()) + (damping > 0.0 ? static_cast<std::size_t>(n) : 0);
    cholmod_sparse* S = cholmod_l_allocate_sparse(static_cast<std::size_t>(mrows), static_cast<std::size_t>(n), nnz, 1, 1, 0, CHOLMOD_REAL, &cc);
    cholmod_dense* B = cholmod_l_zeros(static_cast<std::size_t>(mrows), 1, CHOLMOD_REAL, &cc);
    if (!S || !B) {
        cholmod_l_free_sparse(&S, &cc);
        cholmod_l_free_dense(&B, &cc);
        cholmod_l_finish(&cc);
        throw std::runtime_error("sparse QR: out of memory");
    }
    auto* Sp = static_cast<SuiteSparse_long*>(S->p);
    auto* Si = static_cast<SuiteSparse_long*>(S->i);
    auto* Sx = static_cast<double*>(S->x);
    SuiteSparse_long pos = 0;
    for (Index j = 0; j < n; ++j) {
        Sp[j] = pos;
        for (SpMat::InnerIterator it(A, j); it; ++it) {
            Si[pos] = it.row();
            Sx[pos] = it.value() * scale(j);
            ++pos;
        }
        if (damping > 0.0) {
            Si[pos] = m + j;
            Sx[pos] = damping;
            ++pos;
        }
    }
    Sp[n] = pos;
    std::copy(b.data(), b.data() + m, static_cast<double*>(B->x));
    cholmod_dense* X = SuiteSparseQR<double>(SPQR_ORDERING_DEFAULT, SPQR_DEFAULT_TOL, S, B, &cc);
    cholmod_l_free_sparse(&S, &cc);
    cholmod_l_free_dense(&B, &cc);
    if (!X || cc.status < CHOLMOD_OK) {
        cholmod_l_free_dense(&X, &cc);
        cholmod_l_finish(&cc);
        throw std::runtime_error("sparse QR factorization failed (status " + std::to_string(cc.status) + ")");
    }
    LsResult r;
    r.x = scale.cwiseProduct(Eigen::Map<const VectorXd>(static_cast<const double*>(X->x), n));
    r.rank = static_cast<Index>(cc.SPQR_istat[4]);
    r.mode = LsMode::SparseQR;
    cholmod_l_free_dense(&X, &cc);
    cholmod_l_finish(&cc);
    return r;
}

LsResult solve_lu(const SpMat& A, const VectorXd& b, double shift) {
    if (A.rows() != A.cols()) throw std::invalid_argument("sparse LU needs a square system");
    SpMat As = A;
    if (shift > 0.0) {
        double mean = 0.0;
        for (Index j = 0; j < A.cols(); ++j) mean += A.col(j).norm();
        mean /= static_cast<double>(A.cols());
        for (Index j = 0; j < A.cols(); ++j) As.coeffRef(j, j) += shift * mean;
    }
    Eigen::UmfPackLU<SpMat> lu;
    lu.compute(As);
    if (lu.info() != Eigen::Success) throw std::runtime_error("sparse LU factorization failed");
    LsResult r;
    r.x = lu.solve(b);
    if (lu.info() != Eigen::Success || !r.x.allFinite()) throw std::runtime_error("sparse LU solve failed");
    r.rank = A.cols();
    r.mode = LsMode::SparseLU;
    return r;
}

// Right preconditioner P = blockdiag(V_c diag(1/sigma_c)) from the Gram matrix of each column block.
struct BlockPreconditioner {
    std::vector<Index> starts;
    std::vector<MatrixXd> P;

    VectorXd apply(const VectorXd& z) const {
        VectorXd out(z.size());
        for (std::size_t c = 0; c < P.size(); ++c) {
            const Index s = starts[c], n = P[c].rows();
            out.segment(s, n).noalias() = P[c] * z.segment(s, n);
        }
        return out;
    }
    VectorXd apply_t(const VectorXd& y) const {
        VectorXd out(y.size());
        for (std::size_t c = 0; c < P.size(); ++c) {
            const Index s = starts[c], n = P[c].rows();
            out.segment(s, n).noalias() = P[c].transpose() * y.segment(s, n);
        }
        return out;
    }
};

BlockPreconditioner make_preconditioner(const SpMat& A, const std::vector<Index>& blocks, double rcond) {
    BlockPreconditioner pc;
    std::vector<Index> starts = blocks;
    if (starts.empty()) {
        for (Index j = 0; j <= A.cols(); ++j) starts.push_back(j);
    }
    if (starts.front() != 0 || starts.back() != A.cols()) throw std::invalid_argument("least squares: bad column blocks");
    pc.starts.assign(starts.begin(), starts.end() - 1);
    for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
        const Index s = starts[c], n = starts[c + 1] - s;
        const MatrixXd G = MatrixXd(A.middleCols(s, n).transpose() * A.middleCols(s, n));
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
        const VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        const double emax = ev.maxCoeff();
        MatrixXd P = es.eigenvectors();
        for (Index k = 0; k < n; ++k) {
            const double sv = std::sqrt(ev(k));
            P.col(k) *= (emax > 0.0 && ev(k) > rcond * rcond * emax) ? 1.0 / sv : 0.0;
        }
        pc.P.push_back(std::move(P));
    }
    return pc;
}

// Paige-Saunders LSQR on A P z = b, x = P z.
LsResult solve_lsqr(const SpMat& A, const VectorXd& b, const std::vector<Index>& blocks, const SolverParams& params) {
    const BlockPreconditioner pc = make_preconditioner(A, blocks, 1e-10);
    const Index n = A.cols();
    const int max_it = static_cast<int>(std::min<long long>(static_cast<long long>(params.max_lsqr_factor) * n, std::numeric_limits<int>::max()));
    const double atol = params.lsqr_tol, btol = params.lsqr_tol;

    LsResult res;
    res.mode = LsMode::Iterative;
    VectorXd z = VectorXd::Zero(n);
    VectorXd u = b;
    double beta = u.norm();
    const double bnorm = beta;
    if (beta == 0.0) {
        res.x = VectorXd::Zero(n);
        return res;
    }
    u /= beta;
    VectorXd v = pc.apply_t(A.transpose() * u);
    double alpha = v.norm();
    if (alpha == 0.0) {
        res.x = VectorXd::Zero(n);
        res.residual_norm = bnorm;
        return res;
    }
    v /= alpha;
    VectorXd w = v;
    double phibar = beta, rhobar = alpha;
    double anorm = 0.0, xnorm = 0.0;
    double rnorm = beta;
    bool done = false;
    int it = 0;
    for (it = 1; it <= max_it; ++it) {
        u = A * pc.apply(v) - alpha * u;
        beta = u.norm();
        if (beta > 0.0) {
            u /= beta;
            anorm = std::sqrt(anorm * anorm + alpha * alpha + beta * beta);
            v = pc.apply_t(A.transpose() * u) - beta * v;
            alpha = v.norm();
            if (alpha > 0.0) v /= alpha;
        }
        const double rho = std::hypot(rhobar, beta);
        const double cs = rhobar / rho, sn = beta / rho;
        const double theta = sn * alpha;
        rhobar = -cs * alpha;
        const double phi = cs * phibar;
        phibar = sn * phibar;
        z += (phi / rho) * w;
        w = v - (theta / rho) * w;
        xnorm = z.norm();
        rnorm = phibar;
        const double arnorm = phibar * alpha * std::abs(cs);
        const double test1 = rnorm / bnorm;
        const double test2 = anorm > 0.0 && rnorm > 0.0 ? arnorm / (anorm * rnorm) : 0.0;
        const double rtol = btol + atol * anorm * xnorm / bnorm;
        if (test1 <= rtol || test2 <= atol) {
            done = true;
            break;
        }
    }
    res.x = pc.apply(z);
    res.iterations = std::min(it, max_it);
    res.converged = done;
    res.rank = n;
    return res;
}

}  // namespace

LsResult least_squares_solve(const SpMat& A, const VectorXd& b, const SolverParams& params, const std::vector<Index>& column_blocks) {
    if (A.rows() != b.size()) throw std::invalid_argument("least_squares_solve: matrix and right-hand side sizes differ");
    if (!b.allFinite()) throw std::invalid_argument("least_squares_solve: right-hand side is not finite");
    LsMode mode = params.ls_mode;
    if (mode == LsMode::Auto) {
        if (A.cols() <= params.dense_threshold)
            mode = LsMode::Dense;
        else
            mode = A.rows() == A.cols() ? LsMode::SparseLU : LsMode::SparseQR;
    }
    LsResult r;
    switch (mode) {
        case LsMode::Dense: r = solve_dense(A, b, params.truncation); break;
        case LsMode::SparseQR: r = solve_spqr(A, b, params.damping); break;
        case LsMode::SparseLU: r = solve_lu(A, b, params.shift); break;
        case LsMode::Iterative:
        case LsMode::Auto: r = solve_lsqr(A, b, column_blocks, params); break;
    }
    r.residual_norm = (A * r.x - b).norm();
    return r;
}

LsResult least_squares_solve(const AssembledSystem& system, const SolverParams& params) {
    return least_squares_solve(system.A, system.rhs, params);
}

namespace {

std::vector<Index> column_blocks(const Discretization& disc) {
    std::vector<Index> s;
    for (std::size_t c = 0; c < disc.mesh().num_cells(); ++c) s.push_back(disc.offset(c));
    s.push_back(disc.n_cols());
    return s;
}

}  // namespace

NonlinearResult nonlinear_solve(const Assembler& assembler, const SolverParams& params) {
    params.validate();
    using clock = std::chrono::steady_clock;
    const auto blocks = column_blocks(assembler.disc());
    IterationTrace trace;

    auto t0 = clock::now();
    const AssembledSystem sys0 = assembler.assemble(nullptr);
    LsResult ls = least_squares_solve(sys0.A, sys0.rhs, params, blocks);
    trace.ls_residual_norms.push_back(ls.residual_norm);
    trace.seconds.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    SolutionField current(assembler.disc_ptr(), std::move(ls.x));
    if (!assembler.problem().nonlinear()) {
        trace.converged = true;
        return {std::move(current), std::move(trace)};
    }
    // residual of the nonlinear system at u, from the system linearized at u
    auto residual = [](const AssembledSystem& sys, const SolutionField& u) { return (sys.A * u.coeffs() - sys.rhs).norm(); };
    AssembledSystem sys = assembler.assemble(&current);
    for (int k = 1; k <= params.N_ni; ++k) {
        t0 = clock::now();
        LsResult step = least_squares_solve(sys.A, sys.rhs, params, blocks);
        SolutionField next(assembler.disc_ptr(), std::move(step.x));
        double D = iterate_diff(next, current, params.quad_n);
        if (!std::isfinite(D)) throw std::runtime_error("nonlinear iteration diverged (non-finite iterate difference)");
        const bool done = D < params.eps0;
        std::optional<AssembledSystem> next_sys;
        if (params.line_search && !done) {
            const double f0 = residual(sys, current);
            const Eigen::VectorXd dir = next.coeffs() - current.coeffs();
            double alpha = 1.0;
            next_sys = assembler.assemble(&next);
            double f = residual(*next_sys, next);
            for (int b = 0; b < params.max_backtracks && !(f <= f0); ++b) {
                alpha *= 0.5;
                next = SolutionField(assembler.disc_ptr(), current.coeffs() + alpha * dir);
                next_sys = assembler.assemble(&next);
                f = residual(*next_sys, next);
            }
            if (alpha < 1.0) D = iterate_diff(next, current, params.quad_n);
            trace.step_lengths.push_back(alpha);
        }
        trace.D.push_back(D);
        trace.ls_residual_norms.push_back(step.residual_norm);
        trace.seconds.push_back(std::chrono::duration<double>(clock::now() - t0).count());
        trace.iterations_used = k;
        current = std::move(next);
        if (D < params.eps0) {
            trace.converged = true;
            break;
        }
        if (k < params.N_ni) sys = next_sys ? std::move(*next_sys) : assembler.assemble(&current);
    }
    return {std::move(current), std::move(trace)};
}

}  // namespace lrnndg
