#pragma once

#include "lrnndg/problem.hpp"
#include "lrnndg/solution.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lrnndg {

enum class Scheme { DG, C1DG };

std::string to_string(Scheme s);

/// Penalty constants c with eta = c / (face diameter).
struct PenaltyConfig {
    double eta_time = 220.0;  // temporal jumps
    double eta_adv = 220.0;   // jumps of the first-order x-transport term
    double eta2 = 220.0;      // KdV [u][v_x]
    double eta3 = 220.0;      // KdV [u_x][v]
    double eta_burgers = 40.0;
    bool burgers_penalty_times_eps = false;  // spatial Burgers penalty multiplied by eps
    double w_c = 1.0;                       // collocation row weight

    void validate() const;
};

struct AssemblyConfig {
    Scheme scheme = Scheme::DG;
    PenaltyConfig penalties{};
    int quad_n = 15;           // Gauss points per direction on cells and faces
    int n_c = 13;              // collocation points per face direction
    bool scale_derivative_rows = true;  // derivative constraints multiplied by (h/2)^order
};

enum class RowKind { Weak, CollocationInitial, CollocationBoundary, CollocationContinuity };

struct AssembledSystem {
    Eigen::SparseMatrix<double> A;  // n_rows x n_cols, column-major
    Eigen::VectorXd rhs;
    std::vector<RowKind> row_kinds;

    [[nodiscard]] Eigen::Index n_rows() const { return A.rows(); }
    [[nodiscard]] Eigen::Index n_cols() const { return A.cols(); }
};

enum class NonlinearKind { UUx, U3Ux, Burgers };

/// b_L(w) = c_w w + c_wx w_x + c_wy w_y and b_R at each point.
struct Linearized {
    Eigen::ArrayXd c_w, c_wx, c_wy, rhs;
};

/// u_prev values and spatial derivatives at points; uy ignored unless kind is Burgers in 2D (pass empty otherwise).
Linearized newton_linearize(NonlinearKind kind, const Eigen::ArrayXd& u, const Eigen::ArrayXd& ux, const Eigen::ArrayXd& uy,
                            Linearization method = Linearization::Newton);

/// Pointwise nonlinear term b(u) for the given kind.
Eigen::ArrayXd nonlinear_term(NonlinearKind kind, const Eigen::ArrayXd& u, const Eigen::ArrayXd& ux, const Eigen::ArrayXd& uy);

std::optional<NonlinearKind> nonlinear_kind(Equation e);

/// Smooth function given through its partial derivatives, used to apply the discrete operator to
/// functions outside the trial space.
using DerivativeFn = std::function<double(const Point&, Deriv)>;

class Assembler {
public:
    Assembler(std::shared_ptr<const Discretization> disc, ProblemSpec problem, AssemblyConfig config);

    [[nodiscard]] const Discretization& disc() const { return *disc_; }
    [[nodiscard]] std::shared_ptr<const Discretization> disc_ptr() const { return disc_; }
    [[nodiscard]] const ProblemSpec& problem() const { return problem_; }
    [[nodiscard]] const AssemblyConfig& config() const { return config_; }

    /// Linearized system around `previous`; without it only the linear part is assembled.
    [[nodiscard]] AssembledSystem assemble(const SolutionField* previous = nullptr) const;

    /// A u - b for a smooth u, row by row (linear part only).
    [[nodiscard]] Eigen::VectorXd weak_residual(const DerivativeFn& u) const;

    /// Row count per kind, in the order of RowKind.
    [[nodiscard]] std::array<Eigen::Index, 4> row_counts() const;

private:
    class Blocks;
    struct Trial;

    void build_linear(Blocks& blocks, const Trial& trial) const;
    void build_dg_kdv(Blocks& blocks, const Trial& trial) const;
    void build_dg_burgers(Blocks& blocks, const Trial& trial) const;
    void build_c1dg_weak(Blocks& blocks, const Trial& trial) const;
    void build_c1dg_constraints(Blocks& blocks, const Trial& trial) const;
    [[nodiscard]] std::vector<Eigen::MatrixXd> nonlinear_blocks(const SolutionField& previous, std::vector<Eigen::VectorXd>& rhs) const;

    std::shared_ptr<const Discretization> disc_;
    ProblemSpec problem_;
    AssemblyConfig config_;
    std::shared_ptr<Blocks> linear_;
};

/// Convenience entry points.
AssembledSystem assemble_kdv_dg(std::shared_ptr<const Discretization> disc, const ProblemSpec& problem, const PenaltyConfig& penalties,
                                int quad_n, const SolutionField* u_prev);
AssembledSystem assemble_kdv_c1dg(std::shared_ptr<const Discretization> disc, const ProblemSpec& problem, int n_c, int quad_n,
                                  const SolutionField* u_prev, double w_c);
AssembledSystem assemble_burgers_dg(std::shared_ptr<const Discretization> disc, const ProblemSpec& problem,
                                    const PenaltyConfig& penalties, int quad_n, const SolutionField* u_prev);
AssembledSystem assemble_burgers_c1dg(std::shared_ptr<const Discretization> disc, const ProblemSpec& problem, int n_c, int quad_n,
                                      const SolutionField* u_prev, double w_c);

/// Fields defined cell by cell (discontinuous across faces).
struct CellField {
    std::function<double(std::size_t, const Point&)> value;
    std::function<Point(std::size_t, const Point&)> gradient;  // (d/dt, d/dx, d/dy)
};

struct CellVectorField {
    std::function<Point(std::size_t, const Point&)> value;  // spatial components in slots 1 and 2
    std::function<double(std::size_t, const Point&)> divergence;
};

struct IdentityDefects {
    double ibps = 0.0;      // cellwise spatial integration by parts
    double iden_dg = 0.0;   // element boundaries vs. jumps and averages on spatial faces
    double iden_tdg = 0.0;  // temporal telescoping
    [[nodiscard]] double max() const { return std::max({ibps, iden_dg, iden_tdg}); }
};

/// Checks the integration-by-parts and jump/average identities by quadrature on a box mesh.
IdentityDefects verify_identities(const SpaceTimeMesh& mesh, const CellField& v, const CellVectorField& q, const CellField& w, int quad_n);

}  // namespace lrnndg
