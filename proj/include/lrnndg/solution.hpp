#pragma once

#include "lrnndg/basis.hpp"
#include "lrnndg/mesh.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

namespace lrnndg {

struct BasisConfig {
    int M = 80;
    double r = 1.0;
    ActivationKind activation{};
    std::uint64_t seed = 0;
    bool normalize_inputs = true;  // tanh inputs mapped to [-1, 1] over the cell (sheared for slanted cells)
    double compression_tol = 1e-5; // relative singular value cutoff; 0 keeps every feature
    int sample_quad = 12;          // Gauss points per direction for the compression samples
};

/// Mesh plus one local basis per cell and the global column layout.
/// Input normalization used for a cell: bounding box for boxes, sheared along the longest slanted edge otherwise.
InputMap cell_input_map(const Cell& cell);

class Discretization {
public:
    Discretization(SpaceTimeMesh mesh, const BasisConfig& config);

    [[nodiscard]] const SpaceTimeMesh& mesh() const { return mesh_; }
    [[nodiscard]] const BasisConfig& config() const { return config_; }
    [[nodiscard]] const LocalBasis& basis(std::size_t cell) const { return bases_.at(cell); }
    [[nodiscard]] Eigen::Index offset(std::size_t cell) const { return offsets_[cell]; }
    [[nodiscard]] Eigen::Index size(std::size_t cell) const { return offsets_[cell + 1] - offsets_[cell]; }
    [[nodiscard]] Eigen::Index n_cols() const { return offsets_.back(); }
    /// Nominal degrees of freedom, sum of M over cells.
    [[nodiscard]] std::size_t dof() const;

private:
    SpaceTimeMesh mesh_;
    BasisConfig config_;
    std::vector<LocalBasis> bases_;
    std::vector<Eigen::Index> offsets_;
};

/// Derivatives sampled when compressing a cell basis.
std::vector<Deriv> compression_derivs(int d);

class SolutionField {
public:
    SolutionField(std::shared_ptr<const Discretization> disc, Eigen::VectorXd coeffs);

    [[nodiscard]] const Discretization& disc() const { return *disc_; }
    [[nodiscard]] std::shared_ptr<const Discretization> disc_ptr() const { return disc_; }
    [[nodiscard]] const Eigen::VectorXd& coeffs() const { return coeffs_; }
    [[nodiscard]] Eigen::VectorXd cell_coeffs(std::size_t cell) const;
    /// Output weights in the original feature coordinates (length M).
    [[nodiscard]] Eigen::VectorXd alpha(std::size_t cell) const;
    [[nodiscard]] Eigen::VectorXd eval(std::size_t cell, std::span<const Point> points, Deriv deriv) const;
    /// Value at an arbitrary point of the domain (first containing cell).
    [[nodiscard]] double value(const Point& p) const;

private:
    std::shared_ptr<const Discretization> disc_;
    Eigen::VectorXd coeffs_;
};

/// (int_Sigma (u_a - u_b)^2)^{1/2} by cellwise quadrature. Throws if the discretizations differ.
double iterate_diff(const SolutionField& a, const SolutionField& b, int quad_n);

}  // namespace lrnndg
