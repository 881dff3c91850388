#include "lrnndg/solution.hpp"

#include "lrnndg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrnndg {

std::vector<Deriv> compression_derivs(int d) {
    if (d == 1) return {kValue, kDt, kDx, kDxx, kDxxx};
    return {kValue, kDt, kDx, kDy, kDxx, kDyy};
}

InputMap cell_input_map(const Cell& cell) {
    InputMap map;
    map.center = 0.5 * (cell.lo + cell.hi);
    for (int a = 0; a < 3; ++a) map.half[a] = a < cell.dims ? 0.5 * (cell.hi[a] - cell.lo[a]) : 1.0;
    if (cell.shape == CellShape::Box || cell.dims != 2) return map;
    // align the x axis with the longest slanted edge
    double best = 0.0;
    for (const auto& [a, b] : cell.edges()) {
        const double dt = b[0] - a[0], dx = b[1] - a[1];
        if (std::abs(dt) <= 1e-12 * (cell.hi[0] - cell.lo[0])) continue;
        const double len = std::hypot(dt, dx);
        if (len > best) {
            best = len;
            map.shear = dx / dt;
        }
    }
    double w = 0.0;
    for (const auto& v : cell.vertices) w = std::max(w, std::abs(v[1] - map.center[1] - map.shear * (v[0] - map.center[0])));
    if (w > 0.0) map.half[1] = w;
    return map;
}

Discretization::Discretization(SpaceTimeMesh mesh, const BasisConfig& config) : mesh_(std::move(mesh)), config_(config) {
    if (config_.M < 1) throw std::invalid_argument("Discretization: M must be at least 1");
    const int d = mesh_.d();
    const auto derivs = compression_derivs(d);
    const double tol = 10.0 * mesh_.tolerance();
    bases_.reserve(mesh_.num_cells());
    offsets_.assign(1, 0);
    for (const auto& cell : mesh_.cells()) {
        const InputMap map = config_.normalize_inputs ? cell_input_map(cell) : InputMap{};
        RandomFeatureSpace space = init_space(cell.key, config_.M, d, config_.activation, config_.r, config_.seed, map);
        space.set_closure(cell.lo, cell.hi, tol);
        if (config_.compression_tol > 0.0) {
            std::vector<Point> pts;
            std::vector<double> wts;
            const QuadRule vol = cell_rule(cell, config_.sample_quad);
            const double measure = cell.measure();
            for (std::size_t q = 0; q < vol.size(); ++q) {
                pts.push_back(vol.points[q]);
                wts.push_back(vol.weights[q] / measure);
            }
            for (std::size_t fid : mesh_.cell_faces()[cell.id]) {
                const Face& f = mesh_.face(fid);
                const QuadRule fr = face_rule(f, config_.sample_quad);
                const bool shifted = f.minus_cell && *f.minus_cell == cell.id;
                const double fm = f.measure();
                for (std::size_t q = 0; q < fr.size(); ++q) {
                    pts.push_back(shifted ? fr.points[q] + f.minus_offset : fr.points[q]);
                    wts.push_back(fr.weights[q] / fm);
                }
            }
            const Point scale = cell_input_map(cell).half;
            bases_.push_back(compress(std::move(space), pts, wts, derivs, scale, config_.compression_tol));
        } else {
            bases_.push_back(identity_basis(std::move(space)));
        }
        offsets_.push_back(offsets_.back() + bases_.back().size());
    }
}

std::size_t Discretization::dof() const { return static_cast<std::size_t>(config_.M) * mesh_.num_cells(); }

SolutionField::SolutionField(std::shared_ptr<const Discretization> disc, Eigen::VectorXd coeffs)
    : disc_(std::move(disc)), coeffs_(std::move(coeffs)) {
    if (!disc_) throw std::invalid_argument("SolutionField: missing discretization");
    if (coeffs_.size() != disc_->n_cols()) throw std::invalid_argument("SolutionField: coefficient length mismatch");
}

Eigen::VectorXd SolutionField::cell_coeffs(std::size_t cell) const { return coeffs_.segment(disc_->offset(cell), disc_->size(cell)); }

Eigen::VectorXd SolutionField::alpha(std::size_t cell) const { return disc_->basis(cell).T * cell_coeffs(cell); }

Eigen::VectorXd SolutionField::eval(std::size_t cell, std::span<const Point> points, Deriv deriv) const {
    const LocalBasis& b = disc_->basis(cell);
    return b.space.eval(points, deriv) * alpha(cell);
}

double SolutionField::value(const Point& p) const {
    const auto cell = disc_->mesh().locate(p);
    if (!cell) throw std::domain_error("SolutionField::value: point outside the mesh");
    const Point one[1] = {p};
    return eval(*cell, one, kValue)(0);
}

double iterate_diff(const SolutionField& a, const SolutionField& b, int quad_n) {
    if (&a.disc() != &b.disc()) throw std::invalid_argument("iterate_diff: fields live on different discretizations");
    const Discretization& disc = a.disc();
    double s = 0.0;
    for (const auto& cell : disc.mesh().cells()) {
        const QuadRule rule = cell_rule(cell, quad_n);
        const Eigen::VectorXd da = a.cell_coeffs(cell.id) - b.cell_coeffs(cell.id);
        const Eigen::VectorXd diff = disc.basis(cell.id).eval(rule.points, kValue) * da;
        for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * diff(static_cast<Eigen::Index>(q)) * diff(static_cast<Eigen::Index>(q));
    }
    return std::sqrt(s);
}

}  // namespace lrnndg
