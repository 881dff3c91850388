#include "lrnndg/assembly.hpp"

#include "lrnndg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace lrnndg {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string to_string(Scheme s) { return s == Scheme::DG ? "dg" : "c1dg"; }

void PenaltyConfig::validate() const {
    if (!(eta_time > 0.0) || !(eta_adv > 0.0) || !(eta2 > 0.0) || !(eta3 > 0.0) || !(eta_burgers > 0.0))
        throw std::invalid_argument("penalties: every penalty constant must be positive");
    if (!(w_c > 0.0)) throw std::invalid_argument("penalties: collocation weight w_c must be positive");
}

std::optional<NonlinearKind> nonlinear_kind(Equation e) {
    switch (e) {
        case Equation::GKdV_u3ux: return NonlinearKind::U3Ux;
        case Equation::KdV_uux: return NonlinearKind::UUx;
        case Equation::Burgers: return NonlinearKind::Burgers;
        case Equation::LinearKdV: break;
    }
    return std::nullopt;
}

Linearized newton_linearize(NonlinearKind kind, const Eigen::ArrayXd& u, const Eigen::ArrayXd& ux, const Eigen::ArrayXd& uy,
                            Linearization method) {
    const Index n = u.size();
    if (ux.size() != n) throw std::invalid_argument("newton_linearize: missing x-derivative table");
    const bool has_y = uy.size() > 0;
    if (has_y && uy.size() != n) throw std::invalid_argument("newton_linearize: y-derivative table has wrong length");
    Linearized L;
    L.c_wy = Eigen::ArrayXd::Zero(n);
    const bool newton = method == Linearization::Newton;
    switch (kind) {
        case NonlinearKind::UUx:
            L.c_w = newton ? ux : Eigen::ArrayXd::Zero(n);
            L.c_wx = u;
            L.rhs = newton ? (u * ux).eval() : Eigen::ArrayXd::Zero(n);
            break;
        case NonlinearKind::U3Ux: {
            const Eigen::ArrayXd u2 = u * u;
            L.c_w = newton ? (3.0 * u2 * ux).eval() : Eigen::ArrayXd::Zero(n);
            L.c_wx = u2 * u;
            L.rhs = newton ? (3.0 * u2 * u * ux).eval() : Eigen::ArrayXd::Zero(n);
            break;
        }
        case NonlinearKind::Burgers: {
            const Eigen::ArrayXd gsum = has_y ? (ux + uy).eval() : ux;
            L.c_w = newton ? gsum : Eigen::ArrayXd::Zero(n);
            L.c_wx = u;
            if (has_y) L.c_wy = u;
            L.rhs = newton ? (u * gsum).eval() : Eigen::ArrayXd::Zero(n);
            break;
        }
    }
    return L;
}

Eigen::ArrayXd nonlinear_term(NonlinearKind kind, const Eigen::ArrayXd& u, const Eigen::ArrayXd& ux, const Eigen::ArrayXd& uy) {
    switch (kind) {
        case NonlinearKind::UUx: return u * ux;
        case NonlinearKind::U3Ux: return u * u * u * ux;
        case NonlinearKind::Burgers: return uy.size() > 0 ? (u * (ux + uy)).eval() : (u * ux).eval();
    }
    return {};
}

// ---------------------------------------------------------------------------------------------
// block storage

class Assembler::Blocks {
public:
    struct RowBlock {
        Index offset = 0;
        Index rows = 0;
        RowKind kind = RowKind::Weak;
        std::vector<std::pair<std::size_t, MatrixXd>> cols;
        VectorXd rhs;
    };

    Blocks(const Discretization& disc, bool function_mode) : disc_(disc), function_mode_(function_mode) {}

    std::size_t add(Index rows, RowKind kind) {
        RowBlock rb;
        rb.offset = n_rows_;
        rb.rows = rows;
        rb.kind = kind;
        rb.rhs = VectorXd::Zero(rows);
        n_rows_ += rows;
        blocks_.push_back(std::move(rb));
        return blocks_.size() - 1;
    }

    MatrixXd& at(std::size_t rb, std::size_t cell) {
        RowBlock& b = blocks_[rb];
        const std::size_t key = function_mode_ ? 0 : cell;
        for (auto& [c, m] : b.cols)
            if (c == key) return m;
        const Index cols = function_mode_ ? 1 : disc_.size(cell);
        b.cols.emplace_back(key, MatrixXd::Zero(b.rows, cols));
        return b.cols.back().second;
    }

    VectorXd& rhs(std::size_t rb) { return blocks_[rb].rhs; }
    [[nodiscard]] const std::vector<RowBlock>& row_blocks() const { return blocks_; }
    [[nodiscard]] Index n_rows() const { return n_rows_; }

private:
    const Discretization& disc_;
    bool function_mode_;
    std::vector<RowBlock> blocks_;
    Index n_rows_ = 0;
};

struct Assembler::Trial {
    const Discretization* disc = nullptr;
    const DerivativeFn* fn = nullptr;

    [[nodiscard]] std::vector<MatrixXd> eval(std::size_t cell, std::span<const Point> pts, std::span<const Deriv> ds) const {
        if (!fn) return disc->basis(cell).eval(pts, ds);
        std::vector<MatrixXd> out;
        for (const auto& d : ds) {
            MatrixXd m(static_cast<Index>(pts.size()), 1);
            for (std::size_t i = 0; i < pts.size(); ++i) m(static_cast<Index>(i), 0) = (*fn)(pts[i], d);
            out.push_back(std::move(m));
        }
        return out;
    }
};

namespace {

void acc(MatrixXd& B, const MatrixXd& test, const VectorXd& w, const MatrixXd& trial, double c) {
    if (c == 0.0) return;
    B.noalias() += c * (test.transpose() * (w.asDiagonal() * trial));
}

void acc_rhs(VectorXd& r, const MatrixXd& test, const VectorXd& w, const VectorXd& g, double c) {
    if (c == 0.0) return;
    r.noalias() += c * (test.transpose() * w.cwiseProduct(g));
}

VectorXd to_vec(const std::vector<double>& v) { return Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(v.size())); }

VectorXd sample(const ScalarFn& f, std::span<const Point> pts) {
    VectorXd v(static_cast<Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) v(static_cast<Index>(i)) = f(pts[i]);
    return v;
}

std::vector<Point> shifted(const std::vector<Point>& pts, const Point& off) {
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(p + off);
    return out;
}

// spatial length of a cell along axis (1 = x, 2 = y)
double spatial_length(const Cell& c, int axis) {
    if (c.shape == CellShape::Box) return c.hi[axis] - c.lo[axis];
    return c.measure() / (c.hi[0] - c.lo[0]);
}

}  // namespace

// ---------------------------------------------------------------------------------------------

Assembler::Assembler(std::shared_ptr<const Discretization> disc, ProblemSpec problem, AssemblyConfig config)
    : disc_(std::move(disc)), problem_(std::move(problem)), config_(config) {
    if (!disc_) throw std::invalid_argument("Assembler: missing discretization");
    problem_.validate();
    config_.penalties.validate();
    if (config_.quad_n < 1) throw std::invalid_argument("Assembler: quadrature count must be positive");
    if (config_.scheme == Scheme::C1DG && config_.n_c < 1) throw std::invalid_argument("Assembler: n_c must be positive");
    const SpaceTimeMesh& mesh = disc_->mesh();
    if (mesh.d() != problem_.domain.d) throw std::invalid_argument("Assembler: mesh and problem dimensions differ");
    if (mesh.periodic() != problem_.periodic) throw std::invalid_argument("Assembler: mesh and problem periodicity differ");
    if (problem_.kdv() && !problem_.periodic && problem_.advection < 0.0)
        throw std::invalid_argument("Assembler: inflow boundary must be on the left (advection >= 0)");
    linear_ = std::make_shared<Blocks>(*disc_, false);
    Trial trial{disc_.get(), nullptr};
    build_linear(*linear_, trial);
}

void Assembler::build_linear(Blocks& blocks, const Trial& trial) const {
    const auto& mesh = disc_->mesh();
    for (const auto& cell : mesh.cells()) {
        blocks.add(disc_->size(cell.id), RowKind::Weak);
        blocks.at(cell.id, cell.id);
    }
    if (config_.scheme == Scheme::DG) {
        if (problem_.kdv())
            build_dg_kdv(blocks, trial);
        else
            build_dg_burgers(blocks, trial);
    } else {
        build_c1dg_weak(blocks, trial);
        build_c1dg_constraints(blocks, trial);
    }
}

void Assembler::build_dg_kdv(Blocks& B, const Trial& trial) const {
    const auto& mesh = disc_->mesh();
    const double eps = problem_.epsilon, a = problem_.advection;
    const auto& pen = config_.penalties;
    const int n = config_.quad_n;
    static const Deriv test_d[] = {kValue, kDx, kDxx};
    static const Deriv vol_trial_d[] = {kDt, kDx};
    static const Deriv face_d[] = {kValue, kDx, kDxx};

    for (const auto& cell : mesh.cells()) {
        const QuadRule rule = cell_rule(cell, n);
        const VectorXd w = to_vec(rule.weights);
        const auto V = disc_->basis(cell.id).eval(rule.points, test_d);
        const auto U = trial.eval(cell.id, rule.points, vol_trial_d);
        MatrixXd& blk = B.at(cell.id, cell.id);
        acc(blk, V[0], w, U[0] + a * U[1], 1.0);
        acc(blk, V[2], w, U[1], eps);
    }

    for (const auto& f : mesh.faces()) {
        const QuadRule rule = face_rule(f, n);
        const VectorXd w = to_vec(rule.weights);
        const double diam = f.diameter();
        const double nt = f.normal[0], nx = f.normal[1];
        const std::size_t P = f.plus_cell;
        switch (f.kind) {
            case FaceKind::TemporalInitial: {
                const auto V = disc_->basis(P).eval(rule.points, face_d);
                const auto U = trial.eval(P, rule.points, face_d);
                acc(B.at(P, P), V[0], w, U[0], 1.0);
                acc_rhs(B.rhs(P), V[0], w, sample(problem_.u0, rule.points), 1.0);
                break;
            }
            case FaceKind::TemporalFinal: break;
            case FaceKind::SpatialBoundaryLeft: {
                const double eta2 = pen.eta2 / diam;
                const auto V = disc_->basis(P).eval(rule.points, face_d);
                const auto U = trial.eval(P, rule.points, face_d);
                const VectorXd g0 = sample(problem_.g0, rule.points);
                MatrixXd& blk = B.at(P, P);
                acc(blk, V[0], w, U[0], a);
                acc(blk, V[2], w, U[0], eps);
                acc(blk, V[1], w, U[1], eps);
                acc(blk, V[1], w, U[0], eps * eta2);
                acc(blk, V[0], w, U[2], -eps);
                acc_rhs(B.rhs(P), V[0], w, g0, a);
                acc_rhs(B.rhs(P), V[2], w, g0, eps);
                acc_rhs(B.rhs(P), V[1], w, g0, eps * eta2);
                break;
            }
            case FaceKind::SpatialBoundaryRight: {
                const double eta3 = pen.eta3 / diam;
                const auto V = disc_->basis(P).eval(rule.points, face_d);
                const auto U = trial.eval(P, rule.points, face_d);
                const VectorXd g1 = sample(problem_.g1, rule.points);
                const VectorXd g2 = sample(problem_.g2, rule.points);
                acc(B.at(P, P), V[0], w, U[1], eps * eta3);
                acc_rhs(B.rhs(P), V[1], w, g1, eps);
                acc_rhs(B.rhs(P), V[0], w, g2, -eps);
                acc_rhs(B.rhs(P), V[0], w, g1, eps * eta3);
                break;
            }
            case FaceKind::SpatialBoundaryDirichlet:
                throw std::invalid_argument("KdV assembly: Dirichlet boundary faces are not supported");
            case FaceKind::SpatialInterior:
            case FaceKind::TemporalInterior: {
                const std::size_t cells[2] = {P, *f.minus_cell};
                const std::vector<Point> pts[2] = {rule.points, shifted(rule.points, f.minus_offset)};
                const double sgn[2] = {1.0, -1.0};
                std::vector<MatrixXd> V[2], U[2];
                for (int s = 0; s < 2; ++s) {
                    V[s] = disc_->basis(cells[s]).eval(pts[s], face_d);
                    U[s] = trial.eval(cells[s], pts[s], face_d);
                }
                const double cn = nt + a * nx;
                const double jump_pen = (pen.eta_time * std::abs(nt) + std::abs(a) * pen.eta_adv * std::abs(nx)) / diam;
                const double eta2 = pen.eta2 / diam, eta3 = pen.eta3 / diam;
                for (int ta = 0; ta < 2; ++ta) {
                    for (int tb = 0; tb < 2; ++tb) {
                        MatrixXd& blk = B.at(cells[ta], cells[tb]);
                        const double sa = sgn[ta], sb = sgn[tb];
                        acc(blk, V[ta][0], w, U[tb][0], -0.5 * cn * sb + jump_pen * sa * sb);
                        if (nx != 0.0) {
                            const double c = eps * nx;
                            acc(blk, V[ta][2], w, U[tb][0], -0.5 * c * sb);
                            acc(blk, V[ta][1], w, U[tb][1], -0.5 * c * sa);
                            acc(blk, V[ta][1], w, U[tb][0], c * eta2 * nx * sa * sb);
                            acc(blk, V[ta][0], w, U[tb][2], 0.5 * c * sa);
                            acc(blk, V[ta][0], w, U[tb][1], -c * eta3 * nx * sa * sb);
                        }
                    }
                }
                break;
            }
        }
    }
}

void Assembler::build_dg_burgers(Blocks& B, const Trial& trial) const {
    const auto& mesh = disc_->mesh();
    const int d = mesh.d();
    const double eps = problem_.epsilon;
    const auto& pen = config_.penalties;
    const int n = config_.quad_n;
    const std::vector<Deriv> vd = d == 2 ? std::vector<Deriv>{kValue, kDt, kDx, kDy} : std::vector<Deriv>{kValue, kDt, kDx};
    auto normal_deriv = [d](const std::vector<MatrixXd>& m, const Point& nrm) {
        MatrixXd r = nrm[1] * m[2];
        if (d == 2) r += nrm[2] * m[3];
        return r;
    };

    for (const auto& cell : mesh.cells()) {
        const QuadRule rule = cell_rule(cell, n);
        const VectorXd w = to_vec(rule.weights);
        const auto V = disc_->basis(cell.id).eval(rule.points, vd);
        const auto U = trial.eval(cell.id, rule.points, vd);
        MatrixXd& blk = B.at(cell.id, cell.id);
        acc(blk, V[0], w, U[1], 1.0);
        acc(blk, V[2], w, U[2], eps);
        if (d == 2) acc(blk, V[3], w, U[3], eps);
    }

    for (const auto& f : mesh.faces()) {
        const QuadRule rule = face_rule(f, n);
        const VectorXd w = to_vec(rule.weights);
        const double diam = f.diameter();
        const std::size_t P = f.plus_cell;
        const double pen_s = pen.eta_burgers / diam * (pen.burgers_penalty_times_eps ? eps : 1.0);
        switch (f.kind) {
            case FaceKind::TemporalInitial: {
                const auto V = disc_->basis(P).eval(rule.points, vd);
                const auto U = trial.eval(P, rule.points, vd);
                acc(B.at(P, P), V[0], w, U[0], 1.0);
                acc_rhs(B.rhs(P), V[0], w, sample(problem_.u0, rule.points), 1.0);
                break;
            }
            case FaceKind::TemporalFinal: break;
            case FaceKind::SpatialBoundaryLeft:
            case FaceKind::SpatialBoundaryRight:
            case FaceKind::SpatialBoundaryDirichlet: {
                const auto V = disc_->basis(P).eval(rule.points, vd);
                const auto U = trial.eval(P, rule.points, vd);
                const MatrixXd Vn = normal_deriv(V, f.normal);
                const MatrixXd Un = normal_deriv(U, f.normal);
                const VectorXd g = sample(problem_.g, rule.points);
                MatrixXd& blk = B.at(P, P);
                acc(blk, Vn, w, U[0], -eps);
                acc(blk, V[0], w, Un, -eps);
                acc(blk, V[0], w, U[0], pen_s);
                acc_rhs(B.rhs(P), Vn, w, g, -eps);
                acc_rhs(B.rhs(P), V[0], w, g, pen_s);
                break;
            }
            case FaceKind::SpatialInterior:
            case FaceKind::TemporalInterior: {
                const std::size_t cells[2] = {P, *f.minus_cell};
                const std::vector<Point> pts[2] = {rule.points, shifted(rule.points, f.minus_offset)};
                const double sgn[2] = {1.0, -1.0};
                std::vector<MatrixXd> V[2], U[2];
                MatrixXd Vn[2], Un[2];
                for (int s = 0; s < 2; ++s) {
                    V[s] = disc_->basis(cells[s]).eval(pts[s], vd);
                    U[s] = trial.eval(cells[s], pts[s], vd);
                    Vn[s] = normal_deriv(V[s], f.normal);
                    Un[s] = normal_deriv(U[s], f.normal);
                }
                const double nt = f.normal[0];
                const double spatial = std::sqrt(std::max(0.0, 1.0 - nt * nt));
                const double jump_pen = pen.eta_time * std::abs(nt) / diam + pen_s * spatial;
                for (int ta = 0; ta < 2; ++ta) {
                    for (int tb = 0; tb < 2; ++tb) {
                        MatrixXd& blk = B.at(cells[ta], cells[tb]);
                        const double sa = sgn[ta], sb = sgn[tb];
                        acc(blk, V[ta][0], w, U[tb][0], -0.5 * nt * sb + jump_pen * sa * sb);
                        if (spatial > 0.0) {
                            acc(blk, V[ta][0], w, Un[tb], -0.5 * eps * sa);
                            acc(blk, Vn[ta], w, U[tb][0], -0.5 * eps * sb);
                        }
                    }
                }
                break;
            }
        }
    }
}

void Assembler::build_c1dg_weak(Blocks& B, const Trial& trial) const {
    const auto& mesh = disc_->mesh();
    const int d = mesh.d();
    const double eps = problem_.epsilon, a = problem_.advection;
    const int n = config_.quad_n;
    const bool kdv = problem_.kdv();
    std::vector<Deriv> test_d, trial_d;
    if (kdv) {
        test_d = {kValue, kDt, kDx};
        trial_d = {kValue, kDx, kDxx};
    } else {
        test_d = {kValue, kDt, kDx};
        trial_d = {kValue, kDx};
        if (d == 2) {
            test_d.push_back(kDy);
            trial_d.push_back(kDy);
        }
    }
    for (const auto& cell : mesh.cells()) {
        const QuadRule rule = cell_rule(cell, n);
        const VectorXd w = to_vec(rule.weights);
        const auto V = disc_->basis(cell.id).eval(rule.points, test_d);
        const auto U = trial.eval(cell.id, rule.points, trial_d);
        MatrixXd& blk = B.at(cell.id, cell.id);
        acc(blk, V[1], w, U[0], -1.0);
        if (kdv) {
            acc(blk, V[0], w, U[1], a);
            acc(blk, V[2], w, U[2], -eps);
        } else {
            acc(blk, V[2], w, U[1], eps);
            if (d == 2) acc(blk, V[3], w, U[2], eps);
        }
        for (std::size_t fid : mesh.cell_faces()[cell.id]) {
            const Face& f = mesh.face(fid);
            const bool minus = f.minus_cell && *f.minus_cell == cell.id && f.plus_cell != cell.id;
            const QuadRule fr = face_rule(f, n);
            const std::vector<Point> pts = minus ? shifted(fr.points, f.minus_offset) : fr.points;
            const VectorXd fw = to_vec(fr.weights);
            const Point no = minus ? -1.0 * f.normal : f.normal;
            const auto Vf = disc_->basis(cell.id).eval(pts, std::span<const Deriv>(test_d.data(), 1));
            const auto Uf = trial.eval(cell.id, pts, trial_d);
            acc(blk, Vf[0], fw, Uf[0], no[0]);
            if (kdv) {
                acc(blk, Vf[0], fw, Uf[2], eps * no[1]);
            } else {
                MatrixXd Un = no[1] * Uf[1];
                if (d == 2) Un += no[2] * Uf[2];
                acc(blk, Vf[0], fw, Un, -eps);
            }
        }
    }
}

void Assembler::build_c1dg_constraints(Blocks& B, const Trial& trial) const {
    const auto& mesh = disc_->mesh();
    const int d = mesh.d();
    const double wc = config_.penalties.w_c;
    const bool kdv = problem_.kdv();
    const CollocationSets sets = collocation_points(mesh, config_.n_c);

    auto deriv_scale = [&](const Face& f, const Deriv& dv) {
        if (!config_.scale_derivative_rows || dv.order() == 0) return 1.0;
        double s = 1.0;
        for (int axis = 1; axis <= 2; ++axis) {
            const int k = axis == 1 ? dv.x : dv.y;
            if (k == 0) continue;
            double len = spatial_length(mesh.cell(f.plus_cell), axis);
            if (f.minus_cell) len = std::min(len, spatial_length(mesh.cell(*f.minus_cell), axis));
            s *= std::pow(0.5 * len, k);
        }
        return s;
    };

    // rows: wc * scale * (u_P - u_Q)^(dv) = 0, or wc * scale * u^(dv) = data
    auto jump_rows = [&](const CollocationGroup& g, const Deriv& dv, RowKind kind) {
        const Face& f = mesh.face(g.face);
        const double s = wc * deriv_scale(f, dv);
        const std::size_t rb = B.add(static_cast<Index>(g.points.size()), kind);
        const Deriv one[1] = {dv};
        const auto UP = trial.eval(f.plus_cell, g.points, one);
        const auto UQ = trial.eval(*f.minus_cell, shifted(g.points, f.minus_offset), one);
        B.at(rb, f.plus_cell) += s * UP[0];
        B.at(rb, *f.minus_cell) -= s * UQ[0];
    };
    auto data_rows = [&](const CollocationGroup& g, const Deriv& dv, const ScalarFn& data, RowKind kind) {
        const Face& f = mesh.face(g.face);
        const double s = wc * deriv_scale(f, dv);
        const std::size_t rb = B.add(static_cast<Index>(g.points.size()), kind);
        const Deriv one[1] = {dv};
        const auto U = trial.eval(f.plus_cell, g.points, one);
        B.at(rb, f.plus_cell) += s * U[0];
        B.rhs(rb) += s * sample(data, g.points);
    };

    for (const auto& g : sets.initial) data_rows(g, kValue, problem_.u0, RowKind::CollocationInitial);
    for (const auto& g : sets.temporal_interior) jump_rows(g, kValue, RowKind::CollocationContinuity);
    if (kdv) {
        for (const auto& g : sets.boundary_left) data_rows(g, kValue, problem_.g0, RowKind::CollocationBoundary);
        for (const auto& g : sets.boundary_right) {
            data_rows(g, kDx, problem_.g1, RowKind::CollocationBoundary);
            data_rows(g, kDxx, problem_.g2, RowKind::CollocationBoundary);
        }
        for (const auto& g : sets.spatial_interior) {
            jump_rows(g, kValue, RowKind::CollocationContinuity);
            jump_rows(g, kDx, RowKind::CollocationContinuity);
            jump_rows(g, kDxx, RowKind::CollocationContinuity);
        }
    } else {
        for (const auto& g : sets.boundary) data_rows(g, kValue, problem_.g, RowKind::CollocationBoundary);
        for (const auto& g : sets.spatial_interior) {
            jump_rows(g, kValue, RowKind::CollocationContinuity);
            jump_rows(g, kDx, RowKind::CollocationContinuity);
            if (d == 2) jump_rows(g, kDy, RowKind::CollocationContinuity);
        }
    }
}

std::vector<MatrixXd> Assembler::nonlinear_blocks(const SolutionField& previous, std::vector<VectorXd>& rhs) const {
    if (previous.disc_ptr() != disc_) throw std::invalid_argument("Assembler: previous iterate lives on a different discretization");
    const auto kind = nonlinear_kind(problem_.equation);
    const auto& mesh = disc_->mesh();
    const int d = mesh.d();
    const bool two = d == 2 && *kind == NonlinearKind::Burgers;
    const std::vector<Deriv> vd = two ? std::vector<Deriv>{kValue, kDx, kDy} : std::vector<Deriv>{kValue, kDx};
    std::vector<MatrixXd> blocks(mesh.num_cells());
    rhs.assign(mesh.num_cells(), VectorXd());
    for (const auto& cell : mesh.cells()) {
        const QuadRule rule = cell_rule(cell, config_.quad_n);
        const VectorXd w = to_vec(rule.weights);
        const auto V = disc_->basis(cell.id).eval(rule.points, vd);
        const VectorXd c = previous.cell_coeffs(cell.id);
        const Eigen::ArrayXd u = (V[0] * c).array();
        const Eigen::ArrayXd ux = (V[1] * c).array();
        const Eigen::ArrayXd uy = two ? (V[2] * c).array().eval() : Eigen::ArrayXd();
        const Linearized L = newton_linearize(*kind, u, ux, uy, problem_.linearization);
        MatrixXd trial = L.c_w.matrix().asDiagonal() * V[0];
        trial.noalias() += L.c_wx.matrix().asDiagonal() * V[1];
        if (two) trial.noalias() += L.c_wy.matrix().asDiagonal() * V[2];
        blocks[cell.id] = V[0].transpose() * (w.asDiagonal() * trial);
        rhs[cell.id] = V[0].transpose() * w.cwiseProduct(L.rhs.matrix());
    }
    return blocks;
}

AssembledSystem Assembler::assemble(const SolutionField* previous) const {
    const auto& rbs = linear_->row_blocks();
    const std::size_t ncells = disc_->mesh().num_cells();
    std::vector<MatrixXd> extra;
    std::vector<VectorXd> extra_rhs;
    if (previous && problem_.nonlinear()) extra = nonlinear_blocks(*previous, extra_rhs);

    // column-wise gather: (row block, matrix) per column cell in increasing row order
    std::vector<std::vector<std::pair<std::size_t, const MatrixXd*>>> by_col(ncells);
    for (std::size_t r = 0; r < rbs.size(); ++r)
        for (const auto& [c, m] : rbs[r].cols) by_col[c].emplace_back(r, &m);
    Index nnz = 0;
    for (std::size_t c = 0; c < ncells; ++c) {
        Index rows = 0;
        for (const auto& [r, m] : by_col[c]) rows += m->rows();
        nnz += rows * disc_->size(c);
    }
    AssembledSystem sys;
    const Index nr = linear_->n_rows(), nc = disc_->n_cols();
    sys.A.resize(nr, nc);
    sys.A.resizeNonZeros(nnz);
    auto* outer = sys.A.outerIndexPtr();
    auto* inner = sys.A.innerIndexPtr();
    double* val = sys.A.valuePtr();
    Index pos = 0;
    for (std::size_t c = 0; c < ncells; ++c) {
        const Index off = disc_->offset(c);
        for (Index j = 0; j < disc_->size(c); ++j) {
            outer[off + j] = static_cast<int>(pos);
            for (const auto& [r, m] : by_col[c]) {
                const Index ro = rbs[r].offset;
                const bool add = !extra.empty() && r == c;
                for (Index i = 0; i < m->rows(); ++i) {
                    inner[pos] = static_cast<int>(ro + i);
                    val[pos] = (*m)(i, j) + (add ? extra[c](i, j) : 0.0);
                    ++pos;
                }
            }
        }
    }
    outer[nc] = static_cast<int>(pos);
    sys.rhs.resize(nr);
    sys.row_kinds.reserve(static_cast<std::size_t>(nr));
    for (std::size_t r = 0; r < rbs.size(); ++r) {
        sys.rhs.segment(rbs[r].offset, rbs[r].rows) = rbs[r].rhs;
        if (!extra_rhs.empty() && r < ncells) sys.rhs.segment(rbs[r].offset, rbs[r].rows) += extra_rhs[r];
        sys.row_kinds.insert(sys.row_kinds.end(), static_cast<std::size_t>(rbs[r].rows), rbs[r].kind);
    }
    return sys;
}

Eigen::VectorXd Assembler::weak_residual(const DerivativeFn& u) const {
    Blocks blocks(*disc_, true);
    Trial trial{disc_.get(), &u};
    build_linear(blocks, trial);
    VectorXd res(blocks.n_rows());
    for (const auto& rb : blocks.row_blocks()) {
        VectorXd s = -rb.rhs;
        for (const auto& [c, m] : rb.cols) s += m.col(0);
        res.segment(rb.offset, rb.rows) = s;
    }
    return res;
}

std::array<Index, 4> Assembler::row_counts() const {
    std::array<Index, 4> counts{0, 0, 0, 0};
    for (const auto& rb : linear_->row_blocks()) counts[static_cast<std::size_t>(rb.kind)] += rb.rows;
    return counts;
}

namespace {

AssemblyConfig base_config(Scheme scheme, int quad_n) {
    AssemblyConfig c;
    c.scheme = scheme;
    c.quad_n = quad_n;
    return c;
}

}  // namespace

AssembledSystem assemble_kdv_dg(std::shared_ptr<const Discretization> disc, const ProblemSpec& problem, const PenaltyConfig& penalties,
                                int quad_n, const SolutionField* u_prev) {
    if (!problem.kdv()) throw std::invalid_argument("assemble_kdv_dg: not a KdV problem");
    AssemblyConfig c = base_config(Scheme::DG, quad_n);
    c.penalties = penalties;
    return Assembler(std::move(disc), problem, c).assemble(u_prev);
}

AssembledSystem assemble_kdv_c1dg(std::shared_ptr<const Discretization> disc, const ProblemSpec& problem, int n_c, int quad_n,
                                  const SolutionField* u_prev, double w_c) {
    if (!problem.kdv()) throw std::invalid_argument("assemble_kdv_c1dg: not a KdV problem");
    AssemblyConfig c = base_config(Scheme::C1DG, quad_n);
    c.n_c = n_c;
    c.penalties.w_c = w_c;
    return Assembler(std::move(disc), problem, c).assemble(u_prev);
}

AssembledSystem assemble_burgers_dg(std::shared_ptr<const Discretization> disc, const ProblemSpec& problem,
                                    const PenaltyConfig& penalties, int quad_n, const SolutionField* u_prev) {
    if (problem.kdv()) throw std::invalid_argument("assemble_burgers_dg: not a Burgers problem");
    AssemblyConfig c = base_config(Scheme::DG, quad_n);
    c.penalties = penalties;
    return Assembler(std::move(disc), problem, c).assemble(u_prev);
}

AssembledSystem assemble_burgers_c1dg(std::shared_ptr<const Discretization> disc, const ProblemSpec& problem, int n_c, int quad_n,
                                      const SolutionField* u_prev, double w_c) {
    if (problem.kdv()) throw std::invalid_argument("assemble_burgers_c1dg: not a Burgers problem");
    AssemblyConfig c = base_config(Scheme::C1DG, quad_n);
    c.n_c = n_c;
    c.penalties.w_c = w_c;
    return Assembler(std::move(disc), problem, c).assemble(u_prev);
}

}  // namespace lrnndg
