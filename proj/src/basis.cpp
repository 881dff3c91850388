#include "lrnndg/basis.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrnndg {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// uniform double in [0, 1) from the i-th counter of stream (seed, key)
double uniform01(std::uint64_t seed, std::uint64_t key, std::uint64_t i) {
    const std::uint64_t stream = splitmix(splitmix(seed) ^ (key * 0xD1B54A32D192ED03ULL));
    const std::uint64_t bits = splitmix(stream + i * 0x9E3779B97F4A7C15ULL);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

double activation_derivative(ActivationType type, double z, int k) {
    if (type == ActivationType::Tanh) {
        const double s = std::tanh(z);
        const double s1 = 1.0 - s * s;
        const double s2 = -2.0 * s * s1;
        const double s3 = -2.0 * s1 * s1 - 2.0 * s * s2;
        switch (k) {
            case 0: return s;
            case 1: return s1;
            case 2: return s2;
            case 3: return s3;
            case 4: return -6.0 * s1 * s2 - 2.0 * s * s3;
            default: break;
        }
    } else {
        const double g = std::exp(-0.5 * z * z);
        const double z2 = z * z;
        switch (k) {
            case 0: return g;
            case 1: return -z * g;
            case 2: return (z2 - 1.0) * g;
            case 3: return (3.0 * z - z2 * z) * g;
            case 4: return (z2 * z2 - 6.0 * z2 + 3.0) * g;
            default: break;
        }
    }
    throw std::invalid_argument("activation_derivative: order " + std::to_string(k) + " not supported");
}

RandomFeatureSpace::RandomFeatureSpace(Eigen::MatrixXd weights, Eigen::VectorXd biases, int d, ActivationKind activation,
                                       InputMap map)
    : weights_(std::move(weights)), biases_(std::move(biases)), d_(d), activation_(activation), map_(map) {
    if (d_ != 1 && d_ != 2) throw std::invalid_argument("RandomFeatureSpace: spatial dimension must be 1 or 2");
    if (biases_.size() < 1) throw std::invalid_argument("RandomFeatureSpace: M must be at least 1");
    if (weights_.rows() != biases_.size() || weights_.cols() != 1 + d_)
        throw std::invalid_argument("RandomFeatureSpace: weight matrix must be M x (1 + d)");
    const Eigen::Index M = biases_.size();
    grad_.setZero(M, 3);
    offset_ = biases_;
    if (activation_.type == ActivationType::GaussianWavelet) {
        if (d_ != 1) throw std::invalid_argument("RandomFeatureSpace: wavelet features need one spatial dimension");
        if (!std::isfinite(activation_.k) || !std::isfinite(activation_.x0) || !std::isfinite(activation_.time_weight))
            throw std::invalid_argument("RandomFeatureSpace: wavelet slope, anchor and time weight must be finite");
        if (!(map_.half[0] > 0.0)) throw std::invalid_argument("RandomFeatureSpace: input scale must be positive");
        // z = c w_t s_t + w_x (k t + x0 - x) + b, s_t the mapped time
        const Eigen::VectorXd wt = activation_.time_weight / map_.half[0] * weights_.col(0);
        grad_.col(0) = wt + activation_.k * weights_.col(1);
        grad_.col(1) = -weights_.col(1);
        offset_ += activation_.x0 * weights_.col(1) - wt * map_.center[0];
    } else {
        for (int a = 0; a <= d_; ++a) {
            if (!(map_.half[a] > 0.0)) throw std::invalid_argument("RandomFeatureSpace: input scale must be positive");
            grad_.col(a) = weights_.col(a) / map_.half[a];
            offset_ -= grad_.col(a) * map_.center[a];
        }
        if (map_.shear != 0.0) {
            if (!std::isfinite(map_.shear)) throw std::invalid_argument("RandomFeatureSpace: shear must be finite");
            grad_.col(0) -= map_.shear * grad_.col(1);
            offset_ += map_.shear * map_.center[0] * grad_.col(1);
        }
    }
}

void RandomFeatureSpace::set_closure(const Point& lo, const Point& hi, double tol) {
    has_closure_ = true;
    lo_ = lo;
    hi_ = hi;
    tol_ = tol;
}

void RandomFeatureSpace::check_points(std::span<const Point> points) const {
    if (!has_closure_) return;
    for (const auto& p : points)
        for (int a = 0; a <= d_; ++a)
            if (p[a] < lo_[a] - tol_ || p[a] > hi_[a] + tol_)
                throw std::domain_error("RandomFeatureSpace: evaluation point outside the cell closure");
}

std::vector<Eigen::MatrixXd> RandomFeatureSpace::eval(std::span<const Point> points, std::span<const Deriv> derivs) const {
    check_points(points);
    int max_order = 0;
    for (const auto& dv : derivs) {
        if (dv.t < 0 || dv.x < 0 || dv.y < 0 || dv.t > kMaxTimeOrder || dv.x + dv.y > kMaxSpaceOrder || (d_ == 1 && dv.y > 0))
            throw std::invalid_argument("RandomFeatureSpace: derivative order not supported");
        max_order = std::max(max_order, dv.order());
    }
    const Eigen::Index P = static_cast<Eigen::Index>(points.size());
    const Eigen::Index M = biases_.size();
    Eigen::MatrixXd pts(P, 3);
    for (Eigen::Index i = 0; i < P; ++i)
        for (int a = 0; a < 3; ++a) pts(i, a) = points[i][a];
    Eigen::MatrixXd z = pts * grad_.transpose();
    z.rowwise() += offset_.transpose();

    // rho^(k)(z) for every needed order
    std::vector<Eigen::MatrixXd> rho(max_order + 1, Eigen::MatrixXd(P, M));
    const bool tanh_act = activation_.type == ActivationType::Tanh;
    for (Eigen::Index j = 0; j < M; ++j) {
        for (Eigen::Index i = 0; i < P; ++i) {
            const double zz = z(i, j);
            if (tanh_act) {
                const double s = std::tanh(zz);
                const double s1 = 1.0 - s * s;
                rho[0](i, j) = s;
                if (max_order >= 1) rho[1](i, j) = s1;
                if (max_order >= 2) {
                    const double s2 = -2.0 * s * s1;
                    rho[2](i, j) = s2;
                    if (max_order >= 3) {
                        const double s3 = -2.0 * s1 * s1 - 2.0 * s * s2;
                        rho[3](i, j) = s3;
                        if (max_order >= 4) rho[4](i, j) = -6.0 * s1 * s2 - 2.0 * s * s3;
                    }
                }
            } else {
                for (int k = 0; k <= max_order; ++k) rho[k](i, j) = activation_derivative(ActivationType::GaussianWavelet, zz, k);
            }
        }
    }
    std::vector<Eigen::MatrixXd> out;
    out.reserve(derivs.size());
    for (const auto& dv : derivs) {
        Eigen::RowVectorXd factor = Eigen::RowVectorXd::Ones(M);
        for (int k = 0; k < dv.t; ++k) factor.array() *= grad_.col(0).transpose().array();
        for (int k = 0; k < dv.x; ++k) factor.array() *= grad_.col(1).transpose().array();
        for (int k = 0; k < dv.y; ++k) factor.array() *= grad_.col(2).transpose().array();
        out.push_back(rho[dv.order()].array().rowwise() * factor.array());
    }
    return out;
}

Eigen::MatrixXd RandomFeatureSpace::eval(std::span<const Point> points, Deriv deriv) const {
    const Deriv one[1] = {deriv};
    return std::move(eval(points, one).front());
}

RandomFeatureSpace init_space(std::uint64_t key, int M, int d, ActivationKind activation, double r, std::uint64_t seed,
                              InputMap map) {
    if (M < 1) throw std::invalid_argument("init_space: M must be at least 1");
    if (d != 1 && d != 2) throw std::invalid_argument("init_space: spatial dimension must be 1 or 2");
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("init_space: r must be finite and non-negative");
    Eigen::MatrixXd W(M, 1 + d);
    Eigen::VectorXd b(M);
    std::uint64_t counter = 0;
    for (int j = 0; j < M; ++j) {
        for (int a = 0; a <= d; ++a) W(j, a) = r * (2.0 * uniform01(seed, key, counter++) - 1.0);
        b(j) = r * (2.0 * uniform01(seed, key, counter++) - 1.0);
    }
    return RandomFeatureSpace(std::move(W), std::move(b), d, activation, map);
}

BasisTableau eval_tableau(const RandomFeatureSpace& space, std::span<const Point> points, int max_t_order, int max_x_order) {
    if (max_t_order < 0 || max_t_order > kMaxTimeOrder || max_x_order < 0 || max_x_order > kMaxSpaceOrder)
        throw std::invalid_argument("eval_tableau: requested order beyond supported");
    std::vector<Deriv> list;
    for (int t = 0; t <= max_t_order; ++t)
        for (int x = 0; x <= max_x_order; ++x)
            for (int y = 0; y <= (space.d() == 2 ? max_x_order - x : 0); ++y) list.push_back({t, x, y});
    auto mats = space.eval(points, list);
    BasisTableau tab;
    tab.points.assign(points.begin(), points.end());
    for (std::size_t i = 0; i < list.size(); ++i) tab.derivs.emplace(list[i], std::move(mats[i]));
    return tab;
}

Eigen::MatrixXd LocalBasis::eval(std::span<const Point> points, Deriv deriv) const { return space.eval(points, deriv) * T; }

std::vector<Eigen::MatrixXd> LocalBasis::eval(std::span<const Point> points, std::span<const Deriv> derivs) const {
    auto mats = space.eval(points, derivs);
    for (auto& m : mats) m = m * T;
    return mats;
}

LocalBasis identity_basis(RandomFeatureSpace space) {
    const int M = space.M();
    return {std::move(space), Eigen::MatrixXd::Identity(M, M)};
}

LocalBasis compress(RandomFeatureSpace space, std::span<const Point> points, std::span<const double> weights,
                    std::span<const Deriv> derivs, const Point& length_scale, double tol) {
    if (points.size() != weights.size()) throw std::invalid_argument("compress: points and weights differ in length");
    if (!(tol >= 0.0 && tol < 1.0)) throw std::invalid_argument("compress: tolerance must lie in [0, 1)");
    const auto mats = space.eval(points, derivs);
    const Eigen::Index P = static_cast<Eigen::Index>(points.size());
    const Eigen::Index M = space.M();
    const Eigen::Index rows = P * static_cast<Eigen::Index>(derivs.size());
    Eigen::MatrixXd S(rows, M);
    Eigen::VectorXd sw(P);
    for (Eigen::Index i = 0; i < P; ++i) sw(i) = std::sqrt(weights[i]);
    for (std::size_t k = 0; k < derivs.size(); ++k) {
        const double scale = std::pow(length_scale[0], derivs[k].t) * std::pow(length_scale[1], derivs[k].x) *
                             std::pow(length_scale[2], derivs[k].y);
        S.middleRows(static_cast<Eigen::Index>(k) * P, P) = (sw.asDiagonal() * mats[k]) * scale;
    }
    // singular values and right singular vectors only
    const lapack_int m = static_cast<lapack_int>(rows), n = static_cast<lapack_int>(M);
    const lapack_int kmin = std::min(m, n);
    Eigen::VectorXd sv(kmin);
    Eigen::MatrixXd vt(kmin, M);
    Eigen::VectorXd superb(std::max<lapack_int>(1, kmin - 1));
    Eigen::MatrixXd work = S;
    const lapack_int info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'N', 'S', m, n, work.data(), m, sv.data(), nullptr, 1, vt.data(),
                                           kmin, superb.data());
    if (info != 0) throw std::runtime_error("compress: SVD failed with info " + std::to_string(info));
    if (!(sv(0) > 0.0)) throw std::runtime_error("compress: feature space is identically zero on the samples");
    Eigen::Index r = 0;
    while (r < kmin && sv(r) > tol * sv(0)) ++r;
    Eigen::MatrixXd T = vt.topRows(r).transpose();
    for (Eigen::Index j = 0; j < r; ++j) T.col(j) /= sv(j);
    return {std::move(space), std::move(T)};
}

}  // namespace lrnndg
