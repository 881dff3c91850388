#pragma once

#include "lrnndg/geometry.hpp"

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace lrnndg {

enum class ActivationType { Tanh, GaussianWavelet };

struct ActivationKind {
    ActivationType type = ActivationType::Tanh;
    double k = 0.0;   // characteristic slope (wavelet only)
    double x0 = 0.0;  // anchor (wavelet only)
    double time_weight = 1.0;  // multiplies the random time weights (wavelet only)

    static ActivationKind tanh() { return {}; }
    static ActivationKind wavelet(double k, double x0, double time_weight = 1.0) {
        return {ActivationType::GaussianWavelet, k, x0, time_weight};
    }
};

/// Partial derivative multi-index in (t, x, y).
struct Deriv {
    int t = 0, x = 0, y = 0;
    [[nodiscard]] int order() const { return t + x + y; }
    auto operator<=>(const Deriv&) const = default;
};

inline constexpr Deriv kValue{0, 0, 0};
inline constexpr Deriv kDt{1, 0, 0};
inline constexpr Deriv kDx{0, 1, 0};
inline constexpr Deriv kDy{0, 0, 1};
inline constexpr Deriv kDxx{0, 2, 0};
inline constexpr Deriv kDyy{0, 0, 2};
inline constexpr Deriv kDxxx{0, 3, 0};

/// Affine normalization of the network input: s = (p - center) / half, componentwise, after the
/// shear x -> x - shear * (t - center_t).
struct InputMap {
    Point center{0.0, 0.0, 0.0};
    Point half{1.0, 1.0, 1.0};
    double shear = 0.0;
};

/// Single-hidden-layer random feature space phi_j(p) = rho(w_j . s(p) + b_j) with frozen w, b.
/// Tanh features act on the normalized input s; wavelet features act on (t, k t + x0 - x).
class RandomFeatureSpace {
public:
    RandomFeatureSpace() = default;
    RandomFeatureSpace(Eigen::MatrixXd weights, Eigen::VectorXd biases, int d, ActivationKind activation, InputMap map = {});

    [[nodiscard]] int M() const { return static_cast<int>(biases_.size()); }
    [[nodiscard]] int d() const { return d_; }
    [[nodiscard]] const Eigen::MatrixXd& weights() const { return weights_; }
    [[nodiscard]] const Eigen::VectorXd& biases() const { return biases_; }
    [[nodiscard]] const ActivationKind& activation() const { return activation_; }
    [[nodiscard]] const InputMap& input_map() const { return map_; }

    /// Restrict evaluation to the box [lo, hi] (points further out than tol raise std::domain_error).
    void set_closure(const Point& lo, const Point& hi, double tol);

    /// Matrix with one row per point and one column per feature.
    [[nodiscard]] Eigen::MatrixXd eval(std::span<const Point> points, Deriv deriv) const;
    [[nodiscard]] std::vector<Eigen::MatrixXd> eval(std::span<const Point> points, std::span<const Deriv> derivs) const;

private:
    void check_points(std::span<const Point> points) const;

    Eigen::MatrixXd weights_;  // M x (1 + d)
    Eigen::VectorXd biases_;
    int d_ = 1;
    ActivationKind activation_{};
    InputMap map_{};
    Eigen::Matrix<double, Eigen::Dynamic, 3> grad_;  // dz/dp per feature
    Eigen::VectorXd offset_;                         // z at p = 0
    bool has_closure_ = false;
    Point lo_{}, hi_{};
    double tol_ = 0.0;
};

/// Draws weights and biases i.i.d. from U(-r, r) with a counter-based generator keyed by (seed, key).
RandomFeatureSpace init_space(std::uint64_t key, int M, int d, ActivationKind activation, double r, std::uint64_t seed,
                              InputMap map = {});

/// Highest supported derivative orders.
inline constexpr int kMaxTimeOrder = 1;
inline constexpr int kMaxSpaceOrder = 3;

struct BasisTableau {
    std::vector<Point> points;
    std::map<Deriv, Eigen::MatrixXd> derivs;  // each P x M

    [[nodiscard]] const Eigen::MatrixXd& values() const { return derivs.at(kValue); }
    [[nodiscard]] const Eigen::MatrixXd& at(Deriv d) const { return derivs.at(d); }
};

/// All partials with t-order <= max_t_order and total spatial order <= max_x_order.
BasisTableau eval_tableau(const RandomFeatureSpace& space, std::span<const Point> points, int max_t_order, int max_x_order);

/// k-th derivative of the activation profile at z, k = 0..4.
double activation_derivative(ActivationType type, double z, int k);

/// Feature space composed with a fixed linear map T (M x r): psi = phi T.
struct LocalBasis {
    RandomFeatureSpace space;
    Eigen::MatrixXd T;

    [[nodiscard]] int size() const { return static_cast<int>(T.cols()); }
    [[nodiscard]] Eigen::MatrixXd eval(std::span<const Point> points, Deriv deriv) const;
    [[nodiscard]] std::vector<Eigen::MatrixXd> eval(std::span<const Point> points, std::span<const Deriv> derivs) const;
};

LocalBasis identity_basis(RandomFeatureSpace space);

/// Truncated-SVD reparametrization. Rows sample every requested derivative at the given points with
/// weight sqrt(w), derivatives scaled by length_scale^order; singular directions below tol * s_max
/// are dropped and the rest rescaled to unit singular value. Throws if nothing survives.
LocalBasis compress(RandomFeatureSpace space, std::span<const Point> points, std::span<const double> weights,
                    std::span<const Deriv> derivs, const Point& length_scale, double tol);

}  // namespace lrnndg
