#pragma once

#include <vector>

#include "lrpd/linalg.hpp"

namespace lrpd {

/// Orthogonal projector P onto a k-dimensional subspace, with Q = I - P.
class Projector {
public:
    /// Orthonormalizes the columns of `basis` (thin QR) first.
    static Projector from_basis(const Matrix& basis);
    /// Top-k eigenspace of `a`.
    static Projector top_k(const SymMatrix& a, Index k);
    /// P = diag(1_S).
    static Projector coordinate(Index n, const std::vector<Index>& support);

    const Matrix& p() const noexcept { return p_; }
    const Matrix& q() const noexcept { return q_; }
    Index size() const noexcept { return p_.rows(); }
    Index rank() const noexcept { return rank_; }

private:
    Projector(Matrix p, Index rank);

    Matrix p_;
    Matrix q_;
    Index rank_;
};

/// b_0 = norm_d0, b_t = b_{t-1} / (delta - 2 b_{t-1}), t = 1..iters.
/// Requires delta - 2 norm_d0 > 1; otherwise throws std::domain_error
/// suggesting a rescaling of A by alpha > 1 / (delta - 2 norm_d0).
std::vector<double> contraction_recursion(double delta, double norm_d0, int iters);

/// Smallest scale alpha with alpha (delta - 2 norm_d0) > 1, times `margin`.
double contraction_rescale(double delta, double norm_d0, double margin = 2.0);

/// Lambda(E) = E - Q E Q.
Matrix lambda_op(const Projector& p, const Matrix& e);

/// Matrix of e -> diag(Lambda(diag(e))): entries delta_ij - Q_ij^2.
Matrix jacobian_d_matrix(const Projector& p);

struct JacobianNorm {
    /// Exact infinity-norm (max absolute row sum) of the Jacobian matrix.
    double norm_inf = 0.0;
    /// max_i (1 - Q_ii^2), the row bound obtained by the triangle-inequality chain.
    double row_bound = 0.0;
    /// Largest eigenvalue magnitude of the (symmetric) Jacobian.
    double spectral_radius = 0.0;
    bool is_axis_aligned = false;
    /// |norm_inf - row_bound| <= 1e-12
    bool bound_agrees = false;
};

JacobianNorm jacobian_d_norm(const Projector& p);

struct WeylGap {
    double gap_lower = 0.0;  // lambda_k(L*) - 2 max|Delta_i|
    double gap_exact = 0.0;  // lambda_k(L* + Delta) - lambda_{k+1}(L* + Delta)
};

WeylGap weyl_gap(const SymMatrix& l_star, const Vector& delta, Index k);

struct DavisKahanCheck {
    /// ||P(L* + Delta) - P(L*)||_2 for the top-k spectral projectors.
    double projector_distance = 0.0;
    /// ||Delta||_2 / (exact gap of L* + Delta)
    double bound_exact_gap = 0.0;
    /// ||Delta||_2 / (lambda_k(L*) - 2 ||Delta||_2), infinite if not positive.
    double bound_weyl = 0.0;
};

DavisKahanCheck davis_kahan_check(const SymMatrix& l_star, const Vector& delta, Index k);

/// First-order behaviour of one unclamped alternating step near the exact
/// fixed point (D*, L*): for each eps, the diagonal error after one step
/// started at D* + eps diag(direction), minus its linear prediction
/// eps * J direction, in the infinity norm.
struct FirstOrderCheck {
    std::vector<double> eps;
    std::vector<double> residuals;
    /// residuals[i] / residuals[i + 1]
    std::vector<double> ratios;
    /// Richardson-extrapolated linear coefficient from the two smallest eps.
    double extrapolated_slope_error = 0.0;
};

FirstOrderCheck first_order_check(const SymMatrix& l_star, const Vector& d_star, Index k,
                                  const Vector& direction, const std::vector<double>& eps);

}  // namespace lrpd
