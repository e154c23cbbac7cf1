#include "lrpd/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lrpd/alt.hpp"

namespace lrpd {

Projector::Projector(Matrix p, Index rank) : p_(std::move(p)), rank_(rank) {
    p_ = 0.5 * (p_ + p_.transpose()).eval();
    q_ = Matrix::Identity(p_.rows(), p_.cols()) - p_;
}

Projector Projector::from_basis(const Matrix& basis) {
    if (basis.rows() < 1) throw std::invalid_argument("Projector: empty basis");
    if (basis.cols() == 0) return Projector(Matrix::Zero(basis.rows(), basis.rows()), 0);
    Eigen::ColPivHouseholderQR<Matrix> qr(basis);
    const Index r = qr.rank();
    const Matrix q = Matrix(qr.householderQ()).leftCols(r);
    return Projector(q * q.transpose(), r);
}

Projector Projector::top_k(const SymMatrix& a, Index k) {
    if (k < 0 || k > a.size()) throw std::invalid_argument("Projector::top_k: rank outside [0, n]");
    const EigDecomp e = eig_sym(a);
    const Matrix v = e.vectors.leftCols(k);
    return Projector(v * v.transpose(), k);
}

Projector Projector::coordinate(Index n, const std::vector<Index>& support) {
    if (n < 1) throw std::invalid_argument("Projector::coordinate: dimension must be >= 1");
    Matrix p = Matrix::Zero(n, n);
    for (Index i : support) {
        if (i < 0 || i >= n) throw std::invalid_argument("Projector::coordinate: index out of range");
        if (p(i, i) != 0.0) throw std::invalid_argument("Projector::coordinate: repeated index");
        p(i, i) = 1.0;
    }
    return Projector(std::move(p), static_cast<Index>(support.size()));
}

std::vector<double> contraction_recursion(double delta, double norm_d0, int iters) {
    if (iters < 0) throw std::invalid_argument("contraction_recursion: iters must be >= 0");
    if (!(norm_d0 >= 0.0)) throw std::invalid_argument("contraction_recursion: norm must be >= 0");
    const double margin = delta - 2.0 * norm_d0;
    if (!(margin > 1.0)) {
        std::string msg = "contraction_recursion: need delta - 2 ||D0|| > 1, got " + std::to_string(margin);
        if (margin > 0.0) {
            msg += "; rescale A by alpha > " + std::to_string(1.0 / margin);
        }
        throw std::domain_error(msg);
    }
    std::vector<double> b{norm_d0};
    for (int t = 1; t <= iters; ++t) {
        b.push_back(b.back() / (delta - 2.0 * b.back()));
    }
    return b;
}

double contraction_rescale(double delta, double norm_d0, double margin) {
    if (!(margin > 1.0)) throw std::invalid_argument("contraction_rescale: margin must exceed 1");
    const double gap = delta - 2.0 * norm_d0;
    if (!(gap > 0.0)) {
        throw std::domain_error("contraction_rescale: delta - 2 ||D0|| is not positive, no scaling helps");
    }
    return margin / gap;
}

Matrix lambda_op(const Projector& p, const Matrix& e) {
    if (e.rows() != p.size() || e.cols() != p.size()) {
        throw std::invalid_argument("lambda_op: dimension mismatch");
    }
    return e - p.q() * e * p.q();
}

Matrix jacobian_d_matrix(const Projector& p) {
    return Matrix::Identity(p.size(), p.size()) - p.q().cwiseAbs2();
}

JacobianNorm jacobian_d_norm(const Projector& p) {
    const Matrix j = jacobian_d_matrix(p);
    const Matrix& q = p.q();
    JacobianNorm out;
    out.norm_inf = j.cwiseAbs().rowwise().sum().maxCoeff();
    out.row_bound = (1.0 - q.diagonal().array().square()).maxCoeff();
    const Vector ev = eigenvalues_sym(SymMatrix::symmetrize(j));
    out.spectral_radius = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    Matrix off = q;
    off.diagonal().setZero();
    out.is_axis_aligned = off.cwiseAbs().maxCoeff() <= 1e-12;
    out.bound_agrees = std::abs(out.norm_inf - out.row_bound) <= 1e-12;
    return out;
}

namespace {

void check_pair(const SymMatrix& l_star, const Vector& delta, Index k, const char* who) {
    if (delta.size() != l_star.size()) {
        throw std::invalid_argument(std::string(who) + ": perturbation length does not match dimension");
    }
    if (k < 1 || k >= l_star.size()) {
        throw std::invalid_argument(std::string(who) + ": rank must lie in [1, n)");
    }
}

SymMatrix perturbed(const SymMatrix& l_star, const Vector& delta) {
    Matrix m = l_star.dense();
    m.diagonal() += delta;
    return SymMatrix::symmetrize(m);
}

}  // namespace

WeylGap weyl_gap(const SymMatrix& l_star, const Vector& delta, Index k) {
    check_pair(l_star, delta, k, "weyl_gap");
    const Vector base = eigenvalues_sym(l_star);
    const Vector pert = eigenvalues_sym(perturbed(l_star, delta));
    WeylGap g;
    g.gap_lower = base(k - 1) - 2.0 * delta.cwiseAbs().maxCoeff();
    g.gap_exact = pert(k - 1) - pert(k);
    return g;
}

DavisKahanCheck davis_kahan_check(const SymMatrix& l_star, const Vector& delta, Index k) {
    check_pair(l_star, delta, k, "davis_kahan_check");
    const Projector p0 = Projector::top_k(l_star, k);
    const Projector p1 = Projector::top_k(perturbed(l_star, delta), k);
    const double dn = delta.cwiseAbs().maxCoeff();
    const WeylGap g = weyl_gap(l_star, delta, k);
    const double inf = std::numeric_limits<double>::infinity();
    DavisKahanCheck c;
    c.projector_distance = spectral_norm(SymMatrix::symmetrize(p1.p() - p0.p()));
    c.bound_exact_gap = g.gap_exact > 0.0 ? dn / g.gap_exact : inf;
    const double weyl = g.gap_lower;
    c.bound_weyl = weyl > 0.0 ? dn / weyl : inf;
    return c;
}

FirstOrderCheck first_order_check(const SymMatrix& l_star, const Vector& d_star, Index k,
                                  const Vector& direction, const std::vector<double>& eps) {
    const Index n = l_star.size();
    if (d_star.size() != n || direction.size() != n) {
        throw std::invalid_argument("first_order_check: vector length does not match dimension");
    }
    if (eps.size() < 2) throw std::invalid_argument("first_order_check: need at least two step sizes");
    if (k < 1 || k > n) throw std::invalid_argument("first_order_check: rank outside [1, n]");

    const SymMatrix a = perturbed(l_star, d_star);
    const Vector predicted = jacobian_d_matrix(Projector::top_k(l_star, k)) * direction;
    AltConfig cfg;
    cfg.rank = k;
    cfg.clamp_diag_nonneg = false;

    FirstOrderCheck out;
    out.eps = eps;
    std::vector<Vector> slopes;
    for (double e : eps) {
        if (!(e > 0.0)) throw std::invalid_argument("first_order_check: step sizes must be positive");
        const Vector moved = alt_step(a, d_star + e * direction, cfg).diag - d_star;
        out.residuals.push_back((moved - e * predicted).cwiseAbs().maxCoeff());
        slopes.push_back(moved / e);
    }
    for (std::size_t i = 0; i + 1 < out.residuals.size(); ++i) {
        out.ratios.push_back(out.residuals[i] / out.residuals[i + 1]);
    }
    const std::size_t m = eps.size();
    const double ea = eps[m - 2];
    const double eb = eps[m - 1];
    if (ea == eb) throw std::invalid_argument("first_order_check: the two smallest step sizes coincide");
    const Vector extrapolated = (ea * slopes[m - 1] - eb * slopes[m - 2]) / (ea - eb);
    out.extrapolated_slope_error = (extrapolated - predicted).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace lrpd
