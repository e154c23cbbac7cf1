#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lrpd {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense symmetric n x n matrix, n >= 1.
///
/// The general constructor rejects input whose largest asymmetry exceeds
/// `rel_tol * max|a_ij|`; accepted input is then averaged with its transpose
/// so that a(i, j) == a(j, i) holds bit-for-bit. Use `symmetrize` to accept an
/// arbitrary square matrix deliberately.
class SymMatrix {
public:
    static constexpr double kDefaultSymmetryTol = 1e-12;

    explicit SymMatrix(Matrix entries, double rel_tol = kDefaultSymmetryTol);

    static SymMatrix symmetrize(const Matrix& x);
    static SymMatrix zero(Index n);
    static SymMatrix identity(Index n);
    static SymMatrix diagonal(const Vector& d);

    Index size() const noexcept { return m_.rows(); }
    const Matrix& dense() const noexcept { return m_; }
    double operator()(Index i, Index j) const { return m_(i, j); }
    Vector diag() const { return m_.diagonal(); }

    /// Principal submatrix on the given (sorted or unsorted) index set.
    SymMatrix principal(const std::vector<Index>& idx) const;

    friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
    friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
    friend SymMatrix operator*(double s, const SymMatrix& a);

private:
    struct Trusted {};
    SymMatrix(Matrix m, Trusted) : m_(std::move(m)) {}

    Matrix m_;
};

/// Eigenpairs with values sorted non-increasing; column i of `vectors`
/// belongs to values[i].
struct EigDecomp {
    Vector values;
    Matrix vectors;

    Index size() const noexcept { return values.size(); }
};

/// Throws EigensolverError if the solver does not converge.
EigDecomp eig_sym(const SymMatrix& a);

/// Eigenvalues only, descending.
Vector eigenvalues_sym(const SymMatrix& a);

/// sum_{i<k} values[i] v_i v_i^T, eigenvalues used as stored.
SymMatrix truncate_top_k(const EigDecomp& e, Index k);

/// V_k diag(sqrt(max(values_k, 0))): the PSD factor of the top-k part.
Matrix top_k_factor(const EigDecomp& e, Index k);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clamped to 0).
SymMatrix psd_project(const SymMatrix& a);

struct Norms {
    double frobenius = 0.0;
    double spectral = 0.0;
    double nuclear = 0.0;
    double max_abs_entry = 0.0;
};

Norms norms(const SymMatrix& a);

double spectral_norm(const SymMatrix& a);

/// Symmetric operator available only through products x -> A x.
///
/// Every column pushed through `apply` counts as one query. Instances are not
/// thread-safe; the counter is the only mutable state.
class MatvecOracle {
public:
    using ApplyFn = std::function<Matrix(const Matrix&)>;

    MatvecOracle(Index n, ApplyFn apply);

    Index size() const noexcept { return n_; }
    Matrix apply(const Matrix& block);
    Vector apply(const Vector& x);
    std::size_t query_count() const noexcept { return queries_; }

private:
    Index n_;
    ApplyFn apply_;
    std::size_t queries_ = 0;
};

MatvecOracle oracle_from_dense(const SymMatrix& a);

}  // namespace lrpd
