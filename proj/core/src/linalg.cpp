#include "lrpd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "lrpd/errors.hpp"

namespace lrpd {

namespace {

Matrix averaged(const Matrix& x) { return 0.5 * (x + x.transpose()); }

void require_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(who) + ": matrix is " + std::to_string(m.rows()) +
                                    "x" + std::to_string(m.cols()) + ", expected square");
    }
    if (m.rows() < 1) {
        throw std::invalid_argument(std::string(who) + ": dimension must be at least 1");
    }
}

}  // namespace

SymMatrix::SymMatrix(Matrix entries, double rel_tol) {
    require_square(entries, "SymMatrix");
    if (!entries.allFinite()) {
        throw std::invalid_argument("SymMatrix: non-finite entry");
    }
    const double scale = entries.cwiseAbs().maxCoeff();
    const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (asym > rel_tol * scale) {
        throw std::invalid_argument("SymMatrix: asymmetry " + std::to_string(asym) +
                                    " exceeds tolerance relative to max entry " +
                                    std::to_string(scale));
    }
    m_ = averaged(entries);
}

SymMatrix SymMatrix::symmetrize(const Matrix& x) {
    require_square(x, "SymMatrix::symmetrize");
    return SymMatrix(averaged(x), Trusted{});
}

SymMatrix SymMatrix::zero(Index n) { return SymMatrix(Matrix::Zero(n, n)); }

SymMatrix SymMatrix::identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }

SymMatrix SymMatrix::diagonal(const Vector& d) {
    return SymMatrix(Matrix(d.asDiagonal()));
}

SymMatrix SymMatrix::principal(const std::vector<Index>& idx) const {
    const auto m = static_cast<Index>(idx.size());
    Matrix sub(m, m);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            sub(i, j) = m_(idx[i], idx[j]);
        }
    }
    return SymMatrix(std::move(sub), Trusted{});
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix(a.m_ + b.m_, SymMatrix::Trusted{});
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix(a.m_ - b.m_, SymMatrix::Trusted{});
}

SymMatrix operator*(double s, const SymMatrix& a) {
    return SymMatrix(s * a.m_, SymMatrix::Trusted{});
}

EigDecomp eig_sym(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.dense());
    if (solver.info() != Eigen::Success) {
        const Matrix& v = solver.eigenvectors();
        const double residual =
            (a.dense() - v * solver.eigenvalues().asDiagonal() * v.transpose()).norm();
        throw EigensolverError("eig_sym: symmetric eigensolver did not converge", residual);
    }
    // Eigen returns ascending order.
    return EigDecomp{solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

Vector eigenvalues_sym(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.dense(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw EigensolverError("eigenvalues_sym: symmetric eigensolver did not converge",
                               std::nan(""));
    }
    return solver.eigenvalues().reverse();
}

SymMatrix truncate_top_k(const EigDecomp& e, Index k) {
    if (k < 0 || k > e.size()) {
        throw std::invalid_argument("truncate_top_k: k=" + std::to_string(k) +
                                    " outside [0, " + std::to_string(e.size()) + "]");
    }
    const auto vk = e.vectors.leftCols(k);
    return SymMatrix::symmetrize(vk * e.values.head(k).asDiagonal() * vk.transpose());
}

Matrix top_k_factor(const EigDecomp& e, Index k) {
    if (k < 0 || k > e.size()) {
        throw std::invalid_argument("top_k_factor: k=" + std::to_string(k) + " outside [0, " +
                                    std::to_string(e.size()) + "]");
    }
    const Vector scale = e.values.head(k).cwiseMax(0.0).cwiseSqrt();
    return e.vectors.leftCols(k) * scale.asDiagonal();
}

SymMatrix psd_project(const SymMatrix& a) {
    const EigDecomp e = eig_sym(a);
    const Vector clamped = e.values.cwiseMax(0.0);
    return SymMatrix::symmetrize(e.vectors * clamped.asDiagonal() * e.vectors.transpose());
}

Norms norms(const SymMatrix& a) {
    const Vector lambda = eigenvalues_sym(a);
    Norms out;
    out.frobenius = a.dense().norm();
    out.spectral = lambda.cwiseAbs().maxCoeff();
    out.nuclear = lambda.cwiseAbs().sum();
    out.max_abs_entry = a.dense().cwiseAbs().maxCoeff();
    return out;
}

double spectral_norm(const SymMatrix& a) { return eigenvalues_sym(a).cwiseAbs().maxCoeff(); }

MatvecOracle::MatvecOracle(Index n, ApplyFn apply) : n_(n), apply_(std::move(apply)) {
    if (n < 1) {
        throw std::invalid_argument("MatvecOracle: dimension must be at least 1");
    }
    if (!apply_) {
        throw std::invalid_argument("MatvecOracle: empty apply function");
    }
}

Matrix MatvecOracle::apply(const Matrix& block) {
    if (block.rows() != n_) {
        throw std::invalid_argument("MatvecOracle::apply: block has " +
                                    std::to_string(block.rows()) + " rows, expected " +
                                    std::to_string(n_));
    }
    queries_ += static_cast<std::size_t>(block.cols());
    return apply_(block);
}

Vector MatvecOracle::apply(const Vector& x) {
    Matrix block = x;
    return apply(block).col(0);
}

MatvecOracle oracle_from_dense(const SymMatrix& a) {
    auto shared = std::make_shared<const Matrix>(a.dense());
    return MatvecOracle(a.size(), [shared](const Matrix& x) -> Matrix { return (*shared) * x; });
}

}  // namespace lrpd
