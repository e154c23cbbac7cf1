#include "lrpd/naive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lrpd {

NaiveResult naive_decompose(const SymMatrix& a, Index k) {
    const Index n = a.size();
    if (k < 0 || k > n) {
        throw std::invalid_argument("naive_decompose: rank " + std::to_string(k) +
                                    " outside [0, " + std::to_string(n) + "]");
    }
    const EigDecomp e = eig_sym(a);
    const double spec = std::max(std::abs(e.values(0)), std::abs(e.values(n - 1)));
    if (e.values(n - 1) < -1e-8 * spec) {
        throw std::domain_error("naive_decompose: input is not positive semidefinite (min eigenvalue " +
                                std::to_string(e.values(n - 1)) + ")");
    }
    Matrix u = top_k_factor(e, k);
    Vector d = a.diag() - u.rowwise().squaredNorm();

    Matrix r = a.dense() - u * u.transpose();
    r.diagonal() -= d;
    const double res = spectral_norm(SymMatrix::symmetrize(r));
    const double tail = k < n ? e.values(k) : 0.0;

    return NaiveResult{LrpdModel::diagonal(std::move(u), std::move(d), ModelSource::naive, false),
                       res, tail};
}

DiagFirstResult diag_first_residual(const SymMatrix& a) {
    Matrix r = a.dense();
    r.diagonal().setZero();
    SymMatrix res = SymMatrix::symmetrize(r);
    const Vector ev = eigenvalues_sym(res);
    const double spec = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    const bool psd = ev(ev.size() - 1) >= -1e-10;
    return DiagFirstResult{std::move(res), spec, psd};
}

}  // namespace lrpd
