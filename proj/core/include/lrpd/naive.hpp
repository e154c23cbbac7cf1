#pragma once

#include "lrpd/linalg.hpp"
#include "lrpd/model.hpp"

namespace lrpd {

/// One-shot low-rank-then-diagonal decomposition of a PSD matrix.
struct NaiveResult {
    LrpdModel model;
    /// ||A - D_k - U_k U_k^T||_2
    double residual_spectral;
    /// lambda_{k+1}(A), zero when k == n.
    double tail_eigenvalue;
};

/// U_k = V_k Lambda_k^{1/2}, D_k = diag(A - U_k U_k^T) (not clamped).
/// Rejects A with min eigenvalue below -1e-8 * ||A||_2 and k outside [0, n].
NaiveResult naive_decompose(const SymMatrix& a, Index k);

struct DiagFirstResult {
    SymMatrix residual;
    double spectral;
    bool is_psd;
};

/// A - diag(A): subtracting the diagonal first, which generally leaves an
/// indefinite zero-diagonal residual.
DiagFirstResult diag_first_residual(const SymMatrix& a);

}  // namespace lrpd
