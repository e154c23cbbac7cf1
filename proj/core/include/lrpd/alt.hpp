#pragma once

#include <cstddef>

#include "lrpd/linalg.hpp"
#include "lrpd/model.hpp"

namespace lrpd {

struct AltConfig {
    Index rank = 1;
    int max_iters = 20;
    /// Stop once rel_fro_error <= tol; 0 runs all iterations.
    double tol = 0.0;
    /// Scale eigenvectors by sqrt(max(lambda, 0)). When false, a negative
    /// retained eigenvalue is an error since U U^T cannot represent it.
    bool clamp_negative_eigs = true;
    /// d <- max(d, 0) after the diagonal refit (PSD projection per block for
    /// the block variant).
    bool clamp_diag_nonneg = true;

    void validate() const;
};

/// State after one low-rank step followed by one diagonal refit.
struct AltStep {
    Matrix factor;
    Vector diag;
    std::size_t clamped = 0;
};

/// One iteration from the diagonal `d`: U <- top-k factor of A - diag(d),
/// d <- diag(A - U U^T).
AltStep alt_step(const SymMatrix& a, const Vector& d, const AltConfig& cfg);

/// Alternating low-rank then diagonal, starting from D = 0.
FitResult alt_fit(const SymMatrix& a, const AltConfig& cfg, const TraceOptions& opts = {});

/// Same loop with the diagonal refit replaced by a PSD projection of each
/// principal block of A - U U^T.
FitResult alt_fit_block(const SymMatrix& a, const BlockPartition& partition,
                        const AltConfig& cfg);

struct ContractionCheck {
    double delta = 0.0;       // lambda_k(L*)
    double norm_dstar = 0.0;  // max_i |d*_i|
    bool satisfied = false;   // delta > 0 && norm_dstar < delta / 2
};

/// Sufficient condition under which every alternating step is monotone.
ContractionCheck contraction_precheck(const SymMatrix& l_star, const Vector& d_star, Index k);

}  // namespace lrpd
