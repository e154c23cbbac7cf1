#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "lrpd/linalg.hpp"
#include "lrpd/model.hpp"
#include "lrpd/rng.hpp"

namespace lrpd {

enum class NystromVariant {
    /// Y C_r^+ Y^T with C = Omega^T Y, as used inside the stochastic solver.
    simple,
    /// Shifted Cholesky form with a small multiple of the identity added to the core.
    shifted,
};

struct NystromOptions {
    double rank_tol = 1e-12;
    double ridge = 1e-16;
    NystromVariant variant = NystromVariant::simple;
};

struct NystromResult {
    Matrix factor;  // n x r', r' <= r
    Index effective_rank = 0;
    /// lambda_r <= rank_tol * lambda_1 in the sketch core.
    bool rank_collapsed = false;
};

/// Rank-r Nystrom approximation U U^T from s Gaussian test vectors
/// (s oracle queries). r == 0 returns an empty factor without querying.
NystromResult nystrom_fixed_rank(MatvecOracle& oracle, Index r, Index s, Rng& rng,
                                 const NystromOptions& opts = {});

/// Hutchinson diagonal estimate from s Rademacher probes (s queries).
Vector hutchinson_diag(MatvecOracle& oracle, Index s, Rng& rng);

/// Fractions of the Diag++ budget spent on the range sketch and on the
/// projection products; the remainder goes to Hutchinson probes.
struct DiagppSplit {
    double sketch = 1.0 / 3.0;
    double project = 1.0 / 3.0;
};

/// Diag++: exact diagonal of the part of A captured by a sketched range Q,
/// plus Hutchinson on the deflated operator (I - QQ^T) A (I - QQ^T).
/// Uses at most s queries; s >= 3.
Vector diagpp(MatvecOracle& oracle, Index s, Rng& rng, const DiagppSplit& split = {});

enum class DiagMode { exact, diagpp };

struct SketchConfig {
    Index rank = 1;
    /// Matrix-vector products per iteration.
    Index budget = 30;
    std::uint64_t seed = 0;
    double rank_tol = 1e-12;
    double ridge = 1e-16;
    NystromVariant variant = NystromVariant::simple;
    DiagppSplit split{};

    /// floor(2b/3)
    Index sketch_allocation() const noexcept { return (2 * budget) / 3; }
    /// max(floor(2b/3), r + 1)
    Index sketch_size() const noexcept;
    void validate() const;
};

struct StochasticInputs {
    /// Exact diag(A); required for DiagMode::exact.
    std::optional<Vector> exact_diag;
    /// Dense A, used for the b <= r fallback and for trace metrics. Without
    /// it trace errors and objectives are NaN.
    const SymMatrix* reference = nullptr;
    std::optional<Vector> d_star;
};

/// Matvec-budgeted alternating solver. Starts from D = 0; each iteration
/// sketches the residual A - D, refits d <- max(diag(A) - diag(U U^T), 0),
/// and stops early (flagging trace.early_rank_collapse) when the sketch core
/// loses rank.
FitResult stochastic_alt_fit(MatvecOracle& oracle, const SketchConfig& cfg, int iters,
                             DiagMode mode, const StochasticInputs& in = {});

struct BoundReport {
    /// Low-rank term with the spectral reading of ||.||_inf.
    double e_lr = 0.0;
    /// Low-rank term with the max-entry reading of ||.||_inf.
    double e_lr_max_entry = 0.0;
    double e_diag = 0.0;
    double tail_spectral = 0.0;
    double tail_nuclear = 0.0;
    Index k_suggested = 0;
    Index s_suggested = 0;
    int alpha = 1;
    double epsilon = 0.0;
    double delta = 0.0;
    double c = 1.0;
    bool sketch_sufficient = false;   // k >= k_suggested
    bool queries_sufficient = false;  // s >= s_suggested
};

/// Single-iterate error budget for the randomized solver on residual R with
/// target rank r, sketch size k and s diagonal queries. Requires k > r + alpha.
BoundReport bound_report(const SymMatrix& r_mat, Index r, Index k, Index s, double epsilon,
                         double delta, double c = 1.0, int alpha = 1);

}  // namespace lrpd
