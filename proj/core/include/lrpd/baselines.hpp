#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lrpd/linalg.hpp"
#include "lrpd/model.hpp"

namespace lrpd {

// ---------------------------------------------------------------------------
// Majorization-minimization (proximal gradient on U, exact diagonal refit)
// ---------------------------------------------------------------------------

struct MmConfig {
    Index rank = 1;
    int max_iters = 30;
    /// Initial Lipschitz estimate; defaults to ||A||_2 at initialization.
    std::optional<double> initial_lipschitz;
    double backtrack_factor = 2.0;
    int max_backtracks = 60;

    void validate() const;
};

/// g(U) = ||B - U U^T||_F^2
double mm_objective(const SymMatrix& b, const Matrix& u);

/// grad g(U) = 4 (U (U^T U) - B U)
Matrix mm_gradient(const SymMatrix& b, const Matrix& u);

/// One accepted proximal-gradient step and its majorization certificate.
struct MmStep {
    int iter = 0;
    double lipschitz = 0.0;
    double g_before = 0.0;
    double g_after = 0.0;
    /// q(U_{t+1} | U_t) = g(U_t) + <grad, dU> + L/2 ||dU||_F^2
    double surrogate = 0.0;
};

struct MmResult : FitResult {
    std::vector<MmStep> steps;
};

/// Throws BacktrackingFailure when no L within max_backtracks certifies a step.
MmResult mm_fit(const SymMatrix& a, const MmConfig& cfg, const TraceOptions& opts = {});

// ---------------------------------------------------------------------------
// Gradient descent on the Gaussian negative log-likelihood
// ---------------------------------------------------------------------------

enum class GdInit { random, svd };

struct GdConfig {
    Index rank = 1;
    int max_iters = 500;
    double step = 1e-2;
    GdInit init = GdInit::svd;
    std::uint64_t seed = 0;
    /// Std. dev. of the random factor entries; defaults to 1/sqrt(n).
    std::optional<double> random_scale;

    void validate() const;
};

struct GdState {
    Matrix factor;
    Vector diag;
};

/// Random: U ~ N(0, scale^2), d = diag(S)/2. SVD: the naive decomposition.
GdState gd_initial_state(const SymMatrix& sigma, const GdConfig& cfg);

/// f(D, U) = log det M + tr(M^{-1} S), M = D + U U^T.
/// Throws std::domain_error if M is not positive definite.
double nll_objective(const SymMatrix& sigma, const Vector& d, const Matrix& u);

struct NllGradient {
    Matrix factor;  // 2 (M^-1 - M^-1 S M^-1) U
    Vector diag;    // diag(M^-1 - M^-1 S M^-1)
};

NllGradient nll_gradient(const SymMatrix& sigma, const Vector& d, const Matrix& u);

/// Fixed-step simultaneous updates of U and d. The trace objective column
/// holds the negative log-likelihood. Throws SolverDiverged with the failing
/// iteration when M loses positive definiteness.
FitResult gd_nll_fit(const SymMatrix& sigma, const GdConfig& cfg, const TraceOptions& opts = {});

}  // namespace lrpd
