#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrpd/linalg.hpp"
#include "lrpd/model.hpp"

namespace lrpd {

enum class SynthModel { exact_lrpd, decaying_spectrum };

struct SynthSpec {
    Index n = 150;
    Index k_true = 5;
    SynthModel model = SynthModel::exact_lrpd;
    double diag_lo = 0.0;
    double diag_hi = 10.0;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthInstance {
    /// Observed matrix (noisy when snr_db is set).
    SymMatrix a;
    /// Noiseless L* + diag(d*).
    SymMatrix a0;
    Vector d_star;
    SymMatrix l_star;
    /// Generating factor of L* (n x k_true).
    Matrix factor;
    /// Scale alpha applied to the symmetric noise matrix (0 without noise).
    double noise_scale = 0.0;
};

/// A = G G^T + diag(d), G iid standard normal, d_i ~ U[lo, hi].
SynthInstance gen_exact_lrpd(const SynthSpec& spec);

/// L* = (U0 diag(s))(U0 diag(s))^T with unit-norm Gaussian columns U0 and
/// weights s linearly spaced from 3 down to 1; d* ~ U[lo, hi]; optional
/// symmetric Gaussian noise scaled to the requested SNR in dB.
SynthInstance gen_decaying_spectrum(const SynthSpec& spec);

SynthInstance generate(const SynthSpec& spec);

/// 10 log10(||A0||_F^2 / ||A - A0||_F^2)
double realized_snr_db(const SymMatrix& a, const SymMatrix& a0);

struct ReturnsMatrix {
    Matrix returns;  // T_obs x n
    std::vector<std::string> labels;
};

/// Header row of tickers, then one row of decimal returns per day. Rejects
/// empty, NaN or non-numeric cells with row/column diagnostics.
ReturnsMatrix read_returns_csv(const std::string& path);
ReturnsMatrix parse_returns_csv(const std::string& text);

/// Column-demeaned unbiased sample covariance X^T X / (T - 1).
SymMatrix covariance_from_returns(const ReturnsMatrix& r);

/// Rows of the correlation matrix A_ij / sqrt(A_ii A_jj); zero-variance
/// coordinates get a unit row.
Matrix correlation_features(const SymMatrix& a);

struct KmeansResult {
    std::vector<Index> labels;
    Matrix centroids;  // m x dim
    /// Within-cluster sum of squares after seeding and after each Lloyd step.
    std::vector<double> objective_history;
    int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding on the rows of `points`. Empty
/// clusters are re-seeded with the point farthest from its centroid.
KmeansResult kmeans(const Matrix& points, Index m, std::uint64_t seed, int max_iters = 100);

/// k-means on correlation profiles, returned as a block partition.
BlockPartition kmeans_partition(const SymMatrix& a, Index m, std::uint64_t seed);

/// Eigenvalues, descending.
Vector spectrum_report(const SymMatrix& a);

}  // namespace lrpd
