#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lrpd/linalg.hpp"

namespace lrpd {

/// Disjoint, covering, nonempty index blocks over {0, ..., n-1}.
///
/// Stored canonically: each block sorted ascending, blocks ordered by their
/// smallest index, so two partitions that differ only by labels compare equal.
class BlockPartition {
public:
    BlockPartition(std::vector<std::vector<Index>> blocks, Index n);

    static BlockPartition singletons(Index n);
    static BlockPartition whole(Index n);
    /// m contiguous blocks of near-equal size.
    static BlockPartition contiguous(Index n, Index m);
    /// Cluster labels in [0, m) -> blocks; unused labels are dropped.
    static BlockPartition from_labels(const std::vector<Index>& labels);

    Index dimension() const noexcept { return n_; }
    std::size_t count() const noexcept { return blocks_.size(); }
    const std::vector<Index>& block(std::size_t i) const { return blocks_.at(i); }
    const std::vector<std::vector<Index>>& blocks() const noexcept { return blocks_; }

    /// {"n": n, "blocks": [[...], ...]}
    std::string to_json() const;
    static BlockPartition from_json(const std::string& text);

    friend bool operator==(const BlockPartition&, const BlockPartition&) = default;

private:
    std::vector<std::vector<Index>> blocks_;
    Index n_;
};

enum class ModelSource { naive, alternating, alternating_block, stochastic, mm, gd };

const char* to_string(ModelSource s);

/// M = D + U U^T with D diagonal, or block-diagonal when a partition is set.
class LrpdModel {
public:
    /// `diag_clamped` records whether the producing solver forced d >= 0.
    static LrpdModel diagonal(Matrix factor, Vector diag, ModelSource source,
                              bool diag_clamped);
    static LrpdModel block_diagonal(Matrix factor, BlockPartition partition,
                                    std::vector<Matrix> diag_blocks, ModelSource source);

    Index size() const noexcept { return factor_.rows(); }
    Index rank() const noexcept { return factor_.cols(); }
    const Matrix& factor() const noexcept { return factor_; }
    /// Diagonal entries of the correction (also defined for block models).
    const Vector& diag() const noexcept { return diag_; }
    const std::optional<BlockPartition>& partition() const noexcept { return partition_; }
    const std::vector<Matrix>& diag_blocks() const noexcept { return blocks_; }
    ModelSource source() const noexcept { return source_; }
    bool diag_clamped() const noexcept { return clamped_; }

    /// The diagonal or block-diagonal correction as a dense matrix.
    SymMatrix correction() const;

private:
    LrpdModel() = default;

    Matrix factor_;
    Vector diag_;
    std::optional<BlockPartition> partition_;
    std::vector<Matrix> blocks_;
    ModelSource source_ = ModelSource::naive;
    bool clamped_ = false;
};

SymMatrix reconstruct(const LrpdModel& m);

/// E(D, U) = ||A - D - U U^T||_F^2.
double objective(const LrpdModel& m, const SymMatrix& a);

/// ||A - M||_F / ||A||_F. Throws std::invalid_argument for A == 0.
double rel_fro_error(const LrpdModel& m, const SymMatrix& a);

/// max_i |d_i - d*_i|, the operator norm of a diagonal error.
double diag_sup_error(const LrpdModel& m, const Vector& d_star);

struct TraceRecord {
    int iter = 0;
    double rel_fro_error = 0.0;
    std::optional<double> diag_error_sup;
    std::size_t matvec_queries = 0;
    double objective = 0.0;
};

/// Per-iteration solver history. `iter` must strictly increase and
/// `matvec_queries` must not decrease.
class ConvergenceTrace {
public:
    static constexpr const char* kCsvHeader =
        "iter,rel_fro_error,diag_error_sup,matvec_queries,objective";

    void append(const TraceRecord& r);

    const std::vector<TraceRecord>& records() const noexcept { return records_; }
    bool empty() const noexcept { return records_.empty(); }
    std::size_t size() const noexcept { return records_.size(); }
    const TraceRecord& back() const { return records_.back(); }

    /// Set when a randomized solver stopped because its sketch lost rank.
    bool early_rank_collapse = false;

    std::string to_csv() const;
    std::string to_json() const;

private:
    std::vector<TraceRecord> records_;
};

/// Optional ground truth carried into traces.
struct TraceOptions {
    std::optional<Vector> d_star;
};

struct FitResult {
    LrpdModel model;
    ConvergenceTrace trace;
    /// Diagonal entries forced to zero by clamping, summed over iterations.
    std::size_t clamp_events = 0;
};

/// Metrics of `m` against `a` packaged as one trace record.
TraceRecord measure(int iter, const LrpdModel& m, const SymMatrix& a,
                    const TraceOptions& opts, std::size_t matvec_queries);

}  // namespace lrpd
