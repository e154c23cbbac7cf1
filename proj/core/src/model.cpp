#include "lrpd/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lrpd/errors.hpp"
#include "lrpd/io.hpp"

namespace lrpd {

BlockPartition::BlockPartition(std::vector<std::vector<Index>> blocks, Index n) : n_(n) {
    if (n < 1) {
        throw std::invalid_argument("BlockPartition: dimension must be at least 1");
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (auto& b : blocks) {
        if (b.empty()) {
            throw std::invalid_argument("BlockPartition: empty block");
        }
        std::sort(b.begin(), b.end());
        for (Index i : b) {
            if (i < 0 || i >= n) {
                throw std::invalid_argument("BlockPartition: index " + std::to_string(i) +
                                            " outside [0, " + std::to_string(n) + ")");
            }
            if (seen[static_cast<std::size_t>(i)]++) {
                throw std::invalid_argument("BlockPartition: index " + std::to_string(i) +
                                            " appears in more than one block");
            }
        }
    }
    for (Index i = 0; i < n; ++i) {
        if (!seen[static_cast<std::size_t>(i)]) {
            throw std::invalid_argument("BlockPartition: index " + std::to_string(i) +
                                        " is not covered");
        }
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    blocks_ = std::move(blocks);
}

BlockPartition BlockPartition::singletons(Index n) {
    std::vector<std::vector<Index>> blocks;
    for (Index i = 0; i < n; ++i) blocks.push_back({i});
    return BlockPartition(std::move(blocks), n);
}

BlockPartition BlockPartition::whole(Index n) {
    std::vector<Index> all(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    return BlockPartition({std::move(all)}, n);
}

BlockPartition BlockPartition::contiguous(Index n, Index m) {
    if (m < 1 || m > n) {
        throw std::invalid_argument("BlockPartition::contiguous: need 1 <= m <= n");
    }
    std::vector<std::vector<Index>> blocks(static_cast<std::size_t>(m));
    for (Index i = 0; i < n; ++i) {
        blocks[static_cast<std::size_t>(i * m / n)].push_back(i);
    }
    return BlockPartition(std::move(blocks), n);
}

BlockPartition BlockPartition::from_labels(const std::vector<Index>& labels) {
    if (labels.empty()) {
        throw std::invalid_argument("BlockPartition::from_labels: no labels");
    }
    const Index m = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<std::vector<Index>> blocks(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) {
            throw std::invalid_argument("BlockPartition::from_labels: negative label");
        }
        blocks[static_cast<std::size_t>(labels[i])].push_back(static_cast<Index>(i));
    }
    std::erase_if(blocks, [](const auto& b) { return b.empty(); });
    return BlockPartition(std::move(blocks), static_cast<Index>(labels.size()));
}

std::string BlockPartition::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["blocks"] = blocks_;
    return j.dump();
}

BlockPartition BlockPartition::from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        auto blocks = j.at("blocks").get<std::vector<std::vector<Index>>>();
        Index n = 0;
        if (j.contains("n")) {
            n = j.at("n").get<Index>();
        } else {
            for (const auto& b : blocks) n += static_cast<Index>(b.size());
        }
        return BlockPartition(std::move(blocks), n);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("partition json: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("partition json: ") + e.what());
    }
}

const char* to_string(ModelSource s) {
    switch (s) {
        case ModelSource::naive: return "naive";
        case ModelSource::alternating: return "alt";
        case ModelSource::alternating_block: return "alt-block";
        case ModelSource::stochastic: return "stochastic";
        case ModelSource::mm: return "mm";
        case ModelSource::gd: return "gd";
    }
    return "unknown";
}

LrpdModel LrpdModel::diagonal(Matrix factor, Vector diag, ModelSource source, bool diag_clamped) {
    if (factor.rows() != diag.size()) {
        throw std::invalid_argument("LrpdModel: factor has " + std::to_string(factor.rows()) +
                                    " rows but diagonal has length " +
                                    std::to_string(diag.size()));
    }
    LrpdModel m;
    m.factor_ = std::move(factor);
    m.diag_ = std::move(diag);
    m.source_ = source;
    m.clamped_ = diag_clamped;
    return m;
}

LrpdModel LrpdModel::block_diagonal(Matrix factor, BlockPartition partition,
                                    std::vector<Matrix> diag_blocks, ModelSource source) {
    if (factor.rows() != partition.dimension()) {
        throw std::invalid_argument("LrpdModel: factor rows do not match partition dimension");
    }
    if (diag_blocks.size() != partition.count()) {
        throw std::invalid_argument("LrpdModel: one dense block per partition block required");
    }
    LrpdModel m;
    m.diag_ = Vector::Zero(partition.dimension());
    for (std::size_t b = 0; b < partition.count(); ++b) {
        const auto& idx = partition.block(b);
        const auto sz = static_cast<Index>(idx.size());
        if (diag_blocks[b].rows() != sz || diag_blocks[b].cols() != sz) {
            throw std::invalid_argument("LrpdModel: block " + std::to_string(b) +
                                        " has wrong shape");
        }
        for (Index i = 0; i < sz; ++i) m.diag_(idx[static_cast<std::size_t>(i)]) = diag_blocks[b](i, i);
    }
    m.factor_ = std::move(factor);
    m.partition_ = std::move(partition);
    m.blocks_ = std::move(diag_blocks);
    m.source_ = source;
    m.clamped_ = true;
    return m;
}

SymMatrix LrpdModel::correction() const {
    if (!partition_) {
        return SymMatrix::diagonal(diag_);
    }
    Matrix d = Matrix::Zero(size(), size());
    for (std::size_t b = 0; b < partition_->count(); ++b) {
        const auto& idx = partition_->block(b);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t j = 0; j < idx.size(); ++j) {
                d(idx[i], idx[j]) = blocks_[b](static_cast<Index>(i), static_cast<Index>(j));
            }
        }
    }
    return SymMatrix::symmetrize(d);
}

SymMatrix reconstruct(const LrpdModel& m) {
    Matrix out = m.factor() * m.factor().transpose();
    if (m.partition()) {
        out += m.correction().dense();
    } else {
        out.diagonal() += m.diag();
    }
    return SymMatrix::symmetrize(out);
}

double objective(const LrpdModel& m, const SymMatrix& a) {
    if (a.size() != m.size()) {
        throw std::invalid_argument("objective: dimension mismatch");
    }
    return (a.dense() - reconstruct(m).dense()).squaredNorm();
}

double rel_fro_error(const LrpdModel& m, const SymMatrix& a) {
    const double denom = a.dense().norm();
    if (denom == 0.0) {
        throw std::invalid_argument("rel_fro_error: reference matrix is zero");
    }
    return std::sqrt(objective(m, a)) / denom;
}

double diag_sup_error(const LrpdModel& m, const Vector& d_star) {
    if (d_star.size() != m.size()) {
        throw std::invalid_argument("diag_sup_error: length mismatch");
    }
    if (m.size() == 0) return 0.0;
    return (m.diag() - d_star).cwiseAbs().maxCoeff();
}

void ConvergenceTrace::append(const TraceRecord& r) {
    if (!records_.empty()) {
        if (r.iter <= records_.back().iter) {
            throw std::logic_error("ConvergenceTrace: iteration numbers must strictly increase");
        }
        if (r.matvec_queries < records_.back().matvec_queries) {
            throw std::logic_error("ConvergenceTrace: query count decreased");
        }
    }
    records_.push_back(r);
}

std::string ConvergenceTrace::to_csv() const {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : records_) {
        out += std::to_string(r.iter);
        out += ',';
        out += format_double(r.rel_fro_error);
        out += ',';
        if (r.diag_error_sup) out += format_double(*r.diag_error_sup);
        out += ',';
        out += std::to_string(r.matvec_queries);
        out += ',';
        out += format_double(r.objective);
        out += '\n';
    }
    return out;
}

std::string ConvergenceTrace::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records_) {
        nlohmann::json j;
        j["iter"] = r.iter;
        j["rel_fro_error"] = r.rel_fro_error;
        j["diag_error_sup"] = r.diag_error_sup ? nlohmann::json(*r.diag_error_sup) : nlohmann::json();
        j["matvec_queries"] = r.matvec_queries;
        j["objective"] = r.objective;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

TraceRecord measure(int iter, const LrpdModel& m, const SymMatrix& a, const TraceOptions& opts,
                    std::size_t matvec_queries) {
    TraceRecord r;
    r.iter = iter;
    r.objective = objective(m, a);
    const double denom = a.dense().norm();
    if (denom == 0.0) {
        throw std::invalid_argument("measure: reference matrix is zero");
    }
    r.rel_fro_error = std::sqrt(r.objective) / denom;
    if (opts.d_star && !m.partition()) {
        r.diag_error_sup = diag_sup_error(m, *opts.d_star);
    }
    r.matvec_queries = matvec_queries;
    return r;
}

}  // namespace lrpd
