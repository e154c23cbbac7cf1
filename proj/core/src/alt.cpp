#include "lrpd/alt.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrpd {

void AltConfig::validate() const {
    if (rank < 0) throw std::invalid_argument("AltConfig: rank must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("AltConfig: max_iters must be >= 1");
    if (!(tol >= 0.0) || !std::isfinite(tol)) {
        throw std::invalid_argument("AltConfig: tol must be finite and >= 0");
    }
}

namespace {

Matrix low_rank_step(const SymMatrix& r, const AltConfig& cfg) {
    if (cfg.rank > r.size()) {
        throw std::invalid_argument("alt: rank " + std::to_string(cfg.rank) +
                                    " exceeds dimension " + std::to_string(r.size()));
    }
    const EigDecomp e = eig_sym(r);
    if (!cfg.clamp_negative_eigs && cfg.rank > 0 && e.values(cfg.rank - 1) < 0.0) {
        throw std::domain_error("alt: retained eigenvalue " + std::to_string(e.values(cfg.rank - 1)) +
                                " is negative and clamping is disabled");
    }
    return top_k_factor(e, cfg.rank);
}

}  // namespace

AltStep alt_step(const SymMatrix& a, const Vector& d, const AltConfig& cfg) {
    if (d.size() != a.size()) {
        throw std::invalid_argument("alt_step: diagonal length does not match dimension");
    }
    Matrix r = a.dense();
    r.diagonal() -= d;
    AltStep out;
    out.factor = low_rank_step(SymMatrix::symmetrize(r), cfg);
    out.diag = a.diag() - out.factor.rowwise().squaredNorm();
    if (cfg.clamp_diag_nonneg) {
        for (Index i = 0; i < out.diag.size(); ++i) {
            if (out.diag(i) < 0.0) {
                out.diag(i) = 0.0;
                ++out.clamped;
            }
        }
    }
    return out;
}

FitResult alt_fit(const SymMatrix& a, const AltConfig& cfg, const TraceOptions& opts) {
    cfg.validate();
    Vector d = Vector::Zero(a.size());
    FitResult res{LrpdModel::diagonal(Matrix::Zero(a.size(), cfg.rank), d,
                                      ModelSource::alternating, cfg.clamp_diag_nonneg),
                  {}, 0};
    for (int t = 1; t <= cfg.max_iters; ++t) {
        AltStep s = alt_step(a, d, cfg);
        d = s.diag;
        res.clamp_events += s.clamped;
        res.model = LrpdModel::diagonal(std::move(s.factor), d, ModelSource::alternating,
                                        cfg.clamp_diag_nonneg);
        res.trace.append(measure(t, res.model, a, opts, 0));
        if (cfg.tol > 0.0 && res.trace.back().rel_fro_error <= cfg.tol) break;
    }
    return res;
}

FitResult alt_fit_block(const SymMatrix& a, const BlockPartition& partition, const AltConfig& cfg) {
    cfg.validate();
    if (partition.dimension() != a.size()) {
        throw std::invalid_argument("alt_fit_block: partition covers " +
                                    std::to_string(partition.dimension()) +
                                    " indices but the matrix has dimension " +
                                    std::to_string(a.size()));
    }
    const Index n = a.size();
    Matrix dense_d = Matrix::Zero(n, n);
    std::vector<Matrix> blocks(partition.count());
    FitResult res{LrpdModel::diagonal(Matrix::Zero(n, cfg.rank), Vector::Zero(n),
                                      ModelSource::alternating_block, true),
                  {}, 0};
    for (int t = 1; t <= cfg.max_iters; ++t) {
        Matrix u = low_rank_step(SymMatrix::symmetrize(a.dense() - dense_d), cfg);
        const Matrix l = u * u.transpose();
        dense_d.setZero();
        for (std::size_t b = 0; b < partition.count(); ++b) {
            const auto& idx = partition.block(b);
            const auto sz = static_cast<Index>(idx.size());
            Matrix s(sz, sz);
            for (Index i = 0; i < sz; ++i) {
                for (Index j = 0; j < sz; ++j) {
                    const Index p = idx[static_cast<std::size_t>(i)];
                    const Index q = idx[static_cast<std::size_t>(j)];
                    s(i, j) = a(p, q) - l(p, q);
                }
            }
            SymMatrix sb = SymMatrix::symmetrize(s);
            if (cfg.clamp_diag_nonneg) {
                const Vector ev = eigenvalues_sym(sb);
                res.clamp_events += static_cast<std::size_t>((ev.array() < 0.0).count());
                sb = psd_project(sb);
            }
            blocks[b] = sb.dense();
            for (Index i = 0; i < sz; ++i) {
                for (Index j = 0; j < sz; ++j) {
                    dense_d(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]) =
                        blocks[b](i, j);
                }
            }
        }
        res.model = LrpdModel::block_diagonal(std::move(u), partition, blocks,
                                              ModelSource::alternating_block);
        res.trace.append(measure(t, res.model, a, {}, 0));
        if (cfg.tol > 0.0 && res.trace.back().rel_fro_error <= cfg.tol) break;
    }
    return res;
}

ContractionCheck contraction_precheck(const SymMatrix& l_star, const Vector& d_star, Index k) {
    if (k < 1 || k > l_star.size()) {
        throw std::invalid_argument("contraction_precheck: rank must lie in [1, n]");
    }
    if (d_star.size() != l_star.size()) {
        throw std::invalid_argument("contraction_precheck: diagonal length does not match dimension");
    }
    const Vector ev = eigenvalues_sym(l_star);
    ContractionCheck c;
    c.delta = ev(k - 1);
    c.norm_dstar = d_star.size() ? d_star.cwiseAbs().maxCoeff() : 0.0;
    c.satisfied = c.delta > 0.0 && c.norm_dstar < c.delta / 2.0;
    return c;
}

}  // namespace lrpd
