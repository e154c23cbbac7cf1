#include "lrpd/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lrpd/errors.hpp"
#include "lrpd/naive.hpp"
#include "lrpd/rng.hpp"

namespace lrpd {

void MmConfig::validate() const {
    if (rank < 0) throw std::invalid_argument("MmConfig: rank must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("MmConfig: max_iters must be >= 1");
    if (initial_lipschitz && !(*initial_lipschitz > 0.0)) {
        throw std::invalid_argument("MmConfig: initial Lipschitz estimate must be positive");
    }
    if (!(backtrack_factor > 1.0)) {
        throw std::invalid_argument("MmConfig: backtrack_factor must exceed 1");
    }
    if (max_backtracks < 0) throw std::invalid_argument("MmConfig: max_backtracks must be >= 0");
}

double mm_objective(const SymMatrix& b, const Matrix& u) {
    return (b.dense() - u * u.transpose()).squaredNorm();
}

Matrix mm_gradient(const SymMatrix& b, const Matrix& u) {
    return 4.0 * (u * (u.transpose() * u) - b.dense() * u);
}

MmResult mm_fit(const SymMatrix& a, const MmConfig& cfg, const TraceOptions& opts) {
    cfg.validate();
    const Index n = a.size();
    if (cfg.rank > n) throw std::invalid_argument("mm_fit: rank exceeds dimension");

    Matrix u = top_k_factor(eig_sym(a), cfg.rank);
    Vector d = Vector::Zero(n);
    double l0 = cfg.initial_lipschitz.value_or(spectral_norm(a));
    if (!(l0 > 0.0)) l0 = 1.0;

    MmResult res{{LrpdModel::diagonal(u, d, ModelSource::mm, false), {}, 0}, {}};
    for (int t = 1; t <= cfg.max_iters; ++t) {
        Matrix bd = a.dense();
        bd.diagonal() -= d;
        const SymMatrix b = SymMatrix::symmetrize(bd);

        const double g0 = mm_objective(b, u);
        const Matrix grad = mm_gradient(b, u);
        double lip = l0;
        bool accepted = false;
        for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
            const Matrix step = -grad / lip;
            const Matrix next = u + step;
            const double g1 = mm_objective(b, next);
            const double q = g0 + (grad.array() * step.array()).sum() + 0.5 * lip * step.squaredNorm();
            if (g1 <= q) {
                res.steps.push_back(MmStep{t, lip, g0, g1, q});
                u = next;
                accepted = true;
                break;
            }
            lip *= cfg.backtrack_factor;
        }
        if (!accepted) {
            throw BacktrackingFailure("mm_fit: no step certified at iteration " + std::to_string(t), lip);
        }
        d = a.diag() - u.rowwise().squaredNorm();
        res.model = LrpdModel::diagonal(u, d, ModelSource::mm, false);
        res.trace.append(measure(t, res.model, a, opts, 0));
    }
    return res;
}

void GdConfig::validate() const {
    if (rank < 0) throw std::invalid_argument("GdConfig: rank must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("GdConfig: max_iters must be >= 1");
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("GdConfig: step size must be positive");
    }
    if (random_scale && !(*random_scale > 0.0)) {
        throw std::invalid_argument("GdConfig: random_scale must be positive");
    }
}

GdState gd_initial_state(const SymMatrix& sigma, const GdConfig& cfg) {
    cfg.validate();
    const Index n = sigma.size();
    if (cfg.rank > n) throw std::invalid_argument("gd: rank exceeds dimension");
    if (cfg.init == GdInit::svd) {
        NaiveResult nr = naive_decompose(sigma, cfg.rank);
        return GdState{nr.model.factor(), nr.model.diag()};
    }
    Rng rng(derive_seed(cfg.seed, "gd-init"));
    const double scale = cfg.random_scale.value_or(1.0 / std::sqrt(static_cast<double>(n)));
    return GdState{scale * gaussian_matrix(n, cfg.rank, rng), sigma.diag() / 2.0};
}

namespace {

Eigen::LLT<Matrix> factor_model(const Vector& d, const Matrix& u) {
    Matrix m = u * u.transpose();
    m.diagonal() += d;
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
        throw std::domain_error("model covariance is not positive definite");
    }
    return llt;
}

}  // namespace

double nll_objective(const SymMatrix& sigma, const Vector& d, const Matrix& u) {
    const auto llt = factor_model(d, u);
    const Matrix lm = llt.matrixL();
    const double logdet = 2.0 * lm.diagonal().array().log().sum();
    return logdet + llt.solve(sigma.dense()).trace();
}

NllGradient nll_gradient(const SymMatrix& sigma, const Vector& d, const Matrix& u) {
    const auto llt = factor_model(d, u);
    const Matrix minv = llt.solve(Matrix::Identity(d.size(), d.size()));
    Matrix g = minv - minv * sigma.dense() * minv;
    g = 0.5 * (g + g.transpose()).eval();
    return NllGradient{2.0 * g * u, g.diagonal()};
}

FitResult gd_nll_fit(const SymMatrix& sigma, const GdConfig& cfg, const TraceOptions& opts) {
    GdState st = gd_initial_state(sigma, cfg);
    try {
        (void)nll_objective(sigma, st.diag, st.factor);
    } catch (const std::domain_error&) {
        throw SolverDiverged("gd_nll_fit: initial model covariance is not positive definite", 0);
    }
    FitResult res{LrpdModel::diagonal(st.factor, st.diag, ModelSource::gd, false), {}, 0};
    for (int t = 1; t <= cfg.max_iters; ++t) {
        double f = 0.0;
        try {
            const NllGradient g = nll_gradient(sigma, st.diag, st.factor);
            st.factor -= cfg.step * g.factor;
            st.diag -= cfg.step * g.diag;
            f = nll_objective(sigma, st.diag, st.factor);
        } catch (const std::domain_error&) {
            throw SolverDiverged("gd_nll_fit: model covariance lost positive definiteness at iteration " +
                                     std::to_string(t),
                                 t);
        }
        if (!std::isfinite(f)) {
            throw SolverDiverged("gd_nll_fit: objective is not finite at iteration " + std::to_string(t), t);
        }
        res.model = LrpdModel::diagonal(st.factor, st.diag, ModelSource::gd, false);
        TraceRecord rec = measure(t, res.model, sigma, opts, 0);
        rec.objective = f;
        res.trace.append(rec);
    }
    return res;
}

}  // namespace lrpd
