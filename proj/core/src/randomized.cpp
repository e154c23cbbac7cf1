#include "lrpd/randomized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lrpd/alt.hpp"

namespace lrpd {

namespace {

Matrix orthonormal_basis(const Matrix& x, Index cols) {
    Eigen::HouseholderQR<Matrix> qr(x);
    return qr.householderQ() * Matrix::Identity(x.rows(), cols);
}

NystromResult nystrom_simple(const Matrix& omega, const Matrix& y, Index r,
                             const NystromOptions& opts) {
    NystromResult out;
    const EigDecomp e = eig_sym(SymMatrix::symmetrize(omega.transpose() * y));
    const double l1 = e.values(0);
    if (!(l1 > 0.0)) {
        out.factor = Matrix::Zero(y.rows(), 0);
        out.rank_collapsed = true;
        return out;
    }
    Index keep = r;
    if (e.values(r - 1) <= opts.rank_tol * l1) {
        keep = (e.values.array() > opts.rank_tol * l1).count();
        out.rank_collapsed = true;
    }
    Vector inv_sqrt(keep);
    for (Index i = 0; i < keep; ++i) {
        inv_sqrt(i) = 1.0 / std::sqrt(std::max(e.values(i), 0.0) + opts.ridge);
    }
    out.factor = (y * e.vectors.leftCols(keep)) * inv_sqrt.asDiagonal();
    out.effective_rank = keep;
    return out;
}

NystromResult nystrom_shifted(const Matrix& omega, const Matrix& y, Index r,
                              const NystromOptions& opts) {
    NystromResult out;
    const Index n = y.rows();
    const double nu = std::sqrt(static_cast<double>(n)) *
                      std::numeric_limits<double>::epsilon() * y.norm();
    if (!(nu > 0.0)) {
        out.factor = Matrix::Zero(n, 0);
        out.rank_collapsed = true;
        return out;
    }
    const Matrix y_nu = y + nu * omega;
    Matrix b = omega.transpose() * y_nu;
    b = 0.5 * (b + b.transpose()).eval();
    Eigen::LLT<Matrix> chol(b);
    if (chol.info() != Eigen::Success) {
        throw std::domain_error("nystrom: shifted sketch core is not positive definite");
    }
    // F = Y_nu C^{-1} with C upper triangular, C^T C = B.
    const Matrix f = chol.matrixU().transpose().solve(y_nu.transpose()).transpose();
    Eigen::JacobiSVD<Matrix> svd(f, Eigen::ComputeThinU);
    const Vector sv = svd.singularValues();
    Vector lam = (sv.array().square() - nu).max(0.0);
    const double l1 = lam.size() ? lam(0) : 0.0;
    if (!(l1 > 0.0)) {
        out.factor = Matrix::Zero(n, 0);
        out.rank_collapsed = true;
        return out;
    }
    Index keep = r;
    if (lam(r - 1) <= opts.rank_tol * l1) {
        keep = (lam.array() > opts.rank_tol * l1).count();
        out.rank_collapsed = true;
    }
    out.factor = svd.matrixU().leftCols(keep) * lam.head(keep).cwiseSqrt().asDiagonal();
    out.effective_rank = keep;
    return out;
}

}  // namespace

NystromResult nystrom_fixed_rank(MatvecOracle& oracle, Index r, Index s, Rng& rng,
                                 const NystromOptions& opts) {
    const Index n = oracle.size();
    if (r < 0) throw std::invalid_argument("nystrom: rank must be >= 0");
    if (r == 0) return NystromResult{Matrix::Zero(n, 0), 0, false};
    if (s < r) {
        throw std::invalid_argument("nystrom: sketch size " + std::to_string(s) +
                                    " is smaller than rank " + std::to_string(r));
    }
    if (s > n) {
        throw std::invalid_argument("nystrom: sketch size " + std::to_string(s) +
                                    " exceeds dimension " + std::to_string(n));
    }
    if (!(opts.rank_tol > 0.0) || !(opts.ridge > 0.0)) {
        throw std::invalid_argument("nystrom: rank_tol and ridge must be positive");
    }
    Matrix omega = gaussian_matrix(n, s, rng);
    if (opts.variant == NystromVariant::shifted) {
        omega = orthonormal_basis(omega, s);
        const Matrix y = oracle.apply(omega);
        return nystrom_shifted(omega, y, r, opts);
    }
    const Matrix y = oracle.apply(omega);
    return nystrom_simple(omega, y, r, opts);
}

Vector hutchinson_diag(MatvecOracle& oracle, Index s, Rng& rng) {
    if (s < 1) throw std::invalid_argument("hutchinson_diag: need at least one query");
    const Matrix v = rademacher_matrix(oracle.size(), s, rng);
    const Matrix av = oracle.apply(v);
    return v.cwiseProduct(av).rowwise().sum() / static_cast<double>(s);
}

Vector diagpp(MatvecOracle& oracle, Index s, Rng& rng, const DiagppSplit& split) {
    if (s < 3) throw std::invalid_argument("diagpp: need at least 3 queries");
    if (!(split.sketch > 0.0) || !(split.project > 0.0) || split.sketch + split.project >= 1.0) {
        throw std::invalid_argument("diagpp: split fractions must be positive and sum below 1");
    }
    const Index n = oracle.size();
    const auto frac = [s](double f) {
        return std::max<Index>(1, static_cast<Index>(std::floor(f * static_cast<double>(s))));
    };
    const Index s1 = std::min(frac(split.sketch), n);
    const Index q_cols = std::min(s1, frac(split.project));
    const Index s3 = s - s1 - q_cols;
    if (s3 < 1) throw std::invalid_argument("diagpp: split leaves no Hutchinson queries");

    const Matrix y = oracle.apply(gaussian_matrix(n, s1, rng));
    const Matrix q = orthonormal_basis(y, q_cols);
    const Matrix aq = oracle.apply(q);
    // diag(PA + AP - PAP) with P = QQ^T
    const Matrix core = q.transpose() * aq;
    Vector d = 2.0 * q.cwiseProduct(aq).rowwise().sum() -
               (q * core).cwiseProduct(q).rowwise().sum();

    const Matrix v = rademacher_matrix(n, s3, rng);
    const Matrix w = v - q * (q.transpose() * v);
    Matrix z = oracle.apply(w);
    z -= q * (q.transpose() * z);
    d += v.cwiseProduct(z).rowwise().sum() / static_cast<double>(s3);
    return d;
}

Index SketchConfig::sketch_size() const noexcept {
    return std::max(sketch_allocation(), rank + 1);
}

void SketchConfig::validate() const {
    if (rank < 0) throw std::invalid_argument("SketchConfig: rank must be >= 0");
    if (budget < 1) throw std::invalid_argument("SketchConfig: budget must be >= 1");
    if (!(rank_tol > 0.0) || !(ridge > 0.0)) {
        throw std::invalid_argument("SketchConfig: rank_tol and ridge must be positive");
    }
}

FitResult stochastic_alt_fit(MatvecOracle& oracle, const SketchConfig& cfg, int iters,
                             DiagMode mode, const StochasticInputs& in) {
    cfg.validate();
    if (iters < 1) throw std::invalid_argument("stochastic_alt_fit: iters must be >= 1");
    const Index n = oracle.size();
    if (in.reference && in.reference->size() != n) {
        throw std::invalid_argument("stochastic_alt_fit: reference matrix has wrong dimension");
    }
    TraceOptions topts{in.d_star};

    if (cfg.budget <= cfg.rank) {
        if (!in.reference) {
            throw std::invalid_argument(
                "stochastic_alt_fit: budget <= rank needs the dense matrix for the deterministic fallback");
        }
        AltConfig acfg;
        acfg.rank = cfg.rank;
        acfg.max_iters = iters;
        return alt_fit(*in.reference, acfg, topts);
    }

    const Index s = cfg.sketch_size();
    Vector diag_a;
    if (mode == DiagMode::exact) {
        if (!in.exact_diag) {
            throw std::invalid_argument("stochastic_alt_fit: exact diagonal mode needs diag(A)");
        }
        if (in.exact_diag->size() != n) {
            throw std::invalid_argument("stochastic_alt_fit: diag(A) has wrong length");
        }
        diag_a = *in.exact_diag;
    } else if (cfg.budget - s < 3) {
        throw std::invalid_argument("stochastic_alt_fit: budget " + std::to_string(cfg.budget) +
                                    " leaves fewer than 3 queries for the diagonal estimate");
    }

    Rng sketch_rng(derive_seed(cfg.seed, "nystrom"));
    Rng diag_rng(derive_seed(cfg.seed, "diagpp"));
    const NystromOptions nopts{cfg.rank_tol, cfg.ridge, cfg.variant};

    Vector d = Vector::Zero(n);
    FitResult res{LrpdModel::diagonal(Matrix::Zero(n, 0), d, ModelSource::stochastic, true), {}, 0};

    for (int t = 1; t <= iters; ++t) {
        MatvecOracle residual(n, [&oracle, &d](const Matrix& x) -> Matrix {
            return oracle.apply(x) - d.asDiagonal() * x;
        });
        NystromResult nys = nystrom_fixed_rank(residual, cfg.rank, s, sketch_rng, nopts);
        const Matrix& u = nys.factor;
        const Vector diag_u = u.rowwise().squaredNorm();

        Vector target;
        if (mode == DiagMode::exact) {
            target = diag_a - diag_u;
        } else {
            MatvecOracle deflated(n, [&residual, &u](const Matrix& x) -> Matrix {
                return residual.apply(x) - u * (u.transpose() * x);
            });
            target = d + diagpp(deflated, cfg.budget - s, diag_rng, cfg.split);
        }
        for (Index i = 0; i < n; ++i) {
            if (target(i) < 0.0) {
                target(i) = 0.0;
                ++res.clamp_events;
            }
        }
        d = target;
        res.model = LrpdModel::diagonal(nys.factor, d, ModelSource::stochastic, true);

        TraceRecord rec;
        if (in.reference) {
            rec = measure(t, res.model, *in.reference, topts, oracle.query_count());
        } else {
            rec.iter = t;
            rec.rel_fro_error = std::numeric_limits<double>::quiet_NaN();
            rec.objective = std::numeric_limits<double>::quiet_NaN();
            if (in.d_star) rec.diag_error_sup = diag_sup_error(res.model, *in.d_star);
            rec.matvec_queries = oracle.query_count();
        }
        res.trace.append(rec);
        if (nys.rank_collapsed) {
            res.trace.early_rank_collapse = true;
            break;
        }
    }
    return res;
}

BoundReport bound_report(const SymMatrix& r_mat, Index r, Index k, Index s, double epsilon,
                         double delta, double c, int alpha) {
    const Index n = r_mat.size();
    if (alpha != 0 && alpha != 1) throw std::invalid_argument("bound_report: alpha must be 0 or 1");
    if (r < 0 || r > n) throw std::invalid_argument("bound_report: rank outside [0, n]");
    if (k <= r + alpha) {
        throw std::invalid_argument("bound_report: sketch size must exceed rank + alpha");
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("bound_report: epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("bound_report: delta must lie in (0, 1)");
    }
    if (!(c >= 0.0)) throw std::invalid_argument("bound_report: c must be >= 0");

    const EigDecomp e = eig_sym(r_mat);
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&e](Index a, Index b) {
        return std::abs(e.values(a)) > std::abs(e.values(b));
    });

    BoundReport rep;
    rep.alpha = alpha;
    rep.epsilon = epsilon;
    rep.delta = delta;
    rep.c = c;
    Matrix tail = Matrix::Zero(n, n);
    for (Index i = r; i < n; ++i) {
        const Index j = order[static_cast<std::size_t>(i)];
        const double lam = e.values(j);
        rep.tail_spectral = std::max(rep.tail_spectral, std::abs(lam));
        rep.tail_nuclear += std::abs(lam);
        tail += lam * e.vectors.col(j) * e.vectors.col(j).transpose();
    }
    const double coef = static_cast<double>(r) / static_cast<double>(k - r - alpha);
    rep.e_lr = rep.tail_spectral + coef * rep.tail_nuclear;
    rep.e_lr_max_entry = (n > r ? tail.cwiseAbs().maxCoeff() : 0.0) + coef * rep.tail_nuclear;

    const Vector dg = r_mat.diag();
    const double dnorm = dg.norm();
    rep.e_diag = epsilon * dnorm;

    rep.k_suggested = static_cast<Index>(
        std::ceil((1.0 + 1.0 / epsilon) * static_cast<double>(r) + alpha - 1e-9));
    double s_min = c * std::log(1.0 / delta);
    if (dnorm > 0.0) {
        s_min += 4.0 * dg.sum() / dnorm *
                 std::sqrt(std::log(2.0 * static_cast<double>(n) / delta)) / epsilon;
    }
    rep.s_suggested = static_cast<Index>(std::floor(std::max(s_min, 0.0))) + 1;
    rep.sketch_sufficient = k >= rep.k_suggested;
    rep.queries_sufficient = s >= rep.s_suggested;
    return rep;
}

}  // namespace lrpd
