#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "commands.hpp"
#include "common.hpp"
#include "lrpd/alt.hpp"
#include "lrpd/data.hpp"
#include "lrpd/randomized.hpp"
#include "lrpd/rng.hpp"
#include "lrpd/theory.hpp"

namespace lrpd::cli {

namespace {

int check_jacobian(const TheoryOpts& o, Manifest& man, const Outputs& outs, std::ostream& out) {
    const Index n = o.n.value_or(8);
    if (n < 2) throw std::invalid_argument("--n must be at least 2");
    if (o.trials < 1) throw std::invalid_argument("--trials must be at least 1");
    man.params.update({{"n", n}, {"trials", o.trials}});
    Rng rng(derive_seed(o.seed, "jacobian"));
    std::uniform_int_distribution<Index> pick_k(1, n - 1);
    std::string csv = "trial,n,k,norm_inf,row_bound,spectral_radius,axis_aligned,pass\n";
    int violations = 0;
    double worst = 0.0;
    for (int t = 0; t < o.trials; ++t) {
        const Index k = pick_k(rng);
        const Projector p = Projector::from_basis(gaussian_matrix(n, k, rng));
        const JacobianNorm jn = jacobian_d_norm(p);
        const bool pass = jn.norm_inf <= 1.0 + 1e-12;
        violations += pass ? 0 : 1;
        worst = std::max(worst, jn.norm_inf);
        csv += std::to_string(t) + "," + std::to_string(n) + "," + std::to_string(k) + "," +
               fmt(jn.norm_inf) + "," + fmt(jn.row_bound) + "," + fmt(jn.spectral_radius) + "," +
               (jn.is_axis_aligned ? "1" : "0") + "," + (pass ? "1" : "0") + "\n";
    }
    outs.write("jacobian.csv", csv);
    outs.write_manifest(man);
    out << "check=jacobian trials=" << o.trials << " violations=" << violations
        << " max_norm_inf=" << fmt(worst) << " " << (violations ? "FAIL" : "PASS") << "\n";
    if (violations) {
        throw InvariantViolation(std::to_string(violations) + " of " + std::to_string(o.trials) +
                                 " projectors have infinity-norm above 1 + 1e-12");
    }
    return 0;
}

int check_contraction(const TheoryOpts& o, Manifest& man, const Outputs& outs, std::ostream& out) {
    SynthSpec spec;
    spec.n = o.dim;
    spec.k_true = o.k;
    spec.diag_hi = o.diag_hi;
    spec.seed = derive_seed(o.seed, "instance");
    const SynthInstance inst = gen_exact_lrpd(spec);
    const ContractionCheck chk = contraction_precheck(inst.l_star, inst.d_star, o.k);
    out << "delta=" << fmt(chk.delta) << " norm_dstar=" << fmt(chk.norm_dstar)
        << " satisfied=" << (chk.satisfied ? 1 : 0) << "\n";
    if (!chk.satisfied) {
        throw std::domain_error("contraction condition ||D*|| < delta/2 fails; no rescaling of A repairs it");
    }
    const double alpha = o.alpha.value_or(contraction_rescale(chk.delta, chk.norm_dstar));
    if (!(alpha > 0.0)) throw std::invalid_argument("--alpha must be positive");
    man.params.update({{"dim", o.dim}, {"k", o.k}, {"diag_hi", o.diag_hi}, {"iters", o.iters}, {"alpha", alpha}});
    out << "alpha=" << fmt(alpha) << "\n";
    const SymMatrix a = alpha * inst.a;
    const Vector d_star = alpha * inst.d_star;
    const std::vector<double> bound =
        contraction_recursion(alpha * chk.delta, alpha * chk.norm_dstar, o.iters);

    AltConfig cfg;
    cfg.rank = o.k;
    cfg.max_iters = o.iters;
    const FitResult fit = alt_fit(a, cfg, TraceOptions{d_star});
    std::string csv = "iter,measured_delta,bound_delta,objective\n";
    csv += "0," + fmt(alpha * chk.norm_dstar) + "," + fmt(bound[0]) + ",\n";
    int violations = 0;
    double prev_obj = INFINITY;
    double prev_delta = alpha * chk.norm_dstar;
    for (const auto& r : fit.trace.records()) {
        const double md = *r.diag_error_sup;
        const double b = bound[static_cast<std::size_t>(r.iter)];
        if (md > b + 1e-10) ++violations;
        if (r.objective > prev_obj + 1e-10 || md > prev_delta + 1e-10) ++violations;
        prev_obj = r.objective;
        prev_delta = md;
        csv += std::to_string(r.iter) + "," + fmt(md) + "," + fmt(b) + "," + fmt(r.objective) + "\n";
    }
    outs.write("contraction.csv", csv);
    outs.write_manifest(man);
    out << "check=contraction iters=" << o.iters << " violations=" << violations << " "
        << (violations ? "FAIL" : "PASS") << "\n";
    if (violations) throw InvariantViolation("measured diagonal error exceeds the contraction bound");
    return 0;
}

int check_bounds(const TheoryOpts& o, Manifest& man, const Outputs& outs, std::ostream& out) {
    const Index n = o.n.value_or(100);
    if (o.trials < 1) throw std::invalid_argument("--trials must be at least 1");
    // Fixed test matrix: random orthogonal basis, eigenvalues 1/i^2.
    Rng rng(derive_seed(o.seed, "bounds-matrix"));
    const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian_matrix(n, n, rng)).householderQ();
    Vector lam(n);
    for (Index i = 0; i < n; ++i) lam(i) = 1.0 / static_cast<double>((i + 1) * (i + 1));
    const SymMatrix a = SymMatrix::symmetrize(q * lam.asDiagonal() * q.transpose());

    const Index k_sketch = static_cast<Index>(std::ceil((1.0 + 1.0 / o.epsilon) * static_cast<double>(o.r) + 1.0 - 1e-9));
    const BoundReport rep = bound_report(a, o.r, k_sketch, k_sketch, o.epsilon, o.delta, o.c, 1);
    man.params.update({{"n", n}, {"r", o.r}, {"epsilon", o.epsilon}, {"delta", o.delta}, {"c", o.c},
                       {"trials", o.trials}});
    out << "k_suggested=" << rep.k_suggested << "\n";
    out << "s_suggested=" << rep.s_suggested << "\n";
    out << "e_lr=" << fmt(rep.e_lr) << " e_lr_max_entry=" << fmt(rep.e_lr_max_entry)
        << " e_diag=" << fmt(rep.e_diag) << "\n";
    if (k_sketch > n) throw std::invalid_argument("suggested sketch size exceeds n");

    std::string csv = "trial,nuclear_error,spectral_error,within_e_lr\n";
    Rng trial_rng(derive_seed(o.seed, "bounds-trials"));
    double nuc_sum = 0.0;
    int within = 0;
    for (int t = 0; t < o.trials; ++t) {
        MatvecOracle oracle = oracle_from_dense(a);
        const NystromResult nr = nystrom_fixed_rank(oracle, o.r, rep.k_suggested, trial_rng);
        const SymMatrix err = SymMatrix::symmetrize(a.dense() - nr.factor * nr.factor.transpose());
        const Norms nm = norms(err);
        nuc_sum += nm.nuclear;
        const bool ok = nm.spectral <= rep.e_lr;
        within += ok ? 1 : 0;
        csv += std::to_string(t) + "," + fmt(nm.nuclear) + "," + fmt(nm.spectral) + "," + (ok ? "1" : "0") + "\n";
    }
    outs.write("bounds.csv", csv);
    outs.write_manifest(man);
    const double mean_nuc = nuc_sum / o.trials;
    const double limit = (1.0 + o.epsilon) * rep.tail_nuclear * 1.1;
    const bool nuc_ok = mean_nuc <= limit;
    const bool spec_ok = within >= static_cast<int>(std::ceil(0.9 * o.trials));
    out << "mean_nuclear_error=" << fmt(mean_nuc) << " limit=" << fmt(limit) << " "
        << (nuc_ok ? "PASS" : "FAIL") << "\n";
    out << "spectral_within_e_lr=" << within << "/" << o.trials << " " << (spec_ok ? "PASS" : "FAIL") << "\n";
    if (!nuc_ok || !spec_ok) throw InvariantViolation("randomized error bound not met");
    return 0;
}

}  // namespace

int cmd_theory(const TheoryOpts& o, const std::vector<std::string>& args, std::ostream& out) {
    Manifest man;
    man.command = "theory";
    man.args = args;
    man.seed = o.seed;
    man.params["check"] = o.check;
    const Outputs outs(o.out);
    if (o.check == "jacobian") return check_jacobian(o, man, outs, out);
    if (o.check == "contraction") return check_contraction(o, man, outs, out);
    return check_bounds(o, man, outs, out);
}

}  // namespace lrpd::cli
