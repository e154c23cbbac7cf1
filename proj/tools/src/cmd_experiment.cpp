#include <cmath>
#include <stdexcept>

#include "commands.hpp"
#include "common.hpp"
#include "lrpd/alt.hpp"
#include "lrpd/baselines.hpp"
#include "lrpd/data.hpp"
#include "lrpd/io.hpp"
#include "lrpd/randomized.hpp"
#include "lrpd/rng.hpp"
#include "lrpd/theory.hpp"

namespace lrpd::cli {

namespace {

SynthSpec exact_spec(Index n, Index k, std::uint64_t seed) {
    SynthSpec s;
    s.n = n;
    s.k_true = k;
    s.model = SynthModel::exact_lrpd;
    s.diag_lo = 0.0;
    s.diag_hi = 10.0;
    s.seed = derive_seed(seed, "instance");
    return s;
}

SynthSpec decaying_spec(Index n, Index k, std::optional<double> snr, std::uint64_t seed,
                        const std::string& stream) {
    SynthSpec s;
    s.n = n;
    s.k_true = k;
    s.model = SynthModel::decaying_spectrum;
    s.diag_lo = 0.2;
    s.diag_hi = 1.2;
    s.snr_db = snr;
    s.seed = derive_seed(seed, stream);
    return s;
}

FitResult run_alt(const SymMatrix& a, Index k, int iters, const TraceOptions& opts = {}) {
    AltConfig cfg;
    cfg.rank = k;
    cfg.max_iters = iters;
    return alt_fit(a, cfg, opts);
}

FitResult run_mm(const SymMatrix& a, Index k, int iters) {
    MmConfig cfg;
    cfg.rank = k;
    cfg.max_iters = iters;
    return mm_fit(a, cfg);
}

FitResult run_stochastic(const SymMatrix& a, Index r, Index budget, int iters, std::uint64_t seed,
                         const TraceOptions& opts) {
    SketchConfig cfg;
    cfg.rank = r;
    cfg.budget = budget;
    cfg.seed = seed;
    MatvecOracle oracle = oracle_from_dense(a);
    StochasticInputs in;
    in.exact_diag = a.diag();
    in.reference = &a;
    in.d_star = opts.d_star;
    return stochastic_alt_fit(oracle, cfg, iters, DiagMode::exact, in);
}

// iter,measured_delta,bound_delta; the bound column is empty when the
// contraction condition fails.
std::string fig1_overlay(const SynthInstance& inst, Index k, const ConvergenceTrace& trace) {
    const ContractionCheck chk = contraction_precheck(inst.l_star, inst.d_star, k);
    std::vector<double> bound;
    if (chk.satisfied) {
        const double alpha = contraction_rescale(chk.delta, chk.norm_dstar);
        bound = contraction_recursion(alpha * chk.delta, alpha * chk.norm_dstar,
                                      static_cast<int>(trace.size()));
        for (double& b : bound) b /= alpha;
    }
    std::string csv = "iter,measured_delta,bound_delta\n";
    csv += "0," + fmt(chk.norm_dstar) + "," + (bound.empty() ? "" : fmt(bound[0])) + "\n";
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const auto& r = trace.records()[t];
        csv += std::to_string(r.iter) + "," + (r.diag_error_sup ? fmt(*r.diag_error_sup) : "") + "," +
               (bound.empty() ? "" : fmt(bound[t + 1])) + "\n";
    }
    return csv;
}

struct SweepRow {
    Index rank;
    double low_rank, alt, block_uniform, block_clustered;
};

}  // namespace

int cmd_experiment(const ExperimentOpts& o, const std::vector<std::string>& args, std::ostream& out) {
    Manifest man;
    man.command = "experiment";
    man.args = args;
    man.seed = o.seed;
    man.params["name"] = o.name;
    const Outputs outs(o.out);
    std::vector<Curve> curves;
    const auto iters_or = [&o](int def) { return o.iters.value_or(def); };

    if (o.name == "fig1") {
        const int t = iters_or(20);
        const SynthInstance inst = gen_exact_lrpd(exact_spec(150, 5, o.seed));
        FitResult r = run_alt(inst.a, 5, t, TraceOptions{inst.d_star});
        outs.write("fig1_overlay.csv", fig1_overlay(inst, 5, r.trace));
        curves.push_back({"alt", std::move(r.trace)});
        man.params.update({{"n", 150}, {"k", 5}, {"iters", t}});
    } else if (o.name == "fig2") {
        const int t = iters_or(30);
        const SynthInstance inst = gen_decaying_spectrum(decaying_spec(200, 20, 120.0, o.seed, "instance"));
        curves.push_back({"alt", run_alt(inst.a, 20, t).trace});
        curves.push_back({"mm", run_mm(inst.a, 20, t).trace});
        man.params.update({{"n", 200}, {"k", 20}, {"snr_db", 120.0}, {"iters", t}});
    } else if (o.name == "fig3") {
        const int t = iters_or(30);
        for (double snr : {20.0, 60.0, 120.0}) {
            const std::string tag = std::to_string(static_cast<int>(snr)) + "db";
            const SynthInstance inst =
                gen_decaying_spectrum(decaying_spec(200, 20, snr, o.seed, "instance-" + tag));
            curves.push_back({"alt_" + tag, run_alt(inst.a, 20, t).trace});
            curves.push_back({"mm_" + tag, run_mm(inst.a, 20, t).trace});
        }
        man.params.update({{"n", 200}, {"k", 20}, {"snr_db", {20.0, 60.0, 120.0}}, {"iters", t}});
    } else if (o.name == "fig4") {
        const int t = iters_or(30);
        const SynthInstance inst = gen_exact_lrpd(exact_spec(200, 5, o.seed));
        const TraceOptions topts{inst.d_star};
        curves.push_back({"stochastic_b30",
                          run_stochastic(inst.a, 5, 30, t, derive_seed(o.seed, "stochastic"), topts).trace});
        curves.push_back({"deterministic", run_alt(inst.a, 5, t, topts).trace});
        man.params.update({{"n", 200}, {"r", 5}, {"budget", 30}, {"iters", t}});
    } else if (o.name == "fig5") {
        const int t = iters_or(50);
        const SynthInstance inst = gen_exact_lrpd(exact_spec(150, 8, o.seed));
        const TraceOptions topts{inst.d_star};
        curves.push_back({"stochastic_b30",
                          run_stochastic(inst.a, 8, 30, t, derive_seed(o.seed, "stochastic"), topts).trace});
        man.params.update({{"n", 150}, {"r", 8}, {"budget", 30}, {"iters", t}});
    } else if (o.name == "gd-compare") {
        const int t = iters_or(500);
        const SynthInstance inst = gen_decaying_spectrum(decaying_spec(100, 5, std::nullopt, o.seed, "instance"));
        curves.push_back({"alt", run_alt(inst.a, 5, t).trace});
        for (const auto& [tag, init] : {std::pair{"gd_random", GdInit::random}, std::pair{"gd_svd", GdInit::svd}}) {
            GdConfig cfg;
            cfg.rank = 5;
            cfg.max_iters = t;
            cfg.step = 1e-2;
            cfg.init = init;
            cfg.seed = derive_seed(o.seed, tag);
            curves.push_back({tag, gd_nll_fit(inst.a, cfg).trace});
        }
        man.params.update({{"n", 100}, {"k", 5}, {"eta", 1e-2}, {"iters", t}});
    } else if (o.name == "spx-blocks") {
        if (o.returns.empty()) throw std::invalid_argument("spx-blocks needs --returns");
        man.inputs.emplace_back(o.returns, file_digest(o.returns));
        const SymMatrix a = covariance_from_returns(read_returns_csv(o.returns));
        const Index n = a.size();
        const Index max_rank = o.max_rank.value_or(n - 1);
        if (max_rank < 1 || max_rank > n) throw std::invalid_argument("--max-rank must lie in [1, n]");
        const int t = iters_or(200);
        const BlockPartition clustered = kmeans_partition(a, o.clusters, derive_seed(o.seed, "kmeans"));
        const BlockPartition uniform = BlockPartition::contiguous(n, o.clusters);
        const EigDecomp e = eig_sym(a);
        const double fro = a.dense().norm();

        std::string csv = "rank,low_rank,alt,alt_block_uniform,alt_block_clustered\n";
        for (Index k = 1; k <= max_rank; ++k) {
            AltConfig cfg;
            cfg.rank = k;
            cfg.max_iters = t;
            const double lr = (a.dense() - truncate_top_k(e, k).dense()).norm() / fro;
            const double alt = alt_fit(a, cfg).trace.back().rel_fro_error;
            const double bu = alt_fit_block(a, uniform, cfg).trace.back().rel_fro_error;
            const double bc = alt_fit_block(a, clustered, cfg).trace.back().rel_fro_error;
            csv += std::to_string(k) + "," + fmt(lr) + "," + fmt(alt) + "," + fmt(bu) + "," + fmt(bc) + "\n";
        }
        std::string spec = "index,eigenvalue\n";
        const Vector ev = spectrum_report(a);
        for (Index i = 0; i < ev.size(); ++i) spec += std::to_string(i + 1) + "," + fmt(ev(i)) + "\n";
        outs.write("error_vs_rank.csv", csv);
        outs.write("spectrum.csv", spec);
        outs.write("partition_clustered.json", clustered.to_json() + "\n");
        outs.write("partition_uniform.json", uniform.to_json() + "\n");
        man.params.update({{"n", n}, {"clusters", o.clusters}, {"max_rank", max_rank}, {"iters", t}});
        outs.write_manifest(man);
        out << "error_vs_rank=" << outs.path("error_vs_rank.csv") << "\n";
        return 0;
    }

    write_curves(outs, curves);
    outs.write_manifest(man);
    for (const auto& c : curves) {
        out << "curve=" << c.name << " final_rel_fro_error=" << fmt(c.trace.back().rel_fro_error) << "\n";
    }
    return 0;
}

}  // namespace lrpd::cli
