#include <memory>
#include <stdexcept>

#include "commands.hpp"
#include "common.hpp"
#include "lrpd/alt.hpp"
#include "lrpd/baselines.hpp"
#include "lrpd/data.hpp"
#include "lrpd/errors.hpp"
#include "lrpd/io.hpp"
#include "lrpd/naive.hpp"
#include "lrpd/randomized.hpp"

namespace lrpd::cli {

namespace {

int need_iters(const DecomposeOpts& o) {
    if (!o.iters) throw std::invalid_argument("--method " + o.method + " needs --iters");
    return *o.iters;
}

}  // namespace

int cmd_decompose(const DecomposeOpts& o, const std::vector<std::string>& args, std::ostream& out) {
    if (o.input.empty() == o.returns.empty()) {
        throw std::invalid_argument("give exactly one of --input and --returns");
    }
    Manifest man;
    man.command = "decompose";
    man.args = args;
    man.seed = o.seed;

    std::unique_ptr<SymMatrix> a;
    if (!o.input.empty()) {
        man.inputs.emplace_back(o.input, file_digest(o.input));
        a = std::make_unique<SymMatrix>(read_matrix_csv(o.input));
    } else {
        man.inputs.emplace_back(o.returns, file_digest(o.returns));
        a = std::make_unique<SymMatrix>(covariance_from_returns(read_returns_csv(o.returns)));
    }
    const Index rank = *o.rank;
    nlohmann::json& p = man.params;
    p["method"] = o.method;
    p["rank"] = rank;
    p["n"] = a->size();

    const Outputs outs(o.out);
    FitResult fit{LrpdModel::diagonal(Matrix::Zero(a->size(), 0), Vector::Zero(a->size()),
                                      ModelSource::naive, false),
                  {}, 0};
    std::vector<std::pair<std::string, std::string>> extra_lines;

    if (o.method == "naive") {
        NaiveResult nr = naive_decompose(*a, rank);
        fit.model = nr.model;
        fit.trace.append(measure(1, fit.model, *a, {}, 0));
        extra_lines.emplace_back("residual_spectral", fmt(nr.residual_spectral));
        extra_lines.emplace_back("tail_eigenvalue", fmt(nr.tail_eigenvalue));
    } else if (o.method == "alt" || o.method == "alt-block") {
        AltConfig cfg;
        cfg.rank = rank;
        cfg.max_iters = need_iters(o);
        cfg.tol = o.tol;
        p["iters"] = cfg.max_iters;
        p["tol"] = cfg.tol;
        if (o.method == "alt") {
            fit = alt_fit(*a, cfg);
        } else {
            if (o.partition.empty() == !o.clusters.has_value()) {
                throw std::invalid_argument("--method alt-block needs exactly one of --partition and --clusters");
            }
            std::unique_ptr<BlockPartition> part;
            if (!o.partition.empty()) {
                man.inputs.emplace_back(o.partition, file_digest(o.partition));
                part = std::make_unique<BlockPartition>(BlockPartition::from_json(read_file(o.partition)));
            } else {
                p["clusters"] = *o.clusters;
                part = std::make_unique<BlockPartition>(kmeans_partition(*a, *o.clusters, o.seed));
            }
            fit = alt_fit_block(*a, *part, cfg);
            outs.write("partition.json", part->to_json() + "\n");
            outs.write("correction.csv", matrix_to_csv(fit.model.correction().dense()));
        }
    } else if (o.method == "stochastic") {
        if (!o.budget) throw std::invalid_argument("--method stochastic needs --budget");
        SketchConfig cfg;
        cfg.rank = rank;
        cfg.budget = *o.budget;
        cfg.seed = o.seed;
        cfg.variant = o.variant == "shifted" ? NystromVariant::shifted : NystromVariant::simple;
        const int iters = need_iters(o);
        const DiagMode mode = o.diag_mode == "diagpp" ? DiagMode::diagpp : DiagMode::exact;
        p["iters"] = iters;
        p["budget"] = cfg.budget;
        p["diag_mode"] = o.diag_mode;
        p["variant"] = o.variant;
        MatvecOracle oracle = oracle_from_dense(*a);
        StochasticInputs in;
        if (mode == DiagMode::exact) in.exact_diag = a->diag();
        in.reference = a.get();
        fit = stochastic_alt_fit(oracle, cfg, iters, mode, in);
        extra_lines.emplace_back("matvec_queries", std::to_string(oracle.query_count()));
        if (fit.trace.early_rank_collapse) extra_lines.emplace_back("early_rank_collapse", "1");
    } else if (o.method == "mm") {
        MmConfig cfg;
        cfg.rank = rank;
        cfg.max_iters = need_iters(o);
        p["iters"] = cfg.max_iters;
        MmResult r = mm_fit(*a, cfg);
        fit = r;
    } else if (o.method == "gd") {
        if (!o.eta) throw std::invalid_argument("--method gd needs --eta");
        GdConfig cfg;
        cfg.rank = rank;
        cfg.max_iters = need_iters(o);
        cfg.step = *o.eta;
        cfg.init = o.init == "random" ? GdInit::random : GdInit::svd;
        cfg.seed = o.seed;
        p["iters"] = cfg.max_iters;
        p["eta"] = cfg.step;
        p["init"] = o.init;
        fit = gd_nll_fit(*a, cfg);
    }

    outs.write("factor.csv", matrix_to_csv(fit.model.factor()));
    outs.write("diag.csv", vector_to_csv(fit.model.diag()));
    outs.write("trace.csv", fit.trace.to_csv());
    outs.write("trace.json", fit.trace.to_json() + "\n");
    outs.write_manifest(man);

    out << "final_rel_fro_error=" << fmt(fit.trace.back().rel_fro_error) << "\n";
    for (const auto& [k, v] : extra_lines) out << k << "=" << v << "\n";
    out << "output_dir=" << outs.dir() << "\n";
    return 0;
}

}  // namespace lrpd::cli
