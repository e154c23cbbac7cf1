#include "lrpd_cli/cli.hpp"

#include <filesystem>

#include <CLI11.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "lrpd/errors.hpp"
#include "lrpd/io.hpp"
#include "lrpd/version.hpp"

namespace lrpd::cli {

namespace {

const std::vector<std::string> kExperiments = {"fig1", "fig2",       "fig3",      "fig4",
                                               "fig5", "spx-blocks", "gd-compare"};

int rerun(const std::string& manifest_path, const std::string& out_dir, std::ostream& out,
          std::ostream& err) {
    const Manifest m = Manifest::from_json(read_file(manifest_path));
    for (const auto& [path, digest] : m.inputs) {
        const std::string now = file_digest(path);
        if (now != digest) {
            throw InputError("rerun: input " + path + " changed (manifest " + digest + ", now " + now + ")");
        }
    }
    std::vector<std::string> args = m.args;
    args.push_back("--out");
    args.push_back(out_dir);
    return run_cli(args, out, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Low-rank plus diagonal approximation of symmetric PSD matrices", "lrpd"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));

    DecomposeOpts dec;
    auto* sd = app.add_subcommand("decompose", "Fit one model to a matrix or a returns file");
    sd->add_option("--input", dec.input, "Symmetric matrix CSV (no header)");
    sd->add_option("--returns", dec.returns, "Returns CSV; the sample covariance is fitted");
    sd->add_option("--method", dec.method)
        ->check(CLI::IsMember({"alt", "alt-block", "stochastic", "naive", "mm", "gd"}))
        ->capture_default_str();
    sd->add_option("--rank", dec.rank, "Target rank")->required();
    sd->add_option("--iters", dec.iters, "Iterations");
    sd->add_option("--tol", dec.tol, "Early stop on relative Frobenius error (alt, alt-block)");
    sd->add_option("--budget", dec.budget, "Matrix-vector products per iteration (stochastic)");
    sd->add_option("--seed", dec.seed)->capture_default_str();
    sd->add_option("--eta", dec.eta, "Step size (gd)");
    sd->add_option("--init", dec.init)->check(CLI::IsMember({"svd", "random"}))->capture_default_str();
    sd->add_option("--clusters", dec.clusters, "k-means blocks (alt-block)");
    sd->add_option("--partition", dec.partition, "Partition JSON (alt-block)");
    sd->add_option("--diag-mode", dec.diag_mode)
        ->check(CLI::IsMember({"exact", "diagpp"}))
        ->capture_default_str();
    sd->add_option("--variant", dec.variant, "Nystrom variant")
        ->check(CLI::IsMember({"simple", "shifted"}))
        ->capture_default_str();
    sd->add_option("--out", dec.out, "Output directory");

    ExperimentOpts exp;
    auto* se = app.add_subcommand("experiment", "Reproduce one experiment as CSV traces");
    se->add_option("name", exp.name)->required()->check(CLI::IsMember(kExperiments));
    se->add_option("--seed", exp.seed)->capture_default_str();
    se->add_option("--iters", exp.iters, "Override the iteration count");
    se->add_option("--returns", exp.returns, "Returns CSV (spx-blocks)");
    se->add_option("--clusters", exp.clusters, "k-means blocks (spx-blocks)")->capture_default_str();
    se->add_option("--max-rank", exp.max_rank, "Largest rank in the sweep (spx-blocks)");
    se->add_option("--out", exp.out, "Output directory");

    TheoryOpts th;
    auto* st = app.add_subcommand("theory", "Seeded property sweeps");
    st->add_option("check", th.check)->required()->check(CLI::IsMember({"jacobian", "contraction", "bounds"}));
    st->add_option("--seed", th.seed)->capture_default_str();
    st->add_option("--n", th.n, "Projector dimension (jacobian) or matrix size (bounds)");
    st->add_option("--trials", th.trials)->capture_default_str();
    st->add_option("--dim", th.dim, "Instance dimension (contraction)")->capture_default_str();
    st->add_option("--k", th.k, "Planted rank (contraction)")->capture_default_str();
    st->add_option("--diag-hi", th.diag_hi, "Upper end of the diagonal range (contraction)")
        ->capture_default_str();
    st->add_option("--iters", th.iters)->capture_default_str();
    st->add_option("--alpha", th.alpha, "Rescale A by alpha (contraction)");
    st->add_option("--r", th.r, "Target rank (bounds)")->capture_default_str();
    st->add_option("--epsilon", th.epsilon)->capture_default_str();
    st->add_option("--delta", th.delta)->capture_default_str();
    st->add_option("--c", th.c)->capture_default_str();
    st->add_option("--out", th.out, "Output directory");

    GenerateOpts gen;
    auto* sg = app.add_subcommand("generate", "Write a synthetic instance");
    sg->add_option("--model", gen.model)
        ->check(CLI::IsMember({"exact-lrpd", "decaying"}))
        ->capture_default_str();
    sg->add_option("--n", gen.n)->capture_default_str();
    sg->add_option("--k", gen.k)->capture_default_str();
    sg->add_option("--diag-lo", gen.diag_lo);
    sg->add_option("--diag-hi", gen.diag_hi);
    sg->add_option("--snr-db", gen.snr_db);
    sg->add_option("--seed", gen.seed)->capture_default_str();
    sg->add_option("--out", gen.out, "Output directory");

    std::string manifest_path;
    std::string rerun_out;
    auto* sr = app.add_subcommand("rerun", "Repeat a run from its manifest");
    sr->add_option("--manifest", manifest_path)->required();
    sr->add_option("--out", rerun_out, "Output directory");

    std::vector<const char*> argv{"lrpd"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    const std::vector<std::string> canonical = strip_out_flag(args);
    try {
        if (*sd) {
            if (dec.out.empty()) dec.out = default_out_dir();
            return cmd_decompose(dec, canonical, out);
        }
        if (*se) {
            if (exp.out.empty()) exp.out = default_out_dir();
            return cmd_experiment(exp, canonical, out);
        }
        if (*st) {
            if (th.out.empty()) th.out = default_out_dir();
            return cmd_theory(th, canonical, out);
        }
        if (*sg) {
            if (gen.out.empty()) gen.out = default_out_dir();
            return cmd_generate(gen, canonical, out);
        }
        if (*sr) {
            return rerun(manifest_path, rerun_out.empty() ? default_out_dir() : rerun_out, out, err);
        }
    } catch (const InvariantViolation& e) {
        err << "invariant violated: " << e.what() << "\n";
        return kInvariantViolated;
    } catch (const SolverDiverged& e) {
        err << "solver diverged at iteration " << e.iteration() << ": " << e.what() << "\n";
        return kSolverFailure;
    } catch (const BacktrackingFailure& e) {
        err << "backtracking failed (last L = " << e.last_lipschitz() << "): " << e.what() << "\n";
        return kSolverFailure;
    } catch (const EigensolverError& e) {
        err << "eigensolver failed (residual " << e.residual() << "): " << e.what() << "\n";
        return kSolverFailure;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "file error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kSolverFailure;
    }
    return kInputError;
}

}  // namespace lrpd::cli
