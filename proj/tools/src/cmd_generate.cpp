#include "commands.hpp"
#include "common.hpp"
#include "lrpd/data.hpp"
#include "lrpd/io.hpp"

namespace lrpd::cli {

int cmd_generate(const GenerateOpts& o, const std::vector<std::string>& args, std::ostream& out) {
    SynthSpec spec;
    spec.n = o.n;
    spec.k_true = o.k;
    spec.seed = o.seed;
    spec.snr_db = o.snr_db;
    if (o.model == "exact-lrpd") {
        spec.model = SynthModel::exact_lrpd;
        spec.diag_lo = o.diag_lo.value_or(0.0);
        spec.diag_hi = o.diag_hi.value_or(10.0);
    } else {
        spec.model = SynthModel::decaying_spectrum;
        spec.diag_lo = o.diag_lo.value_or(0.2);
        spec.diag_hi = o.diag_hi.value_or(1.2);
    }
    const SynthInstance inst = generate(spec);

    Manifest man;
    man.command = "generate";
    man.args = args;
    man.seed = o.seed;
    man.params = {{"model", o.model}, {"n", spec.n}, {"k", spec.k_true},
                  {"diag_lo", spec.diag_lo}, {"diag_hi", spec.diag_hi}};
    if (spec.snr_db) man.params["snr_db"] = *spec.snr_db;

    const Outputs outs(o.out);
    outs.write("A.csv", matrix_to_csv(inst.a.dense()));
    outs.write("A0.csv", matrix_to_csv(inst.a0.dense()));
    outs.write("d_star.csv", vector_to_csv(inst.d_star));
    outs.write("factor_star.csv", matrix_to_csv(inst.factor));
    outs.write_manifest(man);
    out << "matrix=" << outs.path("A.csv") << "\n";
    if (spec.snr_db) out << "realized_snr_db=" << fmt(realized_snr_db(inst.a, inst.a0)) << "\n";
    return 0;
}

}  // namespace lrpd::cli
