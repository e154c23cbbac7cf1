#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lrpd/linalg.hpp"

namespace lrpd::cli {

struct DecomposeOpts {
    std::string input;
    std::string returns;
    std::string method = "alt";
    std::optional<Index> rank;
    std::optional<int> iters;
    double tol = 0.0;
    std::optional<Index> budget;
    std::uint64_t seed = 0;
    std::optional<double> eta;
    std::string init = "svd";
    std::optional<Index> clusters;
    std::string partition;
    std::string diag_mode = "exact";
    std::string variant = "simple";
    std::string out;
};

struct ExperimentOpts {
    std::string name;
    std::uint64_t seed = 0;
    std::optional<int> iters;
    std::string returns;
    Index clusters = 5;
    std::optional<Index> max_rank;
    std::string out;
};

struct TheoryOpts {
    std::string check;
    std::uint64_t seed = 0;
    std::optional<Index> n;
    int trials = 100;
    // contraction
    Index dim = 150;
    Index k = 5;
    double diag_hi = 10.0;
    int iters = 20;
    std::optional<double> alpha;
    // bounds
    Index r = 5;
    double epsilon = 0.5;
    double delta = 0.1;
    double c = 1.0;
    std::string out;
};

struct GenerateOpts {
    std::string model = "exact-lrpd";
    Index n = 150;
    Index k = 5;
    std::optional<double> diag_lo;
    std::optional<double> diag_hi;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_decompose(const DecomposeOpts& o, const std::vector<std::string>& args, std::ostream& out);
int cmd_experiment(const ExperimentOpts& o, const std::vector<std::string>& args, std::ostream& out);
int cmd_theory(const TheoryOpts& o, const std::vector<std::string>& args, std::ostream& out);
int cmd_generate(const GenerateOpts& o, const std::vector<std::string>& args, std::ostream& out);

}  // namespace lrpd::cli
