#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lrpd/model.hpp"

namespace lrpd::cli {

/// A checked property failed; maps to exit code 3.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// $LRPD_OUT_DIR, else "lrpd_out".
std::string default_out_dir();

/// "sha256:<hex>" of the file contents.
std::string file_digest(const std::string& path);

/// Drops every --out / --out=<dir> occurrence.
std::vector<std::string> strip_out_flag(const std::vector<std::string>& args);

struct Manifest {
    std::string command;
    std::vector<std::string> args;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    /// (path, digest) for every file the command read.
    std::vector<std::pair<std::string, std::string>> inputs;

    std::string to_json() const;
    static Manifest from_json(const std::string& text);
};

/// Atomic writer rooted at one output directory.
class Outputs {
public:
    explicit Outputs(std::string dir) : dir_(std::move(dir)) {}

    const std::string& dir() const noexcept { return dir_; }
    std::string path(const std::string& name) const;
    void write(const std::string& name, const std::string& contents) const;
    void write_manifest(const Manifest& m) const { write("manifest.json", m.to_json()); }

private:
    std::string dir_;
};

struct Curve {
    std::string name;
    ConvergenceTrace trace;
};

/// Per-curve trace CSVs plus combined.csv with a leading curve column.
void write_curves(const Outputs& out, const std::vector<Curve>& curves);

std::string fmt(double x);

}  // namespace lrpd::cli
