#include "common.hpp"

#include <cstdlib>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "lrpd/errors.hpp"
#include "lrpd/io.hpp"
#include "lrpd/version.hpp"

namespace lrpd::cli {

std::string default_out_dir() {
    const char* env = std::getenv("LRPD_OUT_DIR");
    return env && *env ? std::string(env) : std::string("lrpd_out");
}

std::string file_digest(const std::string& path) {
    const std::string data = read_file(path);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed for " + path);
    }
    std::ostringstream hex;
    hex << "sha256:";
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return hex.str();
}

std::vector<std::string> strip_out_flag(const std::vector<std::string>& args) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out") {
            ++i;
            continue;
        }
        if (args[i].rfind("--out=", 0) == 0) continue;
        kept.push_back(args[i]);
    }
    return kept;
}

std::string Manifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["args"] = args;
    j["params"] = params;
    j["seed"] = seed;
    nlohmann::json in = nlohmann::json::array();
    for (const auto& [p, d] : inputs) in.push_back({{"path", p}, {"digest", d}});
    j["inputs"] = in;
    j["version"] = version();
    return j.dump(2) + "\n";
}

Manifest Manifest::from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        Manifest m;
        m.command = j.at("command").get<std::string>();
        m.args = j.at("args").get<std::vector<std::string>>();
        m.params = j.value("params", nlohmann::json::object());
        m.seed = j.value("seed", std::uint64_t{0});
        for (const auto& e : j.value("inputs", nlohmann::json::array())) {
            m.inputs.emplace_back(e.at("path").get<std::string>(), e.at("digest").get<std::string>());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("manifest: ") + e.what());
    }
}

std::string Outputs::path(const std::string& name) const { return dir_ + "/" + name; }

void Outputs::write(const std::string& name, const std::string& contents) const {
    write_file_atomic(path(name), contents);
}

void write_curves(const Outputs& out, const std::vector<Curve>& curves) {
    std::string combined = std::string("curve,") + ConvergenceTrace::kCsvHeader + "\n";
    for (const auto& c : curves) {
        const std::string csv = c.trace.to_csv();
        out.write(c.name + ".csv", csv);
        std::istringstream lines(csv);
        std::string line;
        std::getline(lines, line);
        while (std::getline(lines, line)) combined += c.name + "," + line + "\n";
    }
    out.write("combined.csv", combined);
}

std::string fmt(double x) { return format_double(x); }

}  // namespace lrpd::cli
