#include "lrpd/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <vector>

#include "lrpd/errors.hpp"

namespace lrpd {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        const auto line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
        lines.push_back(line);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

}  // namespace

SymMatrix parse_matrix_csv(std::string_view text, double rel_tol) {
    const auto lines = split_lines(text);
    if (lines.empty()) {
        throw InputError("matrix csv: no rows");
    }
    const auto n = static_cast<Index>(lines.size());
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        std::string_view line = lines[static_cast<std::size_t>(i)];
        Index j = 0;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            const auto cell = trim(line.substr(pos, comma == line.npos ? line.npos : comma - pos));
            if (j >= n) {
                throw InputError("matrix csv: row " + std::to_string(i + 1) + " has more than " +
                                 std::to_string(n) + " columns");
            }
            double value = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() ||
                !std::isfinite(value)) {
                throw InputError("matrix csv: row " + std::to_string(i + 1) + ", column " +
                                 std::to_string(j + 1) + ": cannot parse '" + std::string(cell) +
                                 "'");
            }
            m(i, j++) = value;
            if (comma == line.npos) break;
            pos = comma + 1;
        }
        if (j != n) {
            throw InputError("matrix csv: row " + std::to_string(i + 1) + " has " +
                             std::to_string(j) + " columns, expected " + std::to_string(n));
        }
    }
    try {
        return SymMatrix(std::move(m), rel_tol);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("matrix csv: ") + e.what());
    }
}

SymMatrix read_matrix_csv(const std::string& path, double rel_tol) {
    return parse_matrix_csv(read_file(path), rel_tol);
}

std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string vector_to_csv(const Vector& v) {
    std::string out;
    for (Index i = 0; i < v.size(); ++i) {
        out += format_double(v(i));
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, std::string_view contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!f) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace lrpd
