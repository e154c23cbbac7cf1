#include "lrpd/data.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lrpd/errors.hpp"
#include "lrpd/io.hpp"
#include "lrpd/rng.hpp"

namespace lrpd {

void SynthSpec::validate() const {
    if (n < 1) throw std::invalid_argument("SynthSpec: n must be >= 1");
    if (k_true < 0 || k_true > n) throw std::invalid_argument("SynthSpec: need 0 <= k_true <= n");
    if (!std::isfinite(diag_lo) || !std::isfinite(diag_hi) || diag_lo > diag_hi) {
        throw std::invalid_argument("SynthSpec: diagonal range must satisfy lo <= hi");
    }
    if (snr_db && !std::isfinite(*snr_db)) throw std::invalid_argument("SynthSpec: snr_db must be finite");
}

namespace {

Vector uniform_diag(const SynthSpec& spec) {
    Rng rng(derive_seed(spec.seed, "diag"));
    Vector d(spec.n);
    if (spec.diag_lo == spec.diag_hi) {
        d.setConstant(spec.diag_lo);
        return d;
    }
    std::uniform_real_distribution<double> u(spec.diag_lo, spec.diag_hi);
    for (Index i = 0; i < spec.n; ++i) d(i) = u(rng);
    return d;
}

SynthInstance assemble(const SynthSpec& spec, Matrix factor, Vector d) {
    Matrix l = factor * factor.transpose();
    Matrix a0 = l;
    a0.diagonal() += d;
    SynthInstance out{SymMatrix::symmetrize(a0), SymMatrix::symmetrize(a0), std::move(d),
                      SymMatrix::symmetrize(l), std::move(factor), 0.0};
    if (spec.snr_db) {
        Rng rng(derive_seed(spec.seed, "noise"));
        const Matrix g = gaussian_matrix(spec.n, spec.n, rng);
        const Matrix noise = (g + g.transpose()) / 2.0;
        const double nn = noise.squaredNorm();
        if (nn > 0.0) {
            out.noise_scale = std::sqrt(out.a0.dense().squaredNorm() /
                                        (nn * std::pow(10.0, *spec.snr_db / 10.0)));
            out.a = SymMatrix::symmetrize(out.a0.dense() + out.noise_scale * noise);
        }
    }
    return out;
}

}  // namespace

SynthInstance gen_exact_lrpd(const SynthSpec& spec) {
    spec.validate();
    if (spec.model != SynthModel::exact_lrpd) {
        throw std::invalid_argument("gen_exact_lrpd: spec asks for a different model");
    }
    Rng rng(derive_seed(spec.seed, "factor"));
    Matrix g = gaussian_matrix(spec.n, spec.k_true, rng);
    return assemble(spec, std::move(g), uniform_diag(spec));
}

SynthInstance gen_decaying_spectrum(const SynthSpec& spec) {
    spec.validate();
    if (spec.model != SynthModel::decaying_spectrum) {
        throw std::invalid_argument("gen_decaying_spectrum: spec asks for a different model");
    }
    Rng rng(derive_seed(spec.seed, "factor"));
    Matrix u0 = gaussian_matrix(spec.n, spec.k_true, rng);
    for (Index j = 0; j < u0.cols(); ++j) u0.col(j).normalize();
    Vector w = Vector::LinSpaced(spec.k_true, 3.0, 1.0);
    if (spec.k_true == 1) w(0) = 3.0;
    return assemble(spec, u0 * w.asDiagonal(), uniform_diag(spec));
}

SynthInstance generate(const SynthSpec& spec) {
    return spec.model == SynthModel::exact_lrpd ? gen_exact_lrpd(spec) : gen_decaying_spectrum(spec);
}

double realized_snr_db(const SymMatrix& a, const SymMatrix& a0) {
    const double noise = (a.dense() - a0.dense()).squaredNorm();
    if (noise == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(a0.dense().squaredNorm() / noise);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next == s.npos ? s.npos : next - pos));
        if (next == s.npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace

ReturnsMatrix parse_returns_csv(const std::string& text) {
    auto lines = split(text, '\n');
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw InputError("returns csv: missing header row");

    ReturnsMatrix out;
    for (auto cell : split(lines[0], ',')) {
        cell = trim(cell);
        if (cell.empty()) throw InputError("returns csv: empty ticker in header");
        out.labels.emplace_back(cell);
    }
    const auto n = static_cast<Index>(out.labels.size());
    const auto rows = static_cast<Index>(lines.size()) - 1;
    if (rows < 1) throw InputError("returns csv: no observations");
    out.returns.resize(rows, n);
    for (Index t = 0; t < rows; ++t) {
        const auto cells = split(lines[static_cast<std::size_t>(t + 1)], ',');
        const std::string where = "returns csv: row " + std::to_string(t + 2);
        if (static_cast<Index>(cells.size()) != n) {
            throw InputError(where + " has " + std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(n));
        }
        for (Index j = 0; j < n; ++j) {
            const auto cell = trim(cells[static_cast<std::size_t>(j)]);
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() ||
                !std::isfinite(v)) {
                throw InputError(where + ", column " + std::to_string(j + 1) + " (" +
                                 out.labels[static_cast<std::size_t>(j)] + "): cannot parse '" +
                                 std::string(cell) + "'");
            }
            out.returns(t, j) = v;
        }
    }
    return out;
}

ReturnsMatrix read_returns_csv(const std::string& path) {
    return parse_returns_csv(read_file(path));
}

SymMatrix covariance_from_returns(const ReturnsMatrix& r) {
    const Index t = r.returns.rows();
    if (t < 2) throw std::invalid_argument("covariance_from_returns: need at least 2 observations");
    if (r.returns.cols() < 1) throw std::invalid_argument("covariance_from_returns: no assets");
    const Matrix x = r.returns.rowwise() - r.returns.colwise().mean();
    return SymMatrix::symmetrize((x.transpose() * x) / static_cast<double>(t - 1));
}

Matrix correlation_features(const SymMatrix& a) {
    const Index n = a.size();
    Matrix c(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const double s = a(i, i) * a(j, j);
            c(i, j) = s > 0.0 ? a(i, j) / std::sqrt(s) : (i == j ? 1.0 : 0.0);
        }
    }
    return c;
}

namespace {

struct Assignment {
    std::vector<Index> labels;
    Vector dist;  // squared distance to the assigned centroid
};

Assignment assign(const Matrix& x, const Matrix& c) {
    Assignment a{std::vector<Index>(static_cast<std::size_t>(x.rows())), Vector(x.rows())};
    for (Index i = 0; i < x.rows(); ++i) {
        Index best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < c.rows(); ++j) {
            const double dd = (x.row(i) - c.row(j)).squaredNorm();
            if (dd < bd) {
                bd = dd;
                best = j;
            }
        }
        a.labels[static_cast<std::size_t>(i)] = best;
        a.dist(i) = bd;
    }
    return a;
}

// Moves the farthest point of a multi-member cluster into each empty cluster.
void fill_empty(const Matrix& x, Matrix& c, Assignment& a) {
    const Index m = c.rows();
    std::vector<Index> count(static_cast<std::size_t>(m), 0);
    for (Index l : a.labels) ++count[static_cast<std::size_t>(l)];
    for (Index j = 0; j < m; ++j) {
        if (count[static_cast<std::size_t>(j)] > 0) continue;
        Index pick = -1;
        for (Index i = 0; i < x.rows(); ++i) {
            const Index l = a.labels[static_cast<std::size_t>(i)];
            if (count[static_cast<std::size_t>(l)] < 2) continue;
            if (pick < 0 || a.dist(i) > a.dist(pick)) pick = i;
        }
        --count[static_cast<std::size_t>(a.labels[static_cast<std::size_t>(pick)])];
        a.labels[static_cast<std::size_t>(pick)] = j;
        a.dist(pick) = 0.0;
        count[static_cast<std::size_t>(j)] = 1;
        c.row(j) = x.row(pick);
    }
}

void update_centroids(const Matrix& x, const std::vector<Index>& labels, Matrix& c) {
    Matrix sum = Matrix::Zero(c.rows(), c.cols());
    Vector cnt = Vector::Zero(c.rows());
    for (Index i = 0; i < x.rows(); ++i) {
        sum.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
        cnt(labels[static_cast<std::size_t>(i)]) += 1.0;
    }
    for (Index j = 0; j < c.rows(); ++j) {
        if (cnt(j) > 0.0) c.row(j) = sum.row(j) / cnt(j);
    }
}

}  // namespace

KmeansResult kmeans(const Matrix& points, Index m, std::uint64_t seed, int max_iters) {
    const Index n = points.rows();
    if (m < 1 || m > n) {
        throw std::invalid_argument("kmeans: cluster count " + std::to_string(m) +
                                    " outside [1, " + std::to_string(n) + "]");
    }
    if (max_iters < 1) throw std::invalid_argument("kmeans: max_iters must be >= 1");

    Rng rng(derive_seed(seed, "kmeans"));
    Matrix c(m, points.cols());
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);
    Index first = std::uniform_int_distribution<Index>(0, n - 1)(rng);
    c.row(0) = points.row(first);
    chosen[static_cast<std::size_t>(first)] = 1;
    Vector d2 = (points.rowwise() - c.row(0)).rowwise().squaredNorm();
    for (Index j = 1; j < m; ++j) {
        std::vector<double> w(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = chosen[static_cast<std::size_t>(i)] ? 0.0 : d2(i);
        double total = 0.0;
        for (double v : w) total += v;
        if (!(total > 0.0)) {
            for (Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = chosen[static_cast<std::size_t>(i)] ? 0.0 : 1.0;
        }
        std::discrete_distribution<Index> pick(w.begin(), w.end());
        const Index p = pick(rng);
        chosen[static_cast<std::size_t>(p)] = 1;
        c.row(j) = points.row(p);
        d2 = d2.cwiseMin((points.rowwise() - c.row(j)).rowwise().squaredNorm());
    }

    KmeansResult res;
    Assignment a = assign(points, c);
    fill_empty(points, c, a);
    res.objective_history.push_back(a.dist.sum());
    for (int it = 1; it <= max_iters; ++it) {
        update_centroids(points, a.labels, c);
        Assignment next = assign(points, c);
        fill_empty(points, c, next);
        res.iterations = it;
        const bool same = next.labels == a.labels;
        a = std::move(next);
        res.objective_history.push_back(a.dist.sum());
        if (same) break;
    }
    res.labels = std::move(a.labels);
    res.centroids = std::move(c);
    return res;
}

BlockPartition kmeans_partition(const SymMatrix& a, Index m, std::uint64_t seed) {
    if (m < 1 || m > a.size()) {
        throw std::invalid_argument("kmeans_partition: need 1 <= m <= n");
    }
    return BlockPartition::from_labels(kmeans(correlation_features(a), m, seed).labels);
}

Vector spectrum_report(const SymMatrix& a) { return eigenvalues_sym(a); }

}  // namespace lrpd
