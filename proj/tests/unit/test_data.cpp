#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "lrpd/data.hpp"
#include "lrpd/errors.hpp"
#include "support/oracles.hpp"

using namespace lrpd;

namespace {

SynthSpec spec_of(SynthModel model, Index n, Index k, std::uint64_t seed) {
    SynthSpec s;
    s.model = model;
    s.n = n;
    s.k_true = k;
    s.seed = seed;
    if (model == SynthModel::decaying_spectrum) {
        s.diag_lo = 0.2;
        s.diag_hi = 1.2;
    }
    return s;
}

ReturnsMatrix random_returns(Index t, Index n, std::uint64_t seed) {
    ReturnsMatrix r;
    r.returns = 0.01 * oracle::gaussian(t, n, seed);
    for (Index j = 0; j < n; ++j) r.labels.push_back("A" + std::to_string(j));
    return r;
}

}  // namespace

TEST(GenExact, PlantedRankAndDiagonalRange) {
    const SynthInstance inst = gen_exact_lrpd(spec_of(SynthModel::exact_lrpd, 150, 5, 0));
    const Vector ev = oracle::jacobi_eigenvalues(inst.l_star.dense());
    EXPECT_GT(ev(4), 1.0);
    EXPECT_LT(std::abs(ev(5)), 1e-9 * ev(0));
    EXPECT_GE(inst.d_star.minCoeff(), 0.0);
    EXPECT_LE(inst.d_star.maxCoeff(), 10.0);
    EXPECT_EQ(inst.a.dense(), inst.a0.dense());
    const Matrix rebuilt = inst.factor * inst.factor.transpose() + Matrix(inst.d_star.asDiagonal());
    EXPECT_LT((rebuilt - inst.a.dense()).norm(), 1e-10);
}

TEST(GenExact, RankZeroIsDiagonal) {
    const SynthInstance inst = gen_exact_lrpd(spec_of(SynthModel::exact_lrpd, 10, 0, 1));
    Matrix off = inst.a.dense();
    off.diagonal().setZero();
    EXPECT_EQ(off.norm(), 0.0);
}

TEST(GenExact, DeterministicPerSeed) {
    const auto s = spec_of(SynthModel::exact_lrpd, 30, 3, 42);
    EXPECT_EQ(gen_exact_lrpd(s).a.dense(), gen_exact_lrpd(s).a.dense());
    auto s2 = s;
    s2.seed = 43;
    EXPECT_NE(gen_exact_lrpd(s).a.dense(), gen_exact_lrpd(s2).a.dense());
}

TEST(GenDecaying, NoNoiseMeansNoiselessMatrix) {
    const SynthInstance inst = gen_decaying_spectrum(spec_of(SynthModel::decaying_spectrum, 40, 4, 2));
    EXPECT_EQ(inst.a.dense(), inst.a0.dense());
    EXPECT_EQ(inst.noise_scale, 0.0);
    for (Index j = 0; j < 4; ++j) {
        const double w = 3.0 - 2.0 * static_cast<double>(j) / 3.0;
        EXPECT_NEAR(inst.factor.col(j).norm(), w, 1e-12);
    }
    EXPECT_GE(inst.d_star.minCoeff(), 0.2);
    EXPECT_LE(inst.d_star.maxCoeff(), 1.2);
}

TEST(GenDecaying, SnrRoundTrip) {
    for (double snr : {20.0, 60.0, 120.0}) {
        auto s = spec_of(SynthModel::decaying_spectrum, 60, 5, 3);
        s.snr_db = snr;
        const SynthInstance inst = gen_decaying_spectrum(s);
        EXPECT_NEAR(realized_snr_db(inst.a, inst.a0), snr, 1e-6);
        const double ratio = (inst.a.dense() - inst.a0.dense()).norm() / inst.a0.dense().norm();
        EXPECT_NEAR(ratio, std::pow(10.0, -snr / 20.0), 1e-9 * std::pow(10.0, -snr / 20.0) + 1e-15);
    }
}

TEST(SynthSpec, Validation) {
    auto s = spec_of(SynthModel::exact_lrpd, 5, 6, 0);
    EXPECT_THROW(generate(s), std::invalid_argument);
    s.k_true = 2;
    s.diag_lo = 2;
    s.diag_hi = 1;
    EXPECT_THROW(generate(s), std::invalid_argument);
}

TEST(Returns, ParsesFixture) {
    const ReturnsMatrix r = read_returns_csv(std::string(LRPD_FIXTURE_DIR) + "/returns_30x504.csv");
    EXPECT_EQ(r.returns.rows(), 504);
    EXPECT_EQ(r.returns.cols(), 30);
    EXPECT_EQ(r.labels.size(), 30u);
}

TEST(Returns, DiagnosticsNameRowAndColumn) {
    EXPECT_THROW(parse_returns_csv(""), InputError);
    EXPECT_THROW(parse_returns_csv("A,B\n"), InputError);
    try {
        parse_returns_csv("A,B\n0.1,0.2\n0.3,nan\n");
        FAIL();
    } catch (const InputError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
        EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
    }
    EXPECT_THROW(parse_returns_csv("A,B\n0.1,\n"), InputError);
    EXPECT_THROW(parse_returns_csv("A,B\n0.1\n"), InputError);
    EXPECT_THROW(parse_returns_csv("A,B\n0.1,x\n"), InputError);
}

TEST(Covariance, MatchesTwoPassOracle) {
    const ReturnsMatrix r = random_returns(500, 30, 7);
    const SymMatrix c = covariance_from_returns(r);
    const Matrix ref = oracle::covariance(r.returns);
    EXPECT_LT((c.dense() - ref).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(oracle::jacobi_eigenvalues(c.dense()).minCoeff(), -1e-14);
}

TEST(Covariance, IdenticalColumnsAndSingleAsset) {
    ReturnsMatrix r = random_returns(20, 2, 1);
    r.returns.col(1) = r.returns.col(0);
    const SymMatrix c = covariance_from_returns(r);
    EXPECT_NEAR(c(0, 1), c(0, 0), 1e-18);
    EXPECT_NEAR(c(1, 1), c(0, 0), 1e-18);

    ReturnsMatrix one;
    one.returns.resize(4, 1);
    one.returns << 1, 2, 3, 6;
    one.labels = {"X"};
    EXPECT_NEAR(covariance_from_returns(one)(0, 0), 14.0 / 3.0, 1e-14);

    ReturnsMatrix tiny;
    tiny.returns = Matrix::Ones(1, 2);
    tiny.labels = {"X", "Y"};
    EXPECT_THROW(covariance_from_returns(tiny), std::invalid_argument);
}

TEST(Kmeans, RecoversPlantedBlocks) {
    Matrix a = Matrix::Identity(12, 12) * 0.1;
    for (Index i = 0; i < 12; ++i)
        for (Index j = 0; j < 12; ++j)
            if (i % 3 == j % 3) a(i, j) += 1.0;
    const BlockPartition p = kmeans_partition(SymMatrix(a), 3, 5);
    EXPECT_EQ(p, BlockPartition({{0, 3, 6, 9}, {1, 4, 7, 10}, {2, 5, 8, 11}}, 12));
}

TEST(Kmeans, DegenerateClusterCounts) {
    const SymMatrix a = SymMatrix::symmetrize(oracle::random_psd(8, 2) + Matrix::Identity(8, 8));
    EXPECT_EQ(kmeans_partition(a, 1, 0), BlockPartition::whole(8));
    EXPECT_EQ(kmeans_partition(a, 8, 0), BlockPartition::singletons(8));
    EXPECT_THROW(kmeans_partition(a, 9, 0), std::invalid_argument);
    EXPECT_THROW(kmeans_partition(a, 0, 0), std::invalid_argument);
}

TEST(Kmeans, ObjectiveNonIncreasingAndDeterministic) {
    const Matrix pts = oracle::gaussian(200, 4, 3);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const KmeansResult r = kmeans(pts, 6, seed);
        for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
            EXPECT_LE(r.objective_history[i], r.objective_history[i - 1] + 1e-12);
        }
        std::set<Index> used(r.labels.begin(), r.labels.end());
        EXPECT_EQ(used.size(), 6u);
        EXPECT_EQ(kmeans(pts, 6, seed).labels, r.labels);
    }
}

TEST(Kmeans, DuplicatePointsStillFillEveryCluster) {
    Matrix pts = Matrix::Zero(6, 2);
    pts.row(5) << 1, 1;
    const KmeansResult r = kmeans(pts, 3, 0);
    std::set<Index> used(r.labels.begin(), r.labels.end());
    EXPECT_EQ(used.size(), 3u);
}

TEST(Spectrum, Examples) {
    EXPECT_LT((spectrum_report(SymMatrix::identity(4)) - Vector::Ones(4)).norm(), 1e-15);
    const Vector u = Vector::LinSpaced(5, 1, 5);
    const Vector s = spectrum_report(SymMatrix::symmetrize(u * u.transpose()));
    EXPECT_NEAR(s(0), u.squaredNorm(), 1e-12);
    EXPECT_LT(s.tail(4).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Spectrum, MarketFactorDominates) {
    const Index t = 500, n = 20;
    const Matrix mkt = oracle::gaussian(t, 1, 1);
    const Matrix noise = 0.3 * oracle::gaussian(t, n, 2);
    ReturnsMatrix r;
    r.returns = mkt * Vector::LinSpaced(n, 0.8, 1.2).transpose() + noise;
    r.labels.assign(static_cast<std::size_t>(n), "X");
    const SymMatrix c = covariance_from_returns(r);
    const Vector s = spectrum_report(c);
    EXPECT_GE(s(0) / s(1), 5.0);
    const EigDecomp e = eig_sym(c);
    const Vector v = e.vectors.col(0);
    EXPECT_TRUE((v.array() > 0).all() || (v.array() < 0).all());
}
