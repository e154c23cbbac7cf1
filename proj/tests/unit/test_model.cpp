#include <gtest/gtest.h>

#include <cmath>

#include "lrpd/alt.hpp"
#include "lrpd/errors.hpp"
#include "lrpd/model.hpp"
#include "lrpd/naive.hpp"
#include "support/oracles.hpp"

using namespace lrpd;

TEST(BlockPartition, ValidatesCoverAndDisjointness) {
    EXPECT_THROW(BlockPartition({{0, 1}, {}}, 2), std::invalid_argument);
    EXPECT_THROW(BlockPartition({{0, 1}, {1}}, 2), std::invalid_argument);
    EXPECT_THROW(BlockPartition({{0}}, 2), std::invalid_argument);
    EXPECT_THROW(BlockPartition({{0, 2}}, 2), std::invalid_argument);
    EXPECT_THROW(BlockPartition({{-1, 0, 1}}, 2), std::invalid_argument);
}

TEST(BlockPartition, CanonicalOrderMakesRelabelingsEqual) {
    const BlockPartition a({{3, 1}, {0, 2}}, 4);
    const BlockPartition b({{0, 2}, {1, 3}}, 4);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.block(0), (std::vector<Index>{0, 2}));
}

TEST(BlockPartition, Factories) {
    EXPECT_EQ(BlockPartition::singletons(3).count(), 3u);
    EXPECT_EQ(BlockPartition::whole(3).count(), 1u);
    const BlockPartition c = BlockPartition::contiguous(10, 3);
    EXPECT_EQ(c.count(), 3u);
    std::size_t total = 0;
    for (const auto& b : c.blocks()) total += b.size();
    EXPECT_EQ(total, 10u);
    const BlockPartition l = BlockPartition::from_labels({2, 0, 2, 0, 5});
    EXPECT_EQ(l, BlockPartition({{0, 2}, {1, 3}, {4}}, 5));
}

TEST(BlockPartition, JsonRoundTripAndErrors) {
    const BlockPartition p({{4, 0}, {1, 2, 3}}, 5);
    EXPECT_EQ(BlockPartition::from_json(p.to_json()), p);
    EXPECT_EQ(BlockPartition::from_json(R"({"blocks": [[1], [0]]})"), BlockPartition::singletons(2));
    EXPECT_THROW(BlockPartition::from_json("{"), InputError);
    EXPECT_THROW(BlockPartition::from_json(R"({"n": 3, "blocks": [[0, 1]]})"), InputError);
    EXPECT_THROW(BlockPartition::from_json(R"({"n": 2, "blocks": "x"})"), InputError);
}

TEST(Reconstruct, WorkedExample) {
    Matrix u(2, 1);
    u << 1, 1;
    const LrpdModel m = LrpdModel::diagonal(u, Vector::Constant(2, 0.5), ModelSource::naive, false);
    Matrix expected(2, 2);
    expected << 1.5, 1, 1, 1.5;
    EXPECT_EQ(reconstruct(m).dense(), expected);
}

TEST(Reconstruct, ZeroModel) {
    const LrpdModel m = LrpdModel::diagonal(Matrix::Zero(3, 0), Vector::Zero(3), ModelSource::naive, false);
    EXPECT_EQ(reconstruct(m).dense().norm(), 0.0);
}

TEST(Reconstruct, DiagonalRefitReproducesDiag) {
    const Matrix u = oracle::gaussian(9, 3, 1);
    const Vector d = oracle::gaussian(9, 1, 2).col(0).cwiseAbs();
    const LrpdModel m = LrpdModel::diagonal(u, d, ModelSource::alternating, true);
    const Vector refit = reconstruct(m).diag() - (u * u.transpose()).diagonal();
    EXPECT_LT((refit - d).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Model, RejectsShapeMismatch) {
    EXPECT_THROW(LrpdModel::diagonal(Matrix::Zero(3, 1), Vector::Zero(2), ModelSource::naive, false),
                 std::invalid_argument);
    EXPECT_THROW(LrpdModel::block_diagonal(Matrix::Zero(3, 1), BlockPartition::whole(3),
                                           {Matrix::Zero(2, 2)}, ModelSource::alternating_block),
                 std::invalid_argument);
}

TEST(Model, BlockCorrectionIsDense) {
    Matrix b0(2, 2);
    b0 << 2, 1, 1, 2;
    Matrix b1(1, 1);
    b1 << 4;
    const BlockPartition p({{0, 2}, {1}}, 3);
    const LrpdModel m =
        LrpdModel::block_diagonal(Matrix::Zero(3, 1), p, {b0, b1}, ModelSource::alternating_block);
    Matrix expected(3, 3);
    expected << 2, 0, 1, 0, 4, 0, 1, 0, 2;
    EXPECT_EQ(m.correction().dense(), expected);
    EXPECT_EQ(m.diag(), Vector::Map(std::vector<double>{2, 4, 2}.data(), 3));
}

TEST(RelFroError, Examples) {
    const SymMatrix a = SymMatrix::symmetrize(oracle::random_psd(5, 4));
    const LrpdModel zero =
        LrpdModel::diagonal(Matrix::Zero(5, 1), Vector::Zero(5), ModelSource::naive, false);
    EXPECT_DOUBLE_EQ(rel_fro_error(zero, a), 1.0);
    EXPECT_THROW(rel_fro_error(zero, SymMatrix::zero(5)), std::invalid_argument);

    const Matrix g = oracle::gaussian(6, 2, 5);
    const Vector d = Vector::LinSpaced(6, 1, 2);
    const SymMatrix exact = SymMatrix::symmetrize(g * g.transpose() + Matrix(d.asDiagonal()));
    EXPECT_LT(rel_fro_error(LrpdModel::diagonal(g, d, ModelSource::naive, false), exact), 1e-12);
}

TEST(RelFroError, IdentityPlusRankOneAfterOneStep) {
    Matrix s(2, 2);
    s << 1.5, 0.5, 0.5, 1.5;
    const SymMatrix a(s);
    const double err = rel_fro_error(naive_decompose(a, 1).model, a);
    EXPECT_NEAR(err, (1.0 / std::sqrt(2.0)) / std::sqrt(5.0), 1e-14);
    EXPECT_NEAR(err, 0.3162, 1e-4);
}

TEST(DiagSupError, Examples) {
    const Vector d = Vector::LinSpaced(4, 0, 3);
    const LrpdModel m = LrpdModel::diagonal(Matrix::Zero(4, 1), d, ModelSource::naive, false);
    EXPECT_EQ(diag_sup_error(m, d), 0.0);
    EXPECT_DOUBLE_EQ(diag_sup_error(m, d + Vector::Unit(4, 0)), 1.0);
}

TEST(ConvergenceTrace, EnforcesOrdering) {
    ConvergenceTrace t;
    t.append({1, 0.5, std::nullopt, 10, 1.0});
    EXPECT_THROW(t.append({1, 0.4, std::nullopt, 10, 1.0}), std::logic_error);
    EXPECT_THROW(t.append({2, 0.4, std::nullopt, 5, 1.0}), std::logic_error);
    t.append({2, 0.25, 0.125, 20, 0.5});
    EXPECT_EQ(t.size(), 2u);
}

TEST(ConvergenceTrace, CsvAndJson) {
    ConvergenceTrace t;
    t.append({1, 0.5, std::nullopt, 0, 2.0});
    t.append({2, 0.25, 0.125, 0, 1.0});
    EXPECT_EQ(t.to_csv(), std::string(ConvergenceTrace::kCsvHeader) +
                              "\n1,0.5,,0,2\n2,0.25,0.125,0,1\n");
    const std::string js = t.to_json();
    EXPECT_NE(js.find("null"), std::string::npos);
    EXPECT_NE(js.find("0.125"), std::string::npos);
}

TEST(Model, ScaleInvarianceOfAltAndNaive) {
    const Matrix g = oracle::gaussian(30, 3, 8);
    const Vector d = Vector::LinSpaced(30, 0.5, 2.0);
    const SymMatrix a = SymMatrix::symmetrize(g * g.transpose() + Matrix(d.asDiagonal()));
    AltConfig cfg;
    cfg.rank = 3;
    cfg.max_iters = 5;
    const FitResult base = alt_fit(a, cfg);
    for (double alpha : {0.5, 3.0}) {
        const SymMatrix scaled = alpha * a;
        const FitResult r = alt_fit(scaled, cfg);
        for (std::size_t i = 0; i < base.trace.size(); ++i) {
            EXPECT_NEAR(r.trace.records()[i].rel_fro_error, base.trace.records()[i].rel_fro_error,
                        1e-10);
        }
        EXPECT_LT((r.model.diag() - alpha * base.model.diag()).cwiseAbs().maxCoeff(),
                  1e-9 * alpha * base.model.diag().cwiseAbs().maxCoeff());
        EXPECT_NEAR(rel_fro_error(naive_decompose(scaled, 3).model, scaled),
                    rel_fro_error(naive_decompose(a, 3).model, a), 1e-12);
    }
}
