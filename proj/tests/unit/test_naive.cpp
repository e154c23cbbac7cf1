#include <gtest/gtest.h>

#include <cmath>

#include "lrpd/naive.hpp"
#include "support/oracles.hpp"

using namespace lrpd;

namespace {

SymMatrix two_by_two(double a, double b) {
    Matrix m(2, 2);
    m << a, b, b, a;
    return SymMatrix(m);
}

}  // namespace

TEST(Naive, RemarkExample) {
    const NaiveResult r = naive_decompose(two_by_two(2, 1), 1);
    EXPECT_NEAR(r.model.diag()(0), 0.5, 1e-15);
    EXPECT_NEAR(r.model.diag()(1), 0.5, 1e-15);
    EXPECT_NEAR(r.residual_spectral, 0.5, 1e-14);
    EXPECT_NEAR(r.tail_eigenvalue, 1.0, 1e-14);
}

TEST(Naive, IdentityPlusRankOneExample) {
    const NaiveResult r = naive_decompose(two_by_two(1.5, 0.5), 1);
    const Matrix u = r.model.factor();
    EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-14);
    EXPECT_NEAR(u(0, 0), u(1, 0), 1e-14);
    EXPECT_NEAR(r.model.diag()(0), 0.5, 1e-14);
    EXPECT_NEAR(r.model.diag()(1), 0.5, 1e-14);
    EXPECT_NEAR(r.residual_spectral, 0.5, 1e-14);
    Matrix residual = two_by_two(1.5, 0.5).dense() - reconstruct(r.model).dense();
    Matrix expected(2, 2);
    expected << 0, -0.5, -0.5, 0;
    EXPECT_LT((residual - expected).norm(), 1e-14);
}

TEST(Naive, ExactLowRankHasZeroDiagAndResidual) {
    const Matrix g = oracle::gaussian(10, 3, 12);
    const SymMatrix a = SymMatrix::symmetrize(g * g.transpose());
    const NaiveResult r = naive_decompose(a, 3);
    EXPECT_LT(r.model.diag().cwiseAbs().maxCoeff(), 1e-12 * a.dense().norm());
    EXPECT_LT(r.residual_spectral, 1e-12 * a.dense().norm());
}

TEST(Naive, RejectsInvalidInput) {
    EXPECT_THROW(naive_decompose(two_by_two(0, 1), 1), std::domain_error);
    EXPECT_THROW(naive_decompose(two_by_two(2, 1), 3), std::invalid_argument);
    EXPECT_THROW(naive_decompose(two_by_two(2, 1), -1), std::invalid_argument);
}

TEST(Naive, FullRankGivesZeroTail) {
    const NaiveResult r = naive_decompose(two_by_two(2, 1), 2);
    EXPECT_EQ(r.tail_eigenvalue, 0.0);
    EXPECT_LT(r.residual_spectral, 1e-14);
}

// ||A - D_k - L_k||_2 < lambda_{k+1}(A) for full-rank A, and D_k is the
// nonnegative diagonal of A - L_k.
TEST(Naive, ResidualBoundedByTailOnRandomPsd) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Index n = 4 + static_cast<Index>(seed % 9);
        const SymMatrix a = SymMatrix::symmetrize(oracle::random_psd(n, 300 + seed));
        const Index k = 1 + static_cast<Index>(seed % static_cast<std::uint64_t>(n - 1));
        const NaiveResult r = naive_decompose(a, k);
        const Vector ev = oracle::jacobi_eigenvalues(a.dense());
        EXPECT_NEAR(r.tail_eigenvalue, ev(k), 1e-10);
        const Matrix u = r.model.factor();
        const Vector refit = (a.dense() - u * u.transpose()).diagonal();
        EXPECT_LT((refit - r.model.diag()).cwiseAbs().maxCoeff(), 1e-12);
        const Matrix resid = a.dense() - reconstruct(r.model).dense();
        EXPECT_LT(resid.diagonal().cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_GE(r.model.diag().minCoeff(), -1e-12);
        EXPECT_LT(r.residual_spectral, ev(k));
    }
}

TEST(DiagFirst, RemarkCounterexample) {
    const DiagFirstResult r = diag_first_residual(two_by_two(2, 1));
    Matrix expected(2, 2);
    expected << 0, 1, 1, 0;
    EXPECT_EQ(r.residual.dense(), expected);
    EXPECT_NEAR(r.spectral, 1.0, 1e-14);
    EXPECT_FALSE(r.is_psd);
}

TEST(DiagFirst, DiagonalInputAndRandomPsd) {
    const DiagFirstResult d = diag_first_residual(SymMatrix::diagonal(Vector::LinSpaced(4, 1, 4)));
    EXPECT_EQ(d.residual.dense().norm(), 0.0);
    EXPECT_TRUE(d.is_psd);
    const DiagFirstResult r = diag_first_residual(SymMatrix::symmetrize(oracle::random_psd(6, 77)));
    EXPECT_FALSE(r.is_psd);
}
