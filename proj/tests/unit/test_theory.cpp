#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "lrpd/alt.hpp"
#include "lrpd/data.hpp"
#include "lrpd/theory.hpp"
#include "support/oracles.hpp"

using namespace lrpd;

namespace {

Projector random_projector(Index n, Index k, std::uint64_t seed) {
    return Projector::from_basis(oracle::gaussian(n, k, seed));
}

}  // namespace

TEST(ContractionRecursion, Examples) {
    const std::vector<double> b = contraction_recursion(4.0, 1.0, 2);
    ASSERT_EQ(b.size(), 3u);
    EXPECT_DOUBLE_EQ(b[0], 1.0);
    EXPECT_DOUBLE_EQ(b[1], 0.5);
    EXPECT_DOUBLE_EQ(b[2], 1.0 / 6.0);
    for (double v : contraction_recursion(3.0, 0.0, 5)) EXPECT_EQ(v, 0.0);
}

TEST(ContractionRecursion, PreconditionAdvisesRescaling) {
    try {
        contraction_recursion(1.0, 0.25, 3);
        FAIL() << "expected domain_error";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("rescale"), std::string::npos);
    }
    const double alpha = contraction_rescale(1.0, 0.25);
    EXPECT_DOUBLE_EQ(alpha, 4.0);
    EXPECT_NO_THROW(contraction_recursion(alpha * 1.0, alpha * 0.25, 3));
    EXPECT_THROW(contraction_rescale(1.0, 0.5), std::domain_error);
}

TEST(LambdaOp, Extremes) {
    const Matrix e = oracle::gaussian(5, 5, 3);
    const Matrix sym = e + e.transpose();
    EXPECT_LT((lambda_op(Projector::from_basis(Matrix::Identity(5, 5)), sym) - sym).norm(), 1e-12);
    EXPECT_LT(lambda_op(Projector::coordinate(5, {}), sym).norm(), 1e-15);
}

TEST(LambdaOp, MatchesFirstOrderTruncationOfExactRankMatrix) {
    const Matrix g = oracle::gaussian(10, 3, 8);
    const SymMatrix l = SymMatrix::symmetrize(g * g.transpose());
    const Projector p = Projector::top_k(l, 3);
    const Matrix h = oracle::gaussian(10, 10, 9);
    const Matrix e = 1e-6 * (h + h.transpose());
    const SymMatrix perturbed = SymMatrix::symmetrize(l.dense() + e);
    const Matrix diff = truncate_top_k(eig_sym(perturbed), 3).dense() - l.dense();
    EXPECT_LT((diff - lambda_op(p, e)).norm(), 1e-9);
}

TEST(Jacobian, CoordinateProjectorIsAxisAlignedWithUnitNorm) {
    const Projector p = Projector::coordinate(4, {0, 1});
    const JacobianNorm j = jacobian_d_norm(p);
    EXPECT_DOUBLE_EQ(j.norm_inf, 1.0);
    EXPECT_TRUE(j.is_axis_aligned);
    EXPECT_TRUE(j.bound_agrees);
    const Matrix jm = jacobian_d_matrix(p);
    for (Index i = 0; i < 4; ++i) {
        const Vector expected = i < 2 ? Vector(Vector::Unit(4, i)) : Vector(Vector::Zero(4));
        EXPECT_EQ(jm * Vector::Unit(4, i), expected);
    }
}

TEST(Jacobian, TwoByTwoDiagonalDirection) {
    Matrix u(2, 1);
    u << 1, 1;
    const Projector p = Projector::from_basis(u);
    Matrix q(2, 2);
    q << 0.5, -0.5, -0.5, 0.5;
    EXPECT_LT((p.q() - q).norm(), 1e-15);
    Matrix expected(2, 2);
    expected << 0.75, -0.25, -0.25, 0.75;
    EXPECT_LT((jacobian_d_matrix(p) - expected).norm(), 1e-15);
    const JacobianNorm j = jacobian_d_norm(p);
    EXPECT_NEAR(j.norm_inf, 1.0, 1e-15);
    EXPECT_FALSE(j.is_axis_aligned);
}

TEST(Jacobian, ExactNormMatchesSignVectorOracle) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Index n = 6 + static_cast<Index>(seed % 4);
        const Index k = 1 + static_cast<Index>(seed % static_cast<std::uint64_t>(n - 1));
        const Projector p = random_projector(n, k, seed);
        const JacobianNorm j = jacobian_d_norm(p);
        EXPECT_NEAR(j.norm_inf, oracle::inf_norm_by_signs(jacobian_d_matrix(p)), 1e-12);
        // Row sums of delta_ij - Q_ij^2 with Q idempotent: 1 + Q_ii - 2 Q_ii^2.
        double closed = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double qi = p.q()(i, i);
            closed = std::max(closed, 1.0 + qi - 2.0 * qi * qi);
        }
        EXPECT_NEAR(j.norm_inf, closed, 1e-12);
    }
}

TEST(Jacobian, SpectralRadiusAtMostOne) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Projector p = random_projector(12, 1 + static_cast<Index>(seed % 11), 100 + seed);
        EXPECT_LE(jacobian_d_norm(p).spectral_radius, 1.0 + 1e-12);
    }
}

TEST(Jacobian, InfinityNormAtMostOneOnRandomProjectors) {
    int violations = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const double v = jacobian_d_norm(random_projector(8, 3, 200 + seed)).norm_inf;
        worst = std::max(worst, v);
        if (v > 1.0 + 1e-12) ++violations;
    }
    EXPECT_EQ(violations, 0) << "worst norm " << worst;
}

TEST(Projector, ValidatesInput) {
    EXPECT_THROW(Projector::coordinate(3, {3}), std::invalid_argument);
    const Projector p = Projector::from_basis(Matrix::Ones(4, 2));
    EXPECT_EQ(p.rank(), 1);
    EXPECT_LT((p.p() * p.p() - p.p()).norm(), 1e-14);
}

TEST(WeylGap, Examples) {
    const SymMatrix l = SymMatrix::diagonal((Vector(2) << 5, 0).finished());
    const WeylGap w = weyl_gap(l, Vector::Ones(2), 1);
    EXPECT_NEAR(w.gap_exact, 5.0, 1e-14);
    EXPECT_NEAR(w.gap_lower, 3.0, 1e-14);
    const WeylGap z = weyl_gap(l, Vector::Zero(2), 1);
    EXPECT_NEAR(z.gap_exact, 5.0, 1e-14);
    EXPECT_NEAR(z.gap_lower, 5.0, 1e-14);
}

TEST(WeylGap, LowerBoundHoldsOnRandomInstances) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Matrix g = oracle::gaussian(10, 3, 400 + seed);
        const SymMatrix l = SymMatrix::symmetrize(g * g.transpose());
        const Vector delta = oracle::gaussian(10, 1, 600 + seed).col(0);
        const WeylGap w = weyl_gap(l, delta, 3);
        EXPECT_GE(w.gap_exact, w.gap_lower - 1e-10);
    }
}

TEST(DavisKahan, HoldsUnderContractionPrecondition) {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SynthSpec spec;
        spec.n = 40;
        spec.k_true = 3;
        spec.diag_hi = 4.0;
        spec.seed = seed;
        const SynthInstance inst = gen_exact_lrpd(spec);
        if (!contraction_precheck(inst.l_star, inst.d_star, 3).satisfied) continue;
        ++checked;
        const DavisKahanCheck dk = davis_kahan_check(inst.l_star, inst.d_star, 3);
        EXPECT_LE(dk.projector_distance, dk.bound_exact_gap + 1e-10);
        EXPECT_LE(dk.projector_distance, dk.bound_weyl + 1e-10);
    }
    EXPECT_EQ(checked, 50);
}

TEST(DavisKahan, WeylBoundIsInfiniteWithoutGap) {
    const SymMatrix l = SymMatrix::diagonal((Vector(2) << 1, 0).finished());
    const DavisKahanCheck dk = davis_kahan_check(l, Vector::Ones(2), 1);
    EXPECT_EQ(dk.bound_weyl, std::numeric_limits<double>::infinity());
}

TEST(FirstOrder, ResidualDecaysQuadratically) {
    Vector vals = Vector::Zero(12);
    vals.head(3) << 9, 6, 4;
    const SymMatrix l = SymMatrix::symmetrize(oracle::planted(vals, 17));
    const Vector d = Vector::LinSpaced(12, 0.2, 1.0);
    const Vector dir = oracle::gaussian(12, 1, 18).col(0);
    const FirstOrderCheck fo = first_order_check(l, d, 3, dir, {1e-3, 1e-4, 1e-5});
    ASSERT_EQ(fo.ratios.size(), 2u);
    EXPECT_GE(fo.ratios[0], 50.0);
    EXPECT_LT(fo.extrapolated_slope_error, 1e-6);
}
