#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "spdmean/ajd.hpp"
#include "spdmean/geometry.hpp"
#include "test_util.hpp"

namespace spdmean {
namespace {

double off_diagonal(const Matrix& m) {
    return (m - Matrix(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
}

// Largest off-dominant |entry| / |dominant entry| over the rows of P,
// after checking that the dominant positions form a permutation.
double permutation_scaling_defect(const Matrix& p) {
    std::set<Eigen::Index> cols;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        Eigen::Index j = 0;
        const double dom = p.row(i).cwiseAbs().maxCoeff(&j);
        cols.insert(j);
        for (Eigen::Index c = 0; c < p.cols(); ++c)
            if (c != j) worst = std::max(worst, std::abs(p(i, c)) / dom);
    }
    return cols.size() == static_cast<std::size_t>(p.rows()) ? worst : 1.0;
}

TEST(Jd2, DiagonalizesPairExactly) {
    const SpdMatrix c1 = random_spd(5, test::key(1, 600));
    const SpdMatrix c2 = random_spd(5, test::key(2, 600));
    const Diagonalizer d = jd2(c1, c2);
    EXPECT_LT(test::max_abs(congruence(c1, d.b()).matrix() - Matrix::Identity(5, 5)), 1e-12);
    EXPECT_LT(off_diagonal(congruence(c2, d.b()).matrix()), 1e-12);
    EXPECT_LT(test::max_abs(d.a() * d.b() - Matrix::Identity(5, 5)), 1e-12);
}

TEST(Jd2, UnitScaledMixingGivesGeometricMean) {
    const SpdMatrix c1 = random_spd(4, test::key(3, 600));
    const SpdMatrix c2 = random_spd(4, test::key(4, 600));
    const Diagonalizer d = jd2_unit_scaled(c1, c2);
    const Matrix p = congruence(c1, d.b()).matrix() * congruence(c2, d.b()).matrix();
    EXPECT_LT(test::max_abs(p - Matrix::Identity(4, 4)), 1e-11);
    EXPECT_LT(test::max_abs(d.a() * d.a().transpose() - geomean2(c1, c2).matrix()), 1e-10);
}

TEST(Diagonalizer, RejectsSingular) {
    Matrix b = Matrix::Identity(3, 3);
    b(2, 2) = 0.0;
    EXPECT_THROW(Diagonalizer(b, 0.0), SingularMatrix);
}

TEST(AjdCriterion, ZeroForDiagonalSetAndPositiveOtherwise) {
    const MatrixSet diag_set({SpdMatrix(test::diag({1.0, 2.0})), SpdMatrix(test::diag({3.0, 0.5}))});
    EXPECT_NEAR(ajd_criterion(Matrix::Identity(2, 2), diag_set), 0.0, 1e-15);
    const MatrixSet set = test::random_set(4, 6, 601);
    EXPECT_GT(ajd_criterion(Matrix::Identity(4, 4), set), 0.0);
    EXPECT_THROW(ajd_criterion(Matrix::Identity(3, 3), set), DimensionError);
    Matrix singular = Matrix::Identity(4, 4);
    singular.row(3) = singular.row(2);
    EXPECT_THROW(ajd_criterion(singular, set), SingularMatrix);
}

TEST(AjdCriterion, InvariantToRowScalingAndPermutation) {
    const MatrixSet set = test::random_set(4, 6, 602);
    const Matrix b = gaussian_matrix(4, 4, test::key(5, 602));
    Matrix b2 = b;
    b2.row(0) *= -3.0;
    b2.row(2) *= 0.1;
    b2.row(1).swap(b2.row(3));
    EXPECT_NEAR(ajd_criterion(b, set), ajd_criterion(b2, set), 1e-10);
}

TEST(AjdPham, RecoversNoiselessMixing) {
    const GeneratedSet g = test::model_set(10, 100, 0.0, 3);
    const AjdReport rep = ajd_pham(g.set);
    EXPECT_TRUE(rep.converged);
    EXPECT_LT(rep.diagonalizer.criterion_value(), 1e-12);
    EXPECT_LT(permutation_scaling_defect(rep.diagonalizer.b() * g.a_true), 1e-6);
}

TEST(AjdPham, CriterionTraceNonIncreasingAndConverges) {
    for (double sigma : {0.01, 0.1, 1.0}) {
        const GeneratedSet g = test::model_set(8, 40, sigma, 11);
        const AjdReport rep = ajd_pham(g.set);
        EXPECT_TRUE(rep.converged) << sigma;
        ASSERT_EQ(rep.criterion_trace.size(), static_cast<std::size_t>(rep.sweeps) + 1);
        ASSERT_EQ(rep.decrement_db.size(), static_cast<std::size_t>(rep.sweeps));
        for (std::size_t i = 1; i < rep.criterion_trace.size(); ++i)
            EXPECT_LE(rep.criterion_trace[i], rep.criterion_trace[i - 1]);
        EXPECT_LT(rep.decrement_db.back(), -100.0);
        EXPECT_EQ(rep.criterion_trace.back(), rep.diagonalizer.criterion_value());
        EXPECT_GE(rep.diagonalizer.criterion_value(), 0.0);
    }
}

TEST(AjdPham, SweepCapReportedNotThrown) {
    const GeneratedSet g = test::model_set(8, 40, 1.0, 12);
    AjdConfig cfg;
    cfg.max_sweeps = 1;
    const AjdReport rep = ajd_pham(g.set, cfg);
    EXPECT_FALSE(rep.converged);
    EXPECT_EQ(rep.sweeps, 1);
}

TEST(AjdPham, PureSweepsAlsoConverge) {
    const GeneratedSet g = test::model_set(6, 30, 0.1, 13);
    AjdConfig cfg;
    cfg.newton_polish = false;
    const AjdReport rep = ajd_pham(g.set, cfg);
    EXPECT_TRUE(rep.converged);
    for (std::size_t i = 1; i < rep.criterion_trace.size(); ++i)
        EXPECT_LE(rep.criterion_trace[i], rep.criterion_trace[i - 1]);
}

TEST(AjdPham, TwoMembersIsExactJointDiagonalization) {
    const MatrixSet set = test::random_set(5, 2, 603);
    const AjdReport rep = ajd_pham(set);
    EXPECT_LT(rep.diagonalizer.criterion_value(), 1e-12);
    EXPECT_LT(off_diagonal(congruence(set[1], rep.diagonalizer.b()).matrix()) /
                  congruence(set[1], rep.diagonalizer.b()).matrix().diagonal().maxCoeff(),
              1e-7);
}

TEST(AjdPham, SingleMemberAndInitChecks) {
    const MatrixSet one({random_spd(3, test::key(1, 604))});
    const AjdReport rep = ajd_pham(one);
    EXPECT_LT(rep.diagonalizer.criterion_value(), 1e-13);
    const MatrixSet set = test::random_set(3, 4, 605);
    EXPECT_THROW(ajd_pham(set, {}, Matrix::Identity(2, 2)), DimensionError);
    EXPECT_THROW(ajd_pham(set, {}, Matrix::Zero(3, 3)), SingularMatrix);
}

TEST(AjdPham, RowsNormalizedAgainstArithmeticMean) {
    const GeneratedSet g = test::model_set(6, 30, 0.1, 14);
    const AjdReport rep = ajd_pham(g.set);
    Matrix arith = Matrix::Zero(6, 6);
    for (const Matrix& c : g.set.raw()) arith += c / 30.0;
    const Matrix d = rep.diagonalizer.b() * arith * rep.diagonalizer.b().transpose();
    for (Eigen::Index i = 0; i < 6; ++i) EXPECT_NEAR(d(i, i), 1.0, 1e-12);
}

TEST(PhamInitialTransform, InvariantToMemberScaling) {
    const MatrixSet set = test::random_set(4, 5, 606);
    std::vector<SpdMatrix> scaled;
    for (std::size_t k = 0; k < set.size(); ++k)
        scaled.push_back(SpdMatrix((1.0 + 3.0 * static_cast<double>(k)) * set[k].matrix()));
    const Matrix b1 = pham::initial_transform(set);
    const Matrix b2 = pham::initial_transform(MatrixSet(scaled));
    for (Eigen::Index i = 0; i < 4; ++i) {
        const double ratio = b2.row(i).dot(b1.row(i)) / b1.row(i).squaredNorm();
        EXPECT_LT((b2.row(i) - ratio * b1.row(i)).norm() / b2.row(i).norm(), 1e-10);
    }
}

TEST(PhamGradient, VanishesAtExactDiagonalizer) {
    const MatrixSet set({SpdMatrix(test::diag({1.0, 2.0, 3.0})), SpdMatrix(test::diag({5.0, 1.0, 2.0}))});
    EXPECT_LT(pham::gradient_norm(set, Matrix::Identity(3, 3)), 1e-15);
    const MatrixSet other = test::random_set(3, 3, 607);
    EXPECT_GT(pham::gradient_norm(other, Matrix::Identity(3, 3)), 0.0);
}

}  // namespace
}  // namespace spdmean
