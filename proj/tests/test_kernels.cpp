#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>

#include "spdmean/kernels.hpp"
#include "spdmean/linalg.hpp"
#include "test_util.hpp"

namespace spdmean {
namespace {

// The parallel kernels must reproduce the serial reference bit for bit, for
// any thread count, including oversubscription of a single core.
class KernelParity : public ::testing::TestWithParam<int> {
protected:
    void SetUp() override {
        saved_ = omp_get_max_threads();
        omp_set_num_threads(GetParam());
        const MatrixSet set = test::random_set(7, 37, 500, 0.8);
        cs_ = set.raw();
        m_ = random_spd(7, test::key(1, 501)).matrix();
        w_ = gaussian_matrix(7, 7, test::key(2, 501));
    }
    void TearDown() override { omp_set_num_threads(saved_); }

    int saved_ = 1;
    std::vector<Matrix> cs_;
    Matrix m_;
    Matrix w_;
};

TEST_P(KernelParity, MeanLog) {
    EXPECT_EQ(kernels::mean_log(cs_), kernels::mean_log_serial(cs_));
}

TEST_P(KernelParity, MeanLogCongruence) {
    EXPECT_EQ(kernels::mean_log_congruence(cs_, w_), kernels::mean_log_congruence_serial(cs_, w_));
}

TEST_P(KernelParity, SumInverseMidpoints) {
    EXPECT_EQ(kernels::sum_inverse_midpoints(cs_, m_), kernels::sum_inverse_midpoints_serial(cs_, m_));
}

TEST_P(KernelParity, Majorizer) {
    const auto sq = kernels::map_sqrtm(cs_);
    const auto isq = kernels::map_invsqrtm(cs_);
    const auto par = kernels::mm_accumulate(sq, isq, m_);
    const auto ser = kernels::mm_accumulate_serial(sq, isq, m_);
    EXPECT_EQ(par.phi1, ser.phi1);
    EXPECT_EQ(par.phi2, ser.phi2);
}

TEST_P(KernelParity, MapsMatchPerMemberFunctions) {
    const auto sq = kernels::map_sqrtm(cs_);
    const auto isq = kernels::map_invsqrtm(cs_);
    ASSERT_EQ(sq.size(), cs_.size());
    for (std::size_t k = 0; k < cs_.size(); ++k) {
        EXPECT_EQ(sq[k], raw::sqrtm(cs_[k]));
        EXPECT_EQ(isq[k], raw::invsqrtm(cs_[k]));
    }
}

INSTANTIATE_TEST_SUITE_P(Threads, KernelParity, ::testing::Values(1, 2, 5));

TEST(Kernels, ValuesOnDiagonalMembers) {
    const std::vector<Matrix> cs{test::diag({1.0, 4.0}), test::diag({4.0, 1.0})};
    EXPECT_LT(test::max_abs(kernels::mean_log(cs) - std::log(2.0) * Matrix::Identity(2, 2)), 1e-15);
    const Matrix s = kernels::sum_inverse_midpoints(cs, Matrix::Identity(2, 2));
    EXPECT_NEAR(s(0, 0), 1.0 + 0.4, 1e-15);
    EXPECT_NEAR(s(1, 1), 0.4 + 1.0, 1e-15);
    const Matrix lc = kernels::mean_log_congruence(cs, 2.0 * Matrix::Identity(2, 2));
    EXPECT_NEAR(lc(0, 0), std::log(8.0), 1e-15);
}

TEST(Kernels, MajorizerAtFixedPointOfCommutingPair) {
    // For M = C1 # C2 of commuting members Psi_1 = -Psi_2, and M Phi2 M = Phi1.
    const std::vector<Matrix> cs{test::diag({1.0, 9.0}), test::diag({4.0, 1.0})};
    const Matrix m = test::diag({2.0, 3.0});
    const auto t = kernels::mm_accumulate(kernels::map_sqrtm(cs), kernels::map_invsqrtm(cs), m);
    EXPECT_LT(test::max_abs(m * t.phi2 * m - t.phi1), 1e-13);
}

}  // namespace
}  // namespace spdmean
