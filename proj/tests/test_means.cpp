#include <gtest/gtest.h>

#include <cmath>

#include "spdmean/geometry.hpp"
#include "spdmean/means.hpp"
#include "test_util.hpp"

namespace spdmean {
namespace {

using test::diag;

double det_mean_gap(const MatrixSet& set, const SpdMatrix& m) {
    double target = 0.0;
    for (const auto& c : set) target += logdet(c);
    target /= static_cast<double>(set.size());
    return std::abs(std::expm1(logdet(m) - target));
}

TEST(ClosedForms, ArithmeticHarmonicLe) {
    const MatrixSet set({SpdMatrix(diag({1.0, 4.0})), SpdMatrix(diag({4.0, 16.0}))});
    EXPECT_LT(test::max_abs(arithmetic_mean(set).matrix() - diag({2.5, 10.0})), 1e-15);
    EXPECT_LT(test::max_abs(harmonic_mean(set).matrix() - diag({1.6, 6.4})), 1e-14);
    EXPECT_LT(test::max_abs(le_mean(set).matrix() - diag({2.0, 8.0})), 1e-14);
}

TEST(Means, SingleMemberIsItsOwnMean) {
    const SpdMatrix c = random_spd(4, test::key(1, 700));
    const MatrixSet set({c});
    for (const auto& rep : {fi_mean_gd(set), fi_mean_mm(set), bhat_mean(set), ale_mean(set)}) {
        EXPECT_TRUE(rep.converged);
        EXPECT_LT(fi_distance(rep.mean, c), 1e-9);
    }
}

TEST(Means, CommutingSetAllFiMeansAgreeWithLe) {
    std::vector<SpdMatrix> members;
    for (int k = 0; k < 6; ++k)
        members.emplace_back(diag({1.0 + k, 2.0 / (1.0 + k), 0.5 + 0.3 * k}));
    const MatrixSet set(members);
    const SpdMatrix le = le_mean(set);
    EXPECT_LT(fi_distance(fi_mean_gd(set).mean, le), 1e-7);
    EXPECT_LT(fi_distance(fi_mean_mm(set).mean, le), 1e-7);
    EXPECT_LT(fi_distance(ale_mean(set).mean, le), 1e-7);
}

TEST(Means, TwoMembersCollapseToGeomean2) {
    for (int n : {2, 5}) {
        const MatrixSet set = test::random_set(n, 2, 701 + static_cast<std::uint64_t>(n), 0.8);
        const SpdMatrix g = geomean2(set[0], set[1]);
        EXPECT_LT(fi_distance(fi_mean_gd(set).mean, g), 1e-6);
        EXPECT_LT(fi_distance(fi_mean_mm(set).mean, g), 1e-6);
        EXPECT_LT(fi_distance(bhat_mean(set).mean, g), 1e-6);
        EXPECT_LT(fi_distance(ale_mean(set).mean, g), 1e-6);
    }
}

TEST(Means, GdAndMmAgreeOnModelSet) {
    const GeneratedSet g = test::model_set(8, 50, 0.1, 21);
    const SolverReport gd = fi_mean_gd(g.set);
    const SolverReport mm = fi_mean_mm(g.set);
    EXPECT_TRUE(gd.converged);
    EXPECT_TRUE(mm.converged);
    EXPECT_LT(fi_distance(gd.mean, mm.mean), 1e-6);
    EXPECT_LT(karcher_residual(g.set, gd.mean), 1e-8);
    EXPECT_LT(karcher_residual(g.set, mm.mean), 1e-8);
    EXPECT_LT(gd.final_residual, 1e-9);
    EXPECT_NEAR(gd.equation_residual, karcher_residual(g.set, gd.mean), 1e-15);
}

TEST(Means, DeterminantIdentity) {
    const GeneratedSet g = test::model_set(8, 50, 0.1, 22);
    EXPECT_LT(det_mean_gap(g.set, fi_mean_gd(g.set).mean), 1e-6);
    EXPECT_LT(det_mean_gap(g.set, fi_mean_mm(g.set).mean), 1e-6);
    EXPECT_LT(det_mean_gap(g.set, le_mean(g.set)), 1e-6);
    EXPECT_LT(det_mean_gap(g.set, ale_mean(g.set).mean), 1e-6);
    EXPECT_GT(det_mean_gap(g.set, bhat_mean(g.set).mean), 1e-4);
}

TEST(Means, TracesRecordEveryIterate) {
    const GeneratedSet g = test::model_set(6, 30, 0.1, 23);
    for (const auto& rep : {fi_mean_gd(g.set), fi_mean_mm(g.set), bhat_mean(g.set)}) {
        ASSERT_FALSE(rep.criterion_trace.empty());
        ASSERT_EQ(rep.criterion_trace.size(), rep.trace_iterations.size());
        EXPECT_EQ(rep.trace_iterations.back(), rep.iterations);
        EXPECT_EQ(rep.criterion_trace.back(), rep.final_residual);
        for (std::size_t i = 1; i < rep.trace_iterations.size(); ++i)
            EXPECT_GT(rep.trace_iterations[i], rep.trace_iterations[i - 1]);
    }
}

TEST(Means, GdStepScheduleIsMonotoneOnModelSets) {
    for (double sigma : {0.01, 0.1, 1.0}) {
        const GeneratedSet g = test::model_set(8, 40, sigma, 24);
        const SolverReport rep = fi_mean_gd(g.set);
        for (std::size_t i = 1; i < rep.criterion_trace.size(); ++i)
            EXPECT_LE(rep.criterion_trace[i], rep.criterion_trace[i - 1]) << sigma << ' ' << i;
    }
}

TEST(Means, IterationCapReportsNonConvergence) {
    const GeneratedSet g = test::model_set(6, 30, 1.0, 25);
    SolverConfig cfg;
    cfg.max_iter = 1;
    EXPECT_FALSE(fi_mean_gd(g.set, cfg).converged);
    EXPECT_FALSE(fi_mean_mm(g.set, cfg).converged);
    EXPECT_FALSE(bhat_mean(g.set, cfg).converged);
}

TEST(Means, RelativeStopRule) {
    const GeneratedSet g = test::model_set(6, 30, 0.1, 26);
    SolverConfig cfg;
    cfg.stop_db = -60.0;
    const SolverReport rep = fi_mean_gd(g.set, cfg);
    EXPECT_TRUE(rep.converged);
    EXPECT_LE(10.0 * std::log10(rep.final_residual / rep.criterion_trace.front()), -60.0);
    EXPECT_GT(10.0 * std::log10(rep.criterion_trace[rep.criterion_trace.size() - 2] /
                                rep.criterion_trace.front()),
              -60.0);
}

TEST(Means, WarmStartAtSolutionStopsImmediately) {
    const GeneratedSet g = test::model_set(6, 30, 0.1, 27);
    SolverConfig cfg;
    cfg.warm_start = fi_mean_mm(g.set).mean.matrix();
    cfg.epsilon = 1e-6;
    EXPECT_EQ(fi_mean_gd(g.set, cfg).iterations, 0);
    cfg.warm_start = Matrix::Identity(3, 3);
    EXPECT_THROW(fi_mean_gd(g.set, cfg), DimensionError);
}

TEST(SolverConfig, Validation) {
    SolverConfig cfg;
    cfg.epsilon = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.max_iter = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.initial_step = -1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Bhattacharyya, SatisfiesItsFixedPointEquation) {
    const GeneratedSet g = test::model_set(6, 30, 0.1, 28);
    const SolverReport rep = bhat_mean(g.set);
    EXPECT_TRUE(rep.converged);
    EXPECT_LT(bhat_residual(g.set, rep.mean) / inverse(rep.mean).matrix().norm(), 1e-8);
}

TEST(Ale, NoiselessSetMatchesFiMean) {
    const GeneratedSet g = test::model_set(10, 100, 0.0, 29);
    const AleResult ale = ale_mean_full(g.set);
    EXPECT_TRUE(ale.report.converged);
    EXPECT_LT(fi_distance(ale.report.mean, fi_mean_mm(g.set).mean), 1e-6);
    EXPECT_LT(ale.report.equation_residual, 1e-9);
}

TEST(Ale, AlphaDoesNotChangeMean) {
    const GeneratedSet g = test::model_set(6, 30, 0.1, 30);
    const SpdMatrix m1 = ale_mean_full(g.set, {}, 1.0).report.mean;
    const SpdMatrix m4 = ale_mean_full(g.set, {}, 4.0).report.mean;
    EXPECT_LT(fi_distance(m1, m4), 1e-8);
    EXPECT_THROW(ale_mean_full(g.set, {}, 0.0), std::invalid_argument);
}

TEST(SqrtIterations, AgreeWithMm) {
    const GeneratedSet g = test::model_set(6, 30, 0.1, 31);
    const SpdMatrix mm = fi_mean_mm(g.set).mean;
    for (RootMode mode : {RootMode::inverse_sqrt, RootMode::sqrt}) {
        const SolverReport rep = fi_mean_sqrt_iter(g.set, {}, mode);
        EXPECT_TRUE(rep.converged);
        EXPECT_LT(fi_distance(rep.mean, mm), 1e-6);
    }
}

TEST(AleBuffer, TracksWindowedAleMean) {
    const GeneratedSet g = test::model_set(6, 60, 0.0, 32);
    AleBuffer buf(20);
    EXPECT_TRUE(buf.empty());
    EXPECT_THROW(buf.mean(), std::logic_error);
    for (std::size_t k = 0; k < g.set.size(); ++k) buf.push(g.set[k], 3);
    EXPECT_EQ(buf.size(), 20u);
    const MatrixSet window = buf.snapshot();
    EXPECT_EQ(window[0].matrix(), g.set[40].matrix());
    EXPECT_LT(fi_distance(buf.mean(), ale_mean(window).mean), 1e-6);
    EXPECT_THROW(buf.push(SpdMatrix::identity(3)), DimensionError);
    EXPECT_THROW(AleBuffer(0), std::invalid_argument);
}

}  // namespace
}  // namespace spdmean
