#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <antcdm/transform.hpp>

#include "oracles.hpp"

using namespace antcdm;

namespace {

ModelParams symmetric() {
    ModelParams p;
    p.q = {0.1, 0.1};
    p.r_prime = {0.25, 0.25};
    return p;
}

} // namespace

TEST(Transform, DiagonalMapsToZeroDifference) {
    for (double a : {0.0, 1.0, 33.3}) EXPECT_EQ(transform_to_xy(a, a).x1, 0.0);
}

TEST(Transform, UnitVector) {
    const auto xy = transform_to_xy(1.0, 0.0);
    EXPECT_NEAR(xy.x1, 1.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(xy.x2, 1.0 / std::numbers::sqrt2, 1e-15);
}

TEST(Transform, RoundTripAndIsometry) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double y1 = u(rng), y2 = u(rng);
        const auto xy = transform_to_xy(y1, y2);
        const auto back = inverse_transform(xy.x1, xy.x2);
        worst = std::max({worst, std::abs(back.y1 - y1), std::abs(back.y2 - y2)});
        EXPECT_NEAR(xy.x1 * xy.x1 + xy.x2 * xy.x2, y1 * y1 + y2 * y2, 1e-10 * (1 + y1 * y1 + y2 * y2));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(DerivTransformed, SymmetryAxisHasNoDrift) {
    const auto p = symmetric();
    for (auto g : {GainModel::hard_step(), GainModel::sigmoid(), GainModel::published_polynomial()})
        for (double x2 : {0.0, 10.0, 50.0, 70.0}) EXPECT_EQ(deriv_transformed(0.0, x2, p, g).x1, 0.0);
}

TEST(DerivTransformed, ChainRuleIdentityAndIsometry) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> z(0.0, 0.2);
    ModelParams p;
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        const double y1 = std::min(a, b) * p.n, y2 = (std::max(a, b) - std::min(a, b)) * p.n;
        Noise eta;
        for (std::size_t ch = 0; ch < Noise::kChannels; ++ch) eta[ch] = z(rng);
        const auto xy = transform_to_xy(y1, y2);
        // the rotated state may round off the simplex by an ulp; evaluate where it lands
        const auto st = inverse_transform(xy.x1, xy.x2);
        if (!st.feasible(p.n)) continue;
        const auto r = deriv_modified(st, p, GainModel::sigmoid(), eta);
        const auto d = deriv_transformed(xy.x1, xy.x2, p, GainModel::sigmoid(), eta);
        const double sq2 = std::numbers::sqrt2;
        const double scale = 1.0 + std::abs(r.dy1) + std::abs(r.dy2);
        EXPECT_NEAR(d.x1, (r.dy1 - r.dy2) / sq2, 1e-12 * scale);
        EXPECT_NEAR(d.x2, (r.dy1 + r.dy2) / sq2, 1e-12 * scale);
        EXPECT_NEAR(d.x1 * d.x1 + d.x2 * d.x2, r.dy1 * r.dy1 + r.dy2 * r.dy2, 1e-10 * scale * scale);
    }
}

TEST(EstimateDrift, BaselineDriftIsAffineWithoutNoise) {
    ModelParams p;
    p.r_prime = {0.3, 0.3};
    p.sigma_q = p.sigma_r_prime = p.sigma_r_switch = p.sigma_k = 0.0;
    const auto grid = linspace(-30.0, 30.0, 61);
    const auto est = estimate_drift(p, ModelKind::baseline, GainModel::sigmoid(), 42.0, grid, 4, 1);
    ASSERT_EQ(est.points.size(), 61u);
    std::vector<double> x, y;
    for (const auto& pt : est.points) {
        x.push_back(pt.x1);
        y.push_back(pt.mean);
        EXPECT_EQ(pt.variance, 0.0);
    }
    EXPECT_LT(oracle::fit_line(x, y).max_residual, 1e-9);
}

TEST(EstimateDrift, SymmetricParamsHaveZeroMeanDriftAtOrigin) {
    auto p = symmetric();
    p.sigma_q = p.sigma_r_prime = p.sigma_r_switch = p.sigma_k = 0.0;
    const std::vector<double> grid{-5.0, 0.0, 5.0};
    for (auto kind : {ModelKind::baseline, ModelKind::modified}) {
        const auto est = estimate_drift(p, kind, GainModel::sigmoid(), 30.0, grid, 3, 1);
        EXPECT_EQ(est.points[1].mean, 0.0);
        EXPECT_NEAR(est.points[0].mean, -est.points[2].mean, 1e-12);
    }
}

TEST(EstimateDrift, NoisyMeanIsUnbiasedAndVariancePositive) {
    auto p = symmetric();
    const std::vector<double> grid{0.0};
    const auto est = estimate_drift(p, ModelKind::baseline, GainModel::sigmoid(), 30.0, grid, 4000, 3);
    ASSERT_EQ(est.points.size(), 1u);
    EXPECT_GT(est.points[0].variance, 0.0);
    EXPECT_NEAR(est.points[0].mean, 0.0, 4.0 * std::sqrt(est.points[0].variance / 4000.0));
}

TEST(EstimateDrift, HardStepJumpMatchesAnalyticRecruitmentChange) {
    ModelParams p;
    p.quorum_T = 0.3;
    p.sigma_q = p.sigma_r_prime = p.sigma_r_switch = p.sigma_k = 0.0;
    const double x2 = 42.0;
    // y1 = (x2 + x1)/sqrt2 crosses 30 at x1 = 30*sqrt2 - x2
    const double x1_star = 30.0 * std::numbers::sqrt2 - x2;
    const std::vector<double> grid{x1_star - 1e-6, x1_star + 1e-6};
    const auto est = estimate_drift(p, ModelKind::modified, GainModel::hard_step(), x2, grid, 1, 1);
    ASSERT_EQ(est.points.size(), 2u);
    const double expected_jump = 2.0 * 30.0 * p.r_prime[0] / std::numbers::sqrt2;
    EXPECT_NEAR(est.points[1].mean - est.points[0].mean, expected_jump, 1e-3);
    EXPECT_GT(est.quorum_jump_ratio, 10.0);
}

TEST(EstimateDrift, InfeasiblePointsAreReported) {
    ModelParams p;
    const auto grid = linspace(-50.0, 50.0, 11);
    const auto est = estimate_drift(p, ModelKind::baseline, GainModel::sigmoid(), 30.0, grid, 2, 1);
    // |x1| > x2 puts one population below zero
    EXPECT_EQ(est.infeasible_x1.size(), 4u);
    EXPECT_EQ(est.points.size(), 7u);
    EXPECT_THROW(estimate_drift(p, ModelKind::baseline, GainModel::sigmoid(), 30.0, grid, 0, 1), DomainError);
}

TEST(EstimateDrift, ConstancyDiagnostic) {
    ModelParams p;
    const auto grid = linspace(-20.0, 20.0, 21);
    const auto noisy = estimate_drift(p, ModelKind::baseline, GainModel::sigmoid(), 30.0, grid, 50, 1);
    EXPECT_TRUE(std::isfinite(noisy.constancy));
    EXPECT_GT(noisy.constancy, 0.0);
    p.sigma_q = p.sigma_r_prime = p.sigma_r_switch = p.sigma_k = 0.0;
    const auto quiet = estimate_drift(p, ModelKind::baseline, GainModel::sigmoid(), 30.0, grid, 5, 1);
    EXPECT_TRUE(std::isinf(quiet.constancy));
}
