#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "saclat/dual_task.hpp"
#include "saclat/stats.hpp"
#include "saclat/wald.hpp"
#include "support/quadrature.hpp"
#include "support/synthetic_dual.hpp"

namespace {

using saclat::DualParams;
using saclat::IGParams;
namespace dual = saclat::dual;
namespace wald = saclat::wald;

const DualParams kPaper{{3.21, 3.0}, {3.56, 2.5}};

TEST(DualPdf, IdenticalComponentsGiveTwiceDensityTimesCdf) {
    const IGParams p{2.0, 3.0};
    for (double t = 0.05; t < 4.0; t += 0.1) {
        EXPECT_NEAR(dual::pdf(t, {p, p}), 2.0 * wald::pdf(t, p) * wald::cdf(t, p), 1e-15);
    }
}

TEST(DualPdf, InstantFovealComponentLeavesPeripheral) {
    const DualParams d{{1.0, 1e4}, {3.56, 2.5}};
    for (double t = 0.05; t < 5.0; t += 0.2) {
        EXPECT_NEAR(dual::pdf(t, d), wald::pdf(t, d.peripheral), 1e-9);
    }
}

TEST(DualPdf, IntegratesToOneForPaperThresholds) {
    for (double nf : {1.5, 3.0, 6.0}) {
        for (double np : {1.5, 2.5, 5.0}) {
            const DualParams d{{3.21, nf}, {3.56, np}};
            const double upper = 50.0 * std::max(wald::mean(d.foveal), wald::mean(d.peripheral));
            const double mass = testsupport::integrate_from_zero([&](double t) { return dual::pdf(t, d); }, upper);
            EXPECT_NEAR(mass, 1.0, 1e-5) << nf << " " << np;
        }
    }
}

TEST(DualPdf, IsDerivativeOfCdf) {
    for (double t = 0.2; t < 4.0; t *= 1.2) {
        const double h = 1e-5 * t;
        const double fd = (dual::cdf(t + h, kPaper) - dual::cdf(t - h, kPaper)) / (2.0 * h);
        EXPECT_NEAR(fd / dual::pdf(t, kPaper), 1.0, 1e-5);
    }
}

TEST(DualCdf, ProductOfComponents) {
    EXPECT_EQ(dual::cdf(0.0, kPaper), 0.0);
    for (double t = 0.1; t < 5.0; t += 0.3) {
        EXPECT_DOUBLE_EQ(dual::cdf(t, kPaper), wald::cdf(t, kPaper.foveal) * wald::cdf(t, kPaper.peripheral));
    }
    const IGParams p{2.0, 4.0};
    EXPECT_NEAR(dual::cdf(wald::quantile(0.5, p), {p, p}), 0.25, 1e-12);
}

TEST(DualSample, MatchesCdfByKolmogorovSmirnov) {
    std::mt19937_64 rng(3);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = dual::sample(kPaper, rng);
    EXPECT_GT(saclat::stats::ks_one_sample(xs, [](double t) { return dual::cdf(t, kPaper); }).p_value, 0.01);
}

TEST(DualSample, TotalIsMaxOfComponentsAndSeeded) {
    std::mt19937_64 a(4);
    std::mt19937_64 b(4);
    for (int i = 0; i < 1000; ++i) {
        const auto x = dual::sample_components(kPaper, a);
        const auto y = dual::sample_components(kPaper, b);
        EXPECT_GE(x.total, x.foveal);
        EXPECT_GE(x.total, x.peripheral);
        EXPECT_EQ(x.total, y.total);
    }
}

TEST(DualSample, FastFovealComponentMatchesPeripheralAlone) {
    const DualParams d{{1.0, 1e4}, {3.56, 2.5}};
    std::mt19937_64 rng(5);
    std::vector<double> dual_draws(20000);
    std::vector<double> single(20000);
    for (auto& x : dual_draws) x = dual::sample(d, rng);
    for (auto& x : single) x = wald::sample(d.peripheral, rng);
    EXPECT_GT(saclat::stats::ks_two_sample(dual_draws, single).p_value, 0.01);
}

TEST(DualFit, RecoversGeneratorThresholds) {
    const auto trials = testsupport::make_dual_trials(10000, 11);
    const auto fit = dual::fit_thresholds(trials, {});
    EXPECT_TRUE(fit.converged);
    EXPECT_NEAR(fit.alpha_f / testsupport::kDualAlphaF, 1.0, 0.05);
    EXPECT_NEAR(fit.alpha_p / testsupport::kDualAlphaP, 1.0, 0.05);
    EXPECT_LE(dual::log_likelihood(testsupport::kDualAlphaF, testsupport::kDualAlphaP, trials),
              fit.log_likelihood + 1e-9);
}

TEST(DualFit, SymmetricDesignGivesEqualThresholds) {
    std::vector<dual::Trial> trials;
    std::mt19937_64 rng(12);
    for (int i = 0; i < 6000; ++i) {
        const double a = 1.5 + (i % 3);
        const double b = 1.5 + ((i / 3) % 3);
        trials.push_back({dual::sample(DualParams{{3.0, a}, {3.0, b}}, rng), a, b});
    }
    const auto fit = dual::fit_thresholds(trials, {});
    EXPECT_LT(std::abs(fit.alpha_f - fit.alpha_p) / fit.alpha_f, 0.05);
}

TEST(DualFit, SlowPeripheryIdentifiesPeripheralThreshold) {
    std::vector<dual::Trial> trials;
    std::mt19937_64 rng(13);
    const DualParams d{{3.21, 20.0}, {3.56, 2.0}};
    for (int i = 0; i < 5000; ++i) trials.push_back({dual::sample(d, rng), 20.0, 2.0});
    const auto fit = dual::fit_thresholds(trials, {});
    EXPECT_NEAR(fit.alpha_p / 3.56, 1.0, 0.05);
}

TEST(DualFit, DeterministicAndValidated) {
    const auto trials = testsupport::make_dual_trials(2000, 14);
    dual::FitOptions opt;
    opt.seed = 9;
    const auto a = dual::fit_thresholds(trials, opt);
    const auto b = dual::fit_thresholds(trials, opt);
    EXPECT_EQ(a.alpha_f, b.alpha_f);
    EXPECT_EQ(a.alpha_p, b.alpha_p);
    EXPECT_THROW(dual::fit_thresholds(std::vector<dual::Trial>{{1.0, 1.0, 1.0}}, opt), std::invalid_argument);
    EXPECT_THROW(dual::fit_thresholds(std::vector<dual::Trial>{{1.0, 1.0, 1.0}, {-1.0, 1.0, 1.0}}, opt),
                 std::invalid_argument);
}

TEST(DualFit, LikelihoodFloorGuardsOutliers) {
    std::vector<dual::Trial> trials{{1.0, 3.0, 3.0}, {1e-9, 3.0, 3.0}};
    const double ll = dual::log_likelihood(3.0, 3.0, trials);
    EXPECT_TRUE(std::isfinite(ll));
    EXPECT_GE(ll, 2.0 * std::log(dual::kLikelihoodFloor));
}

TEST(DualFit, SingleAccumulatorsRejectedWhereDualIsNot) {
    const auto trials = testsupport::make_dual_trials(10000, 15);
    const auto fit = dual::fit_thresholds(trials, {});
    EXPECT_GT(dual::ks_dual(trials, fit.alpha_f, fit.alpha_p).p_value, 0.01);
    for (auto which : {dual::Component::foveal, dual::Component::peripheral}) {
        const auto single = dual::fit_single_threshold(trials, which);
        EXPECT_LT(dual::ks_single(trials, single.alpha, which).p_value, 0.01);
        EXPECT_LT(single.log_likelihood, fit.log_likelihood);
    }
}

}  // namespace
