#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "qfriction/analysis.hpp"
#include "qfriction/errors.hpp"
#include "qfriction/markov.hpp"
#include "qfriction/perturbative.hpp"

using namespace qfriction;
using constants::pi;

namespace {

MotionState state(double v, double theta, double z0 = 5e-9) {
    MotionState s;
    s.speed = v;
    s.angle = theta;
    s.initial_height = z0;
    return s;
}

const auto kWindow = analysis::FitWindow::relative(5e-9, 1e13);

}  // namespace

TEST(FitWindow, RelativeGrid) {
    const auto g = kWindow.grid();
    ASSERT_EQ(g.size(), 8u);
    EXPECT_NEAR(g.front(), 50.0, 1e-12);
    EXPECT_EQ(g.back(), 500.0);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], std::pow(10.0, 1.0 / 7.0), 1e-12);
}

TEST(FitWindow, Validation) {
    EXPECT_THROW((analysis::FitWindow{0.0, 1.0, 8}.validate()), FitError);
    EXPECT_THROW((analysis::FitWindow{2.0, 1.0, 8}.validate()), FitError);
    EXPECT_THROW((analysis::FitWindow{1.0, 2.0, 4}.validate()), FitError);
}

TEST(PowerLaw, SyntheticQuadratic) {
    const auto fit = analysis::fit_exponent([](double v) { return -3.5 * v * v; }, kWindow);
    EXPECT_NEAR(fit.exponent, 2.0, 1e-3);
    EXPECT_NEAR(fit.prefactor, -3.5, 1e-9);
    EXPECT_LT(fit.residual_norm, 1e-12);
}

TEST(PowerLaw, BaselineSubtraction) {
    const auto fit =
        analysis::fit_exponent([](double v) { return 7.0 + 2.0 * v; }, kWindow, analysis::Baseline::subtract);
    EXPECT_NEAR(fit.exponent, 1.0, 1e-9);
}

TEST(PowerLaw, RejectsSignChangesAndZeros) {
    EXPECT_THROW(analysis::fit_power_law({1, 2, 3}, {1.0, -1.0, 1.0}), FitError);
    EXPECT_THROW(analysis::fit_power_law({1, 2, 3}, {0.0, 0.0, 0.0}), FitError);
    EXPECT_THROW(analysis::fit_power_law({1, 2}, {1.0, 2.0}), FitError);
    EXPECT_THROW(analysis::fit_exponent([](double) { return 1.0; }, kWindow, analysis::Baseline::subtract), FitError);
}

TEST(Scaling, PerpendicularShiftIsQuadratic) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto fit = analysis::fit_exponent(
        [&](double v) {
            return markov::coeff_velocity_part(a, m, state(v, pi), markov::Transition::ground).value.imag();
        },
        kWindow);
    EXPECT_NEAR(fit.exponent, 2.0, 0.02);
}

TEST(Scaling, PerpendicularRateIsLinear) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto fit = analysis::fit_exponent(
        [&](double v) { return perturbative::shift_rate_ground(a, m, state(v, pi)).rate.value; }, kWindow);
    EXPECT_NEAR(fit.exponent, 1.0, 0.02);
}

TEST(Classify, Zero) {
    const auto c = analysis::classify({1, 2, 3}, {0.0, 0.0, 0.0}, 0.0, 1.0);
    EXPECT_EQ(c.kind, analysis::Scaling::zero);
    EXPECT_EQ(c.label(), "0");
}

TEST(Classify, ExponentiallySmall) {
    std::vector<double> v, q;
    for (double x = 1.0; x <= 8.0; x += 1.0) {
        v.push_back(x);
        q.push_back(std::exp(-1000.0 / x));
    }
    const auto c = analysis::classify(v, q, std::exp(-1000.0 / 4.0), 1.0);
    EXPECT_EQ(c.kind, analysis::Scaling::exp_small);
}

TEST(Classify, SmallButPolynomialIsStillAPowerLaw) {
    std::vector<double> v, q;
    for (double x = 1.0; x <= 8.0; x += 1.0) {
        v.push_back(x);
        q.push_back(1e-20 * x * x * x);
    }
    const auto c = analysis::classify(v, q, 1e-20 * 64.0, 1.0);
    ASSERT_EQ(c.kind, analysis::Scaling::power_law);
    EXPECT_NEAR(c.fit.exponent, 3.0, 1e-9);
    EXPECT_EQ(c.label(), "v^3.00");
}

TEST(Classify, FailedFitIsReported) {
    const auto c = analysis::classify({1, 2, 3}, {1.0, -1.0, 1.0}, 0.5, 1.0);
    EXPECT_EQ(c.kind, analysis::Scaling::fit_failed);
    EXPECT_FALSE(c.error.empty());
}

TEST(Magnitude, Estimate) {
    EXPECT_NEAR(analysis::magnitude_estimate(1e3, 1e13, 1e-9), 0.01, 1e-17);
    EXPECT_EQ(analysis::magnitude_estimate(0.0, 1e13, 1e-9), 0.0);
    EXPECT_THROW(analysis::magnitude_estimate(1.0, 0.0, 1e-9), DomainError);
    EXPECT_THROW(analysis::magnitude_estimate(-1.0, 1e13, 1e-9), DomainError);
}

TEST(Magnitude, ReportAtConclusionParameters) {
    const auto r = analysis::magnitude_report(AtomParams{}, material::drude_gold(), state(1e3, pi, 1e-9));
    EXPECT_NEAR(r.analytic_ratio, 0.01, 1e-15);
    // Frozen on first evaluation; the material integral suppresses the force
    // ratio far below the analytic estimate.
    EXPECT_NEAR(r.force_ratio / 1.43142e-7, 1.0, 1e-4);
}

TEST(Parallel, KeepsIndexOrder) {
    const auto out = analysis::parallel_generate<int>(
        100, [](std::size_t i) { return static_cast<int>(i * i); }, 4);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
}

TEST(Parallel, RethrowsWorkerFailure) {
    EXPECT_THROW(analysis::parallel_generate<int>(
                     16,
                     [](std::size_t i) -> int {
                         if (i == 7) throw std::runtime_error("boom");
                         return 0;
                     },
                     4),
                 std::runtime_error);
}

TEST(Parallel, ThreadCountFromEnvironment) {
    ::setenv("QFRICTION_THREADS", "3", 1);
    EXPECT_EQ(analysis::default_threads(), 3);
    ::setenv("QFRICTION_THREADS", "zero", 1);
    EXPECT_GE(analysis::default_threads(), 1);
    ::unsetenv("QFRICTION_THREADS");
}

TEST(Labels, Strings) {
    EXPECT_STREQ(analysis::to_string(analysis::Agreement::not_applicable), "n/a");
    EXPECT_STREQ(analysis::to_string(analysis::Scaling::exp_small), "exp_small");
    analysis::ComparisonRow row;
    row.quantity = "rate";
    row.direction = analysis::MotionDirection::perpendicular;
    EXPECT_EQ(row.label(), "perpendicular rate");
}
