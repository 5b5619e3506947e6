#include <gtest/gtest.h>

#include <cmath>

#include "qfriction/analysis.hpp"
#include "qfriction/errors.hpp"
#include "qfriction/markov.hpp"
#include "qfriction/perturbative.hpp"

using namespace qfriction;
using constants::epsilon0;
using constants::hbar;
using constants::pi;

namespace {

MotionState state(double v, double theta, double z0 = 5e-9, double t = 0.0) {
    MotionState s;
    s.speed = v;
    s.angle = theta;
    s.initial_height = z0;
    s.time = t;
    return s;
}

double rel(double x, double y) { return std::abs(x - y) / std::max(std::abs(x), std::abs(y)); }

constexpr double kSlow = 50.0;  // 1e-3 z0 w10 at 5 nm
constexpr double kFit = 5.0;    // 1e-4 z0 w10, where the c_0^(2) drift stays quadratic

}  // namespace

TEST(PlasmonMode, Amplitude) {
    const auto m = material::drude_gold();
    const auto mode = PlasmonMode::make(m, 2e8, 0.3, 9e15);
    EXPECT_LT(rel(mode.amplitude_sq, hbar * material::reflection_loss(m, 9e15) / (8.0 * pi * pi * pi * epsilon0 * 2e8)),
              1e-14);
    EXPECT_THROW(PlasmonMode::make(m, 0.0, 0.0, 1e15), DomainError);
}

TEST(AmpC11, ZeroAtBoost) {
    const auto mode = PlasmonMode::make(material::drude_gold(), 2e8, 0.3, 9e15);
    EXPECT_EQ(perturbative::amp_c11(mode, AtomParams{}, state(kSlow, pi), {0.0, 0.0, 1.0}), Complex(0.0, 0.0));
}

TEST(AmpC11, StaticEnvelope) {
    // At rest |c_1^(1)|^2 oscillates under 4 |g|^2 / (w10 + w)^2.
    const AtomParams a;
    const double w = 9e15;
    const auto mode = PlasmonMode::make(material::drude_gold(), 2e8, 0.0, w);
    double peak = 0.0;
    for (int i = 1; i < 400; ++i) {
        auto s = state(0.0, pi);
        s.time = i * 0.37 / (a.omega10 + w);
        peak = std::max(peak, std::norm(perturbative::amp_c11(mode, a, s, {0.0, 0.0, 1.0})));
    }
    auto s = state(0.0, pi);
    s.time = pi / (a.omega10 + w);
    const double half_period = std::norm(perturbative::amp_c11(mode, a, s, {0.0, 0.0, 1.0}));
    EXPECT_GT(half_period, 0.0);
    EXPECT_LE(peak, half_period * (1.0 + 1e-12));
}

TEST(AmpC02, ZeroAtBoost) {
    EXPECT_EQ(perturbative::amp_c02(AtomParams{}, material::drude_gold(), state(kSlow, pi)).value, Complex(0.0, 0.0));
}

TEST(AmpC02, NormConservationAtSecondOrder) {
    // 2 Re c_0^(2) + sum |c_1^(1)|^2 = 0.
    const AtomParams a;
    const auto m = material::drude_gold();
    for (double wt : {0.01, 0.03}) {
        const auto s = state(kFit, pi, 5e-9, wt / a.omega10);
        const auto c = perturbative::amp_c02(a, m, s);
        const auto p = perturbative::excited_population(a, m, s);
        EXPECT_GT(p.value, 0.0);
        EXPECT_LT(std::abs(2.0 * c.value.real() + p.value), 1e-8 * p.value) << wt;
    }
}

TEST(ShiftRate, ParallelRateIsZero) {
    const auto sr = perturbative::shift_rate_ground(AtomParams{}, material::drude_gold(), state(kSlow, 0.5 * pi));
    EXPECT_EQ(sr.rate.value, 0.0);
}

TEST(ShiftRate, StaticShiftIsCasimirPolder) {
    const AtomParams a;
    for (const auto& name : material::preset_names()) {
        const auto m = material::preset(name);
        const auto sr = perturbative::shift_rate_ground(a, m, state(0.0, pi));
        EXPECT_LT(rel(sr.energy_shift.value, hbar * markov::shift_ground(a, m, state(0.0, pi)).value), 1e-8) << name;
        EXPECT_EQ(sr.energy_shift.value, sr.static_energy_shift.value);
    }
}

TEST(ShiftRate, ClosedFormsMatchMarkov) {
    const AtomParams a;
    const auto m = material::lorentz_dielectric();
    for (double theta : {0.0, 0.25 * pi, 0.75 * pi, pi}) {
        const auto s = state(kSlow, theta);
        const auto sr = perturbative::shift_rate_ground(a, m, s);
        EXPECT_LT(rel(sr.energy_shift.value, hbar * markov::shift_ground(a, m, s).value), 1e-6) << theta;
        EXPECT_LT(rel(sr.rate.value, markov::rate_ground(a, m, s).value), 1e-6) << theta;
    }
}

TEST(FitC02, RecoversClosedForms) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto s = state(kFit, pi);
    const auto sr = perturbative::shift_rate_ground(a, m, s);
    const auto fit = perturbative::fit_c02(a, m, s);
    EXPECT_LT(rel(fit.energy_shift, sr.energy_shift.value), 0.01);
    EXPECT_LT(rel(fit.rate, sr.rate.value), 0.01);
    EXPECT_EQ(fit.samples.size(), 8u);
}

TEST(FitC02, ParallelRateConsistentWithZero) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto fit = perturbative::fit_c02(a, m, state(kFit, 0.5 * pi));
    const double scale = perturbative::shift_rate_ground(a, m, state(kFit, pi)).rate.value;
    EXPECT_LT(std::abs(fit.rate), std::max(3.0 * fit.rate_stderr, 0.01 * scale));
}

TEST(FitC02, NeedsEnoughSamples) {
    EXPECT_THROW(perturbative::fit_c02(AtomParams{}, material::drude_gold(), state(kFit, pi), 6, 3), FitError);
}

TEST(Force2, SplitMatchesMarkov) {
    const AtomParams a;
    for (const auto& name : material::preset_names()) {
        const auto m = material::preset(name);
        const auto s = state(kSlow, pi);
        const auto f = perturbative::force_2(a, m, s);
        EXPECT_LT(rel(f.cp_d2.value, markov::cp_force_d2(a, m, s).value), 1e-9) << name;
        EXPECT_LT(rel(f.friction_d2.value, markov::friction_force_d2(a, m, s).value), 1e-10) << name;
        // The unsplit integral differs from the split only by higher orders in v.
        const double y4 = perturbative::force_2_y4_term(a, m, s).value;
        EXPECT_LT(std::abs(f.full_d2.value - f.cp_d2.value - f.friction_d2.value), 10.0 * std::abs(y4) + 1e-9 * f.cp_d2.value);
    }
}

TEST(Force2, VelocityPartVanishesForParallelMotion) {
    EXPECT_EQ(perturbative::force_2_velocity_part(AtomParams{}, material::drude_gold(), state(kSlow, 0.5 * pi)).value, 0.0);
}

TEST(Force4, ParallelMotion) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto s = state(kSlow, 0.5 * pi);
    const auto f = perturbative::force_4_vacuum(a, m, s, perturbative::shift_rate_ground(a, m, s));
    EXPECT_EQ(f.cp4.value, 0.0);
    EXPECT_EQ(f.fr4.value, 0.0);
}

TEST(Force4, NoShiftNoRateNoForce) {
    perturbative::ShiftRate none;
    const auto f = perturbative::force_4_vacuum(AtomParams{}, material::drude_gold(), state(kSlow, pi, 5e-9, 1e-12), none);
    EXPECT_EQ(f.loss_term.value, 0.0);
    EXPECT_EQ(f.cp4.value, 0.0);
    EXPECT_EQ(f.fr4.value, 0.0);
}

TEST(Force4, FrictionIsQuadraticInVelocity) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto fit = analysis::fit_exponent(
        [&](double v) {
            const auto s = state(v, pi);
            return perturbative::force_4_vacuum(a, m, s, perturbative::shift_rate_ground(a, m, s)).fr4.value;
        },
        analysis::FitWindow::relative(5e-9, a.omega10, 1e-4, 1e-3));
    EXPECT_NEAR(fit.exponent, 2.0, 0.02);
}

TEST(Sigma4, ParallelMotionVanishes) {
    EXPECT_EQ(perturbative::sigma4_0(AtomParams{}, material::drude_gold(), state(kSlow, 0.5 * pi)).value, 0.0);
}

TEST(Sigma4, OddUnderReversal) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const double toward = perturbative::sigma4_0(a, m, state(kSlow, pi)).value;
    const double away = perturbative::sigma4_0(a, m, state(kSlow, 0.0)).value;
    EXPECT_NEAR(toward / away, -1.0, 1e-6);
}

TEST(Sigma4, FrozenReference) {
    // Brute-force trapezoid on a 4000-node grid refined around the surface
    // plasmon converges to the same integral within 2e-5.
    const auto e = perturbative::sigma4_0(AtomParams{}, material::drude_gold(), state(0.0, pi, 10e-9),
                                          QuadratureSpec{}.with_rel_tol(1e-9));
    EXPECT_TRUE(e.converged);
    EXPECT_LT(rel(e.value, 2.446634877498e-23), 1e-8);
}

TEST(Sigma4, IsotropicOnly) {
    AtomParams a;
    a.config = DipoleConfig::along(0, 0, 1);
    EXPECT_THROW(perturbative::sigma4_0(a, material::drude_gold(), state(kSlow, pi)), DomainError);
}

TEST(Sigma4, NoVelocityLinearTwoPhotonTerm) {
    // sigma4 + fr4 at the boost: the two-photon part is velocity independent
    // and fr4 starts at v^2, so a quadratic fit has no linear coefficient.
    const AtomParams a;
    const auto m = material::drude_gold();
    const double at_rest = perturbative::sigma4_0(a, m, state(0.0, pi)).value;
    std::vector<double> v, q;
    for (int i = 1; i <= 8; ++i) {
        const auto s = state(i * kSlow, pi);
        v.push_back(s.speed);
        q.push_back(perturbative::sigma4_0(a, m, s).value - at_rest +
                    perturbative::force_4_vacuum(a, m, s, perturbative::shift_rate_ground(a, m, s)).fr4.value);
    }
    // Least squares for q = c0 + c1 v + c2 v^2 via normal equations on scaled v.
    double s[5] = {}, t[3] = {};
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = v[i] / v.back();
        double p = 1.0;
        for (int k = 0; k < 5; ++k, p *= x) s[k] += p;
        t[0] += q[i];
        t[1] += x * q[i];
        t[2] += x * x * q[i];
    }
    // Solve the 3x3 system by Cramer's rule.
    const auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23, double a31, double a32,
                         double a33) {
        return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) + a13 * (a21 * a32 - a22 * a31);
    };
    const double d = det3(s[0], s[1], s[2], s[1], s[2], s[3], s[2], s[3], s[4]);
    const double c1 = det3(s[0], t[0], s[2], s[1], t[1], s[3], s[2], t[2], s[4]) / d;
    const double c2 = det3(s[0], s[1], t[0], s[1], s[2], t[1], s[2], s[3], t[2]) / d;
    EXPECT_LT(std::abs(c1), 1e-6 * std::abs(c2));
}

TEST(Forces, DecayAtLeastAsFourthPowerOfHeight) {
    const AtomParams a;
    const auto m = material::drude_gold();
    for (double z : {5e-9, 5e-8}) {
        const auto near = state(kSlow, pi, z), far = state(kSlow, pi, 2.0 * z);
        const auto fn = perturbative::force_2(a, m, near), ff = perturbative::force_2(a, m, far);
        EXPECT_LE(std::abs(ff.cp_d2.value), std::abs(fn.cp_d2.value) / 16.0 * (1.0 + 1e-9));
        EXPECT_LE(std::abs(ff.friction_d2.value), std::abs(fn.friction_d2.value) / 16.0);
        EXPECT_LE(std::abs(perturbative::sigma4_0(a, m, far).value), std::abs(perturbative::sigma4_0(a, m, near).value) / 16.0);
    }
}

TEST(Guards, NearParallelFastMotionRejected) {
    EXPECT_THROW(perturbative::excited_population(AtomParams{}, material::drude_gold(),
                                                  state(1e5, 0.5 * pi, 5e-9, 1e-13)),
                 DomainError);
}
