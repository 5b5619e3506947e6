#include <gtest/gtest.h>

#include <cmath>

#include "qfriction/analysis.hpp"
#include "qfriction/errors.hpp"
#include "qfriction/markov.hpp"
#include "qfriction/quadrature.hpp"

using namespace qfriction;
using constants::epsilon0;
using constants::hbar;
using constants::pi;

namespace {

MotionState state(double v, double theta, double z0 = 5e-9) {
    MotionState s;
    s.speed = v;
    s.angle = theta;
    s.initial_height = z0;
    return s;
}

double rel(double x, double y) { return std::abs(x - y) / std::max(std::abs(x), std::abs(y)); }

// v = 1e-3 z w10 for the default atom at 5 nm.
constexpr double kSlow = 50.0;

}  // namespace

TEST(GreensKernel, IsotropicPhiAverageOnAxis) {
    const double k = 3e8, z = 2e-9;
    const auto r = quadrature::integrate_periodic<double>(
        [&](double phi) {
            return markov::sandwich(markov::greens_tensor_integrand(k, phi, z, z), DipoleConfig::isotropic()).real();
        },
        1e-14);
    EXPECT_NEAR(r.value / (2.0 * pi), 2.0 * k * k * std::exp(-2.0 * k * z), 1e-12 * k * k);
}

TEST(GreensKernel, DecaysAwayFromSurface) {
    const auto near = markov::greens_tensor_integrand(1e9, 0.4, 1e-9, 1e-9);
    const auto far = markov::greens_tensor_integrand(1e9, 0.4, 1e-6, 1e-6);
    EXPECT_GT(std::abs(near[2][2]), 0.0);
    EXPECT_EQ(std::abs(far[2][2]), 0.0);
}

TEST(CoeffResonant, GroundStateAtRestVanishes) {
    const auto c = markov::coeff_resonant(AtomParams{}, material::drude_gold(), state(0.0, pi),
                                          markov::Transition::ground);
    EXPECT_EQ(c.value, Complex(0.0, 0.0));
}

TEST(CoeffResonant, ExcitedStateAtRestGivesImageDipoleRate) {
    // Image-dipole decay rate: (dx^2 + dy^2 + 2 dz^2) Im r_p(w10) / (16 pi eps0 hbar z^3).
    for (const auto& name : material::preset_names()) {
        const auto m = material::preset(name);
        for (const auto& config : {DipoleConfig::isotropic(), DipoleConfig::along(0, 0, 1), DipoleConfig::along(1, 0, 0)}) {
            AtomParams a;
            a.config = config;
            const auto& n = config.direction();
            const double weight = config.kind() == DipoleConfig::Kind::isotropic
                                      ? 4.0
                                      : n[0] * n[0] + n[1] * n[1] + 2.0 * n[2] * n[2];
            const double z = 5e-9;
            const double expected =
                weight * a.dipole * a.dipole * material::reflection_loss(m, a.omega10) / (16.0 * pi * epsilon0 * hbar * z * z * z);
            const auto s = state(0.0, pi, z);
            EXPECT_LT(rel(markov::excited_rate(a, m, s), expected), 1e-12) << name;
            const auto c = markov::coeff_resonant(a, m, s, markov::Transition::excited);
            EXPECT_LT(rel(2.0 * c.value.real(), expected), 1e-8) << name;
        }
    }
}

TEST(CoeffResonant, ParallelMotionIsExponentiallySuppressed) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const double excited = markov::excited_rate(a, m, state(0.0, pi));
    const auto c = markov::coeff_resonant(a, m, state(kSlow, 0.5 * pi), markov::Transition::ground);
    EXPECT_LT(std::abs(c.value), 1e-10 * excited);
}

TEST(CoeffNonresonant, AtRestMatchesStaticShift) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto s = state(0.0, pi);
    const auto c = markov::coeff_nonresonant(a, m, s, markov::Transition::ground);
    EXPECT_LT(rel(c.value.imag(), markov::shift_ground(a, m, s).value), 1e-9);
    EXPECT_EQ(c.value.real(), 0.0);
}

TEST(ShiftGround, StaticValueMatchesFrequencyIntegral) {
    const AtomParams a;
    for (const auto& name : material::preset_names()) {
        const auto m = material::preset(name);
        const double z = 4e-9, w = a.omega10;
        QuadratureSpec spec = QuadratureSpec{}.with_rel_tol(1e-12);
        spec.scale = w;
        const auto j = quadrature::integrate_semi_infinite<double>(
            [&](double xi) { return w * material::reflection_imag_axis(m, xi) / (w * w + xi * xi); }, spec);
        const double expected = -a.dipole * a.dipole * j.value / (8.0 * pi * pi * hbar * epsilon0 * z * z * z);
        for (auto axis : {Axis::imaginary, Axis::real})
            EXPECT_LT(rel(markov::shift_ground(a, m, state(0.0, pi, z), axis).value, expected), 1e-7) << name;
    }
}

TEST(ShiftGround, VelocityCorrectionIsQuadratic) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const double static_shift = markov::shift_ground(a, m, state(0.0, pi)).value;
    const auto fit = analysis::fit_exponent(
        [&](double v) { return markov::shift_ground(a, m, state(v, pi)).value - static_shift; },
        analysis::FitWindow::relative(5e-9, a.omega10, 1e-4, 1e-3), analysis::Baseline::none, 1);
    EXPECT_NEAR(fit.exponent, 2.0, 0.02);
}

TEST(RateGround, ZeroAtRest) {
    EXPECT_EQ(markov::rate_ground(AtomParams{}, material::drude_gold(), state(0.0, pi)).value, 0.0);
}

TEST(RateGround, LinearAndPositiveTowardsTheSurface) {
    const AtomParams a;
    const auto m = material::lorentz_dielectric();
    const double r1 = markov::rate_ground(a, m, state(kSlow, pi)).value;
    const double r2 = markov::rate_ground(a, m, state(2.0 * kSlow, pi)).value;
    EXPECT_GT(r1, 0.0);
    EXPECT_NEAR(r2 / r1, 2.0, 1e-9);
}

TEST(RateGround, ParallelIsExponentiallySmall) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const double perp = markov::rate_ground(a, m, state(kSlow, pi)).value;
    EXPECT_LT(std::abs(markov::rate_ground(a, m, state(kSlow, 0.5 * pi)).value), 1e-10 * perp);
}

TEST(CpForce, DirectionDependence) {
    const AtomParams a;
    const auto m = material::drude_gold();
    EXPECT_EQ(markov::cp_force_d2(a, m, state(kSlow, 0.5 * pi)).value, 0.0);
    const double toward = markov::cp_force_d2(a, m, state(kSlow, pi)).value;
    const double away = markov::cp_force_d2(a, m, state(kSlow, 0.0)).value;
    EXPECT_GT(toward, 0.0);
    EXPECT_NEAR(away, -toward, 1e-12 * toward);
}

TEST(CpForce, FarDistanceDecay) {
    const AtomParams a;
    const auto m = material::drude_gold();
    std::vector<double> z, f;
    for (double h = 2e-9; h < 3e-7; h *= 2.0) {
        z.push_back(h);
        f.push_back(markov::cp_force_d2(a, m, state(0.0, pi, h)).value);
    }
    EXPECT_NEAR(analysis::fit_power_law(z, f).exponent, -4.0, 0.02);
}

TEST(FrictionD2, ParallelVanishes) {
    EXPECT_EQ(markov::friction_force_d2(AtomParams{}, material::drude_gold(), state(kSlow, 0.5 * pi)).value, 0.0);
}

TEST(FrictionD2, OpposesMotionTowardsTheSurface) {
    for (const auto& name : material::preset_names())
        EXPECT_LT(markov::friction_force_d2(AtomParams{}, material::preset(name), state(kSlow, pi)).value, 0.0) << name;
}

TEST(FrictionD2, FlatReflectionBalancesOut) {
    // A nearly perfect conductor has r_p(i xi) ~ 1 over the whole relevant range.
    const MaterialModel stiff{1e22, 0.0, 1e10, "stiff"};
    const AtomParams a;
    const auto s = state(kSlow, pi);
    const double gold = markov::friction_force_d2(a, material::drude_gold(), s, Axis::imaginary).value;
    EXPECT_LT(std::abs(markov::friction_force_d2(a, stiff, s, Axis::imaginary).value), 1e-9 * std::abs(gold));
}

TEST(FrictionD4, NoInternalDynamicsNoForce) {
    const InternalDynamics none;
    const auto f = markov::friction_force_d4(AtomParams{}, material::drude_gold(), state(kSlow, pi), none);
    EXPECT_EQ(f.total(), 0.0);
}

TEST(FrictionD4, ParallelKeepsOnlyExplicitTerm) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto s = state(kSlow, 0.5 * pi);
    const auto f = markov::friction_force_d4(a, m, s, markov::internal_dynamics(a, m, s));
    EXPECT_EQ(f.implicit_part.value, 0.0);
    EXPECT_NE(f.explicit_part.value, 0.0);
}

TEST(FrictionD4, LinearInVelocity) {
    const AtomParams a;
    const auto m = material::drude_gold();
    for (double theta : {0.5 * pi, pi}) {
        const auto fit = analysis::fit_exponent(
            [&](double v) {
                const auto s = state(v, theta);
                return markov::friction_force_d4(a, m, s, markov::internal_dynamics(a, m, s)).total();
            },
            analysis::FitWindow::relative(5e-9, a.omega10, 1e-4, 1e-3));
        EXPECT_NEAR(fit.exponent, 1.0, 0.02) << theta;
    }
}

TEST(ForceNonresonant, AtRestReducesToCasimirPolder) {
    const AtomParams a;
    const auto m = material::lorentz_dielectric();
    const auto s = state(0.0, pi);
    const auto report = markov::force_nonresonant(a, m, s, InternalDynamics{});
    EXPECT_EQ(report.friction_d2.value, 0.0);
    EXPECT_EQ(report.friction_d4_explicit.value + report.friction_d4_implicit.value, 0.0);
    EXPECT_LT(rel(report.cp_d2.value, markov::cp_force_d2(a, m, s).value), 1e-12);
}

TEST(ForceNonresonant, ParallelVelocityPartVanishes) {
    const AtomParams a;
    const auto m = material::drude_gold();
    for (double v : {kSlow, 10.0 * kSlow})
        EXPECT_EQ(markov::force_nonresonant_velocity_part(a, m, state(v, 0.5 * pi)).value, 0.0);
}

TEST(ForceResonant, ZeroForNormalMotion) {
    EXPECT_EQ(markov::force_resonant(AtomParams{}, material::drude_gold(), state(1e4, pi)).value, 0.0);
}

TEST(Parity, MirrorAngleLeavesResultsUnchanged) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto same = [](double x, double y) { return x == y || rel(x, y) < 1e-12; };
    for (double theta : {0.3, 2.2, 0.5 * pi}) {
        const auto s = state(kSlow, theta), mirror = state(kSlow, 2.0 * pi - theta);
        EXPECT_TRUE(same(markov::shift_ground(a, m, s).value, markov::shift_ground(a, m, mirror).value));
        EXPECT_TRUE(same(markov::rate_ground(a, m, s).value, markov::rate_ground(a, m, mirror).value));
        EXPECT_TRUE(same(markov::cp_force_d2(a, m, s).value, markov::cp_force_d2(a, m, mirror).value));
        EXPECT_TRUE(same(markov::friction_force_d2(a, m, s).value, markov::friction_force_d2(a, m, mirror).value));
    }
}

TEST(Validity, GuardViolationIsFlaggedNotThrown) {
    const auto s = state(1e6, pi);
    const auto e = markov::cp_force_d2(AtomParams{}, material::drude_gold(), s);
    EXPECT_FALSE(e.valid);
    EXPECT_TRUE(std::isfinite(e.value));
}

TEST(InternalDynamics, StaticPieces) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto d = markov::internal_dynamics(a, m, state(0.0, pi));
    EXPECT_EQ(d.static_rate, 0.0);
    EXPECT_LT(rel(d.static_shift, markov::shift_ground(a, m, state(0.0, pi)).value), 1e-9);
    EXPECT_LT(rel(d.excited_rate, markov::excited_rate(a, m, state(0.0, pi))), 1e-12);
}
