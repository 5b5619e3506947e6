#pragma once

// Master-equation (Markov) treatment of a two-level atom in uniform motion
// past a half-space: Doppler-shifted Heisenberg coefficients, the resulting
// velocity-dependent level shift and decay rate of the ground state, and the
// Casimir-Polder/friction force up to order d^4 in the dipole coupling.
//
// Conventions: theta = pi is motion towards the surface. Forces are the
// projection onto the direction of motion (negative = opposing the motion).
// Shifts are angular frequencies [rad/s], rates are [1/s].

#include <array>

#include "qfriction/atom.hpp"
#include "qfriction/kinematics.hpp"
#include "qfriction/material.hpp"
#include "qfriction/quadrature.hpp"
#include "qfriction/report.hpp"

namespace qfriction {

/// Velocity-dependent internal dynamics of the ground-state atom.
struct InternalDynamics {
    double shift = 0.0;          // delta w_0 at the given velocity
    double rate = 0.0;           // Gamma_0 at the given velocity
    double static_shift = 0.0;   // delta w_0 at v = 0
    double static_rate = 0.0;    // Gamma_0 at v = 0 (zero for a ground state)
    double excited_rate = 0.0;   // Gamma_1 at v = 0
    /// Leading power of v in shift - static_shift (2) and in rate (1, or 0 when
    /// only an exponentially small resonant part survives).
    int velocity_correction_order = 2;
    /// Velocity-induced parts of the ground and excited coefficients.
    Complex delta_c01{};
    Complex delta_c10{};
    /// Dressed transition frequency and mean linewidth, Omega and (Gamma_0 + Gamma_1) / 2.
    double dressed_frequency = 0.0;
    double mean_width = 0.0;
    bool valid = true;
    bool converged = true;

    /// Omega' = Omega - v k sin(theta) cos(phi).
    double primed_frequency(const MotionState& s, double k_par, double phi) const;
    /// Gamma' = Gamma - v k cos(theta).
    double primed_width(const MotionState& s, double k_par) const;
};

namespace markov {

/// Transition n -> k entering a coefficient C_nk; the transition frequency
/// w_nk is -w10 for the ground state and +w10 for the excited state.
enum class Transition { ground, excited };

/// Evaluation mode for the non-resonant coefficient: `series` expands the
/// Doppler shift to second order and reduces k analytically, `full` keeps the
/// exact Doppler shift and integrates (xi, k, phi) numerically.
enum class CoeffMode { series, full };

/// How the velocity-induced change of the coefficients enters the d^4 force.
/// `rate` takes the real part (velocity-linear rate change); `shift` takes the
/// imaginary part (change of the dressed frequency, quadratic in v).
enum class ImplicitWeight { rate, shift };

using Tensor3 = std::array<std::array<Complex, 3>, 3>;

/// Evanescent-wave kernel K (x) K^* exp(i k.dr - k (z + z')) of the
/// non-retarded scattering Green tensor, K = k (cos phi, sin phi, i), with the
/// r_p c^2 / (8 pi^2 w^2) prefactor removed. dr is the lateral separation.
Tensor3 greens_tensor_integrand(double k_par, double phi, double z, double z_prime, double dx = 0.0,
                                double dy = 0.0);

/// Dipole sandwiched around a kernel: trace for an isotropic atom, n.M.n otherwise.
Complex sandwich(const Tensor3& kernel, const DipoleConfig& dipole);

/// Resonant (Theta-gated) part of C_nk [1/s]; always evaluated numerically.
ComplexResult coeff_resonant(const AtomParams& a, const MaterialModel& m, const MotionState& s, Transition t,
                             const QuadratureSpec& spec = {});

/// Non-resonant part of C_nk [1/s].
ComplexResult coeff_nonresonant(const AtomParams& a, const MaterialModel& m, const MotionState& s, Transition t,
                                CoeffMode mode = CoeffMode::series, const QuadratureSpec& spec = {});

/// C_nk(v) - C_nk(0), resonant plus non-resonant, integrated as a single
/// difference so that small corrections keep their relative accuracy.
ComplexResult coeff_velocity_part(const AtomParams& a, const MaterialModel& m, const MotionState& s, Transition t,
                                  const QuadratureSpec& spec = {});

/// Ground-state level shift delta w_0 [rad/s] including the v^2 angular
/// correction, on either frequency axis.
Estimate shift_ground(const AtomParams& a, const MaterialModel& m, const MotionState& s, Axis axis = Axis::imaginary,
                      const QuadratureSpec& spec = {});

/// Ground-state excitation rate Gamma_0 [1/s]. Parallel motion evaluates the
/// resonance-gated integral (exponentially small); any other direction uses
/// the velocity-linear expression on the requested axis.
Estimate rate_ground(const AtomParams& a, const MaterialModel& m, const MotionState& s, Axis axis = Axis::imaginary,
                     const QuadratureSpec& spec = {});

/// Static excited-state decay rate Gamma_1 [1/s] at height z_A(t).
double excited_rate(const AtomParams& a, const MaterialModel& m, const MotionState& s);

/// Shift and rate from full-mode coefficients, plus the velocity-induced
/// coefficient changes needed by the d^4 force.
InternalDynamics internal_dynamics(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                                   const QuadratureSpec& spec = {});

/// Static Casimir-Polder force projected on the motion [N].
Estimate cp_force_d2(const AtomParams& a, const MaterialModel& m, const MotionState& s, Axis axis = Axis::imaginary,
                     const QuadratureSpec& spec = {});

/// Leading (v^2) friction force at order d^2 [N].
Estimate friction_force_d2(const AtomParams& a, const MaterialModel& m, const MotionState& s, Axis axis = Axis::real,
                           const QuadratureSpec& spec = {});

struct FrictionD4 {
    Estimate explicit_part;
    Estimate implicit_part;
    double total() const { return explicit_part.value + implicit_part.value; }
};

/// Velocity-linear force at order d^4 [N], split into the explicit term
/// (Doppler-shifted width, proportional to v Gamma_1) and the implicit term
/// (velocity dependence carried by the coefficients).
FrictionD4 friction_force_d4(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                             const InternalDynamics& dynamics, Axis axis = Axis::real,
                             ImplicitWeight weight = ImplicitWeight::rate, const QuadratureSpec& spec = {});

/// Non-resonant force at order d^2 with exact Doppler shifts, minus its v = 0
/// value [N]. Zero at every order in v for parallel motion.
Estimate force_nonresonant_velocity_part(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                                         const QuadratureSpec& spec = {});

/// Resonant (Cherenkov-gated) force at order d^2 [N]; exponentially small
/// for v << z_A w10 and identically zero for motion along the normal.
Estimate force_resonant(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                        const QuadratureSpec& spec = {});

/// Full report: d^2 Casimir-Polder and friction, d^4 explicit/implicit
/// friction built on `dynamics`, and the resonant force.
ForceReport force_nonresonant(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                              const InternalDynamics& dynamics, const QuadratureSpec& spec = {});

}  // namespace markov
}  // namespace qfriction
