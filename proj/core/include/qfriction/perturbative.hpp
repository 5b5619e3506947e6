#pragma once

// Time-dependent perturbation theory for the suddenly boosted atom: transition
// amplitudes, the ground-state shift and rate they imply, and the force to
// fourth order in the coupling.
//
// The motion state's `time` is the time since the boost, `initial_height` is
// z0; the instantaneous height z_A(t) enters the forces. Doppler-shifted
// frequencies follow kinematics::doppler_pert.

#include <array>
#include <vector>

#include "qfriction/atom.hpp"
#include "qfriction/kinematics.hpp"
#include "qfriction/material.hpp"
#include "qfriction/quadrature.hpp"
#include "qfriction/report.hpp"

namespace qfriction {

/// A surface-plasmon field mode with in-plane wavevector (k, phi).
struct PlasmonMode {
    double k_par = 0.0;         // 1/m
    double phi = 0.0;           // rad
    double omega = 0.0;         // rad/s
    double amplitude_sq = 0.0;  // |psi|^2 = hbar Im r_p(w) / (8 pi^3 eps0 k)

    static PlasmonMode make(const MaterialModel& m, double k_par, double phi, double omega);
};

namespace perturbative {

/// First-order amplitude for exciting the atom along the unit vector `eta`
/// while absorbing `mode`, at time s.time. The mode phase is chosen real.
Complex amp_c11(const PlasmonMode& mode, const AtomParams& a, const MotionState& s, const std::array<double, 3>& eta);

/// c_0^(2)(t) split in two. The oscillatory bracket term is evaluated by
/// rotating the frequency contour onto the negative imaginary axis; the
/// surface-plasmon pole crossed on the way is kept apart because it carries
/// the slowly damped oscillation at the plasmon frequency.
struct C02Parts {
    ComplexResult background;    // everything except the plasmon pole
    ComplexResult plasmon_pole;

    Complex total() const { return background.value + plasmon_pole.value; }
};

C02Parts amp_c02_parts(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                       const QuadratureSpec& spec = {});

/// c_0^(2)(t), all bracket terms included.
ComplexResult amp_c02(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                      const QuadratureSpec& spec = {});

/// Total first-order excitation probability, the sum over eta and the
/// integral over all modes of |c_1^(1)(t)|^2, on the real frequency axis.
RealResult excited_population(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                              const QuadratureSpec& spec = {});

struct ShiftRate {
    Estimate energy_shift;         // delta E_g [J]
    Estimate static_energy_shift;  // its velocity-independent part [J]
    Estimate rate;                 // Gamma_g [1/s]
};

/// Ground-state shift and rate from the small-(k v t) expansion of c_0^(2),
/// evaluated at the initial height z0.
ShiftRate shift_rate_ground(const AtomParams& a, const MaterialModel& m, const MotionState& s, Axis axis = Axis::real,
                            const QuadratureSpec& spec = {});

/// Time-averaged second-order force. full_d2 holds the unsplit (omega, phi, s)
/// integral; cp_d2 and friction_d2 the adiabatic split (static + v^2).
ForceReport force_2(const AtomParams& a, const MaterialModel& m, const MotionState& s, const QuadratureSpec& spec = {});

/// Unsplit second-order force minus its v = 0 value [N]; exactly zero for
/// parallel motion.
Estimate force_2_velocity_part(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                               const QuadratureSpec& spec = {});

/// Leading y^4 term of the adiabatic expansion of the second-order force,
/// the size of what the split omits.
Estimate force_2_y4_term(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                         const QuadratureSpec& spec = {});

struct Force4Vacuum {
    Estimate loss_term;  // -Gamma_g t F^(2)
    Estimate cp4;        // d^4 correction to the Casimir-Polder force
    Estimate fr4;        // d^4 friction, proportional to Gamma_g v
    double total() const { return loss_term.value + cp4.value + fr4.value; }
};

/// Fourth-order force through the vacuum sector, built on the given shift and
/// rate (use shift_rate_ground for the consistent choice).
Force4Vacuum force_4_vacuum(const AtomParams& a, const MaterialModel& m, const MotionState& s, const ShiftRate& sr,
                            const QuadratureSpec& spec = {});

/// Velocity-independent two-photon correction to the Casimir-Polder force [N].
/// Isotropic atoms only (throws DomainError for a fixed dipole direction).
Estimate sigma4_0(const AtomParams& a, const MaterialModel& m, const MotionState& s, const QuadratureSpec& spec = {});

/// Shift and rate recovered from c_0^(2) sampled in time.
struct C02Fit {
    double energy_shift = 0.0;  // [J]
    double rate = 0.0;          // [1/s]
    double energy_shift_stderr = 0.0;
    double rate_stderr = 0.0;
    std::vector<double> times;
    std::vector<Complex> samples;  // c_0^(2) minus its plasmon-pole oscillation
};

/// Samples c_0^(2) at `count` whole periods 2 pi n / w10 with n in
/// [first_period, first_period + count) and fits intercept + slope + drift.
/// The early periods are skipped because the continuum transient decays only
/// as 1/t^2; keep v near 1e-4 z0 w10 so the drift stays quadratic.
/// The slope of the imaginary part is -delta E_g / hbar and that of the real
/// part -Gamma_g / 2. Throws FitError for fewer than 4 samples.
C02Fit fit_c02(const AtomParams& a, const MaterialModel& m, const MotionState& s, int first_period = 6,
               int count = 8, const QuadratureSpec& spec = QuadratureSpec{}.with_rel_tol(1e-8));

}  // namespace perturbative
}  // namespace qfriction
