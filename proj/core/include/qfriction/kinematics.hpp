#pragma once

#include <complex>

namespace qfriction {

using Complex = std::complex<double>;

/// Sudden-boost trajectory: at rest at height z0 for t < 0, then uniform
/// velocity v (sin theta, 0, cos theta). theta = pi/2 or 3pi/2 is parallel
/// motion, theta = pi is motion towards the surface, theta = 0 away from it.
struct MotionState {
    double speed = 0.0;           // m/s
    double angle = 0.0;           // rad, [0, 2 pi)
    double initial_height = 0.0;  // m
    double time = 0.0;            // s

    /// Throws DomainError for negative speed/time, non-positive z0, or an
    /// angle outside [0, 2 pi). The angle is never wrapped.
    void validate() const;

    /// cos(theta), snapped to exactly 0 at the parallel directions.
    double cos_angle() const;
    /// sin(theta), snapped to exactly 0 for vertical motion.
    double sin_angle() const;

    bool is_parallel() const { return cos_angle() == 0.0; }

    /// Copy with the time reset to zero (height = z0).
    MotionState at_start() const;
    MotionState with_speed(double v) const;
    MotionState with_angle(double theta) const;
};

namespace kinematics {

/// z_A(t) = z0 + v t cos(theta). Throws SurfaceContact when <= 0.
double height(const MotionState& s);

/// Doppler shift used by the master-equation coefficients:
///   w' = w + v k (sin(theta) cos(phi) - i cos(theta)).
Complex doppler_markov(double omega, double speed, double theta, double phi, double k_par);

/// Doppler shift used by the perturbative amplitudes:
///   w' = w - v k cos(phi) sin(theta) + i v k cos(theta).
Complex doppler_pert(double omega, double speed, double theta, double phi, double k_par);

struct Dimensionless {
    double s;  // k z_A
    double y;  // v / (z_A (w10 + w)); y < 1 is the adiabatic regime
};

Dimensionless dimensionless(const MotionState& s, double omega10, double omega, double k_par);

/// Series-convergence guard v < z_A(t) w10.
bool within_validity(const MotionState& s, double omega10);

}  // namespace kinematics
}  // namespace qfriction
