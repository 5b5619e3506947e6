#include "qfriction/kinematics.hpp"

#include <cmath>
#include <numbers>

#include "qfriction/errors.hpp"

namespace qfriction {

namespace {

constexpr double kSnap = 1e-14;

bool finite(double x) { return std::isfinite(x); }

double snapped(double x) { return std::abs(x) < kSnap ? 0.0 : x; }

void check_finite(std::initializer_list<double> values, const char* where) {
    for (double v : values)
        if (!finite(v)) throw DomainError(std::string(where) + ": non-finite input");
}

}  // namespace

void MotionState::validate() const {
    check_finite({speed, angle, initial_height, time}, "MotionState");
    if (speed < 0.0) throw DomainError("MotionState: speed must be >= 0");
    if (angle < 0.0 || angle >= 2.0 * std::numbers::pi)
        throw DomainError("MotionState: angle must lie in [0, 2 pi)");
    if (initial_height <= 0.0) throw DomainError("MotionState: initial height must be > 0");
    if (time < 0.0) throw DomainError("MotionState: time must be >= 0");
}

double MotionState::cos_angle() const { return snapped(std::cos(angle)); }
double MotionState::sin_angle() const { return snapped(std::sin(angle)); }

MotionState MotionState::at_start() const {
    MotionState s = *this;
    s.time = 0.0;
    return s;
}

MotionState MotionState::with_speed(double v) const {
    MotionState s = *this;
    s.speed = v;
    return s;
}

MotionState MotionState::with_angle(double theta) const {
    MotionState s = *this;
    s.angle = theta;
    return s;
}

namespace kinematics {

double height(const MotionState& s) {
    s.validate();
    const double z = s.initial_height + s.speed * s.time * s.cos_angle();
    if (!(z > 0.0)) throw SurfaceContact("trajectory reached the surface (z_A <= 0)");
    return z;
}

Complex doppler_markov(double omega, double speed, double theta, double phi, double k_par) {
    check_finite({omega, speed, theta, phi, k_par}, "doppler_markov");
    if (k_par < 0.0) throw DomainError("doppler_markov: k_par must be >= 0");
    const double vk = speed * k_par;
    return {omega + vk * snapped(std::sin(theta)) * std::cos(phi), -vk * snapped(std::cos(theta))};
}

Complex doppler_pert(double omega, double speed, double theta, double phi, double k_par) {
    check_finite({omega, speed, theta, phi, k_par}, "doppler_pert");
    if (k_par < 0.0) throw DomainError("doppler_pert: k_par must be >= 0");
    const double vk = speed * k_par;
    return {omega - vk * std::cos(phi) * snapped(std::sin(theta)), vk * snapped(std::cos(theta))};
}

Dimensionless dimensionless(const MotionState& s, double omega10, double omega, double k_par) {
    const double z = height(s);
    if (!(omega10 + omega > 0.0)) throw DomainError("dimensionless: w10 + w must be > 0");
    return {k_par * z, s.speed / (z * (omega10 + omega))};
}

bool within_validity(const MotionState& s, double omega10) {
    return s.speed < height(s) * omega10;
}

}  // namespace kinematics
}  // namespace qfriction
