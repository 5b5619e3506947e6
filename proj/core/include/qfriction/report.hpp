#pragma once

#include <string>

namespace qfriction {

/// Which representation of a frequency integral to evaluate: along the real
/// axis (weighted by Im r_p) or along the imaginary axis (weighted by r_p(i xi)).
enum class Axis { real, imaginary };

/// A scalar result with its numerical pedigree.
struct Estimate {
    double value = 0.0;
    double error = 0.0;     // absolute quadrature error estimate
    bool converged = true;
    bool valid = true;      // evaluated inside the series guard v < z_A w10
    std::string source;     // expression that produced the number; empty = not computed
};

/// Force projected onto the direction of motion [N], split by coupling order.
///
/// The d^4 pieces combine order-d^2 internal dynamics with the order-d^2
/// force kernel, so they are only meaningful up to order d^4.
struct ForceReport {
    Estimate cp_d2;
    Estimate friction_d2;
    Estimate friction_d4_explicit;
    Estimate friction_d4_implicit;
    Estimate resonant;
    /// Unsplit second-order force, when the method provides it.
    Estimate full_d2;
    bool valid = true;

    double total() const {
        return cp_d2.value + friction_d2.value + friction_d4_explicit.value + friction_d4_implicit.value +
               resonant.value;
    }
    double total_error() const {
        return cp_d2.error + friction_d2.error + friction_d4_explicit.error + friction_d4_implicit.error +
               resonant.error;
    }
    bool converged() const {
        return cp_d2.converged && friction_d2.converged && friction_d4_explicit.converged &&
               friction_d4_implicit.converged && resonant.converged && full_d2.converged;
    }
};

}  // namespace qfriction
