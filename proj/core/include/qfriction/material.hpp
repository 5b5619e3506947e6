#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qfriction {

using Complex = std::complex<double>;

/// Drude-Lorentz dielectric half-space,
///   eps(w) = 1 + wp^2 / (wr^2 - w^2 - i gamma w).
/// wr = 0 gives a pure Drude metal. All frequencies are angular, in rad/s.
struct MaterialModel {
    double plasma_frequency = 0.0;
    double resonance_frequency = 0.0;
    double damping = 0.0;
    std::string name;

    /// Throws DomainError unless wp > 0, gamma > 0, wr >= 0 (all finite).
    void validate() const;

    /// Frequency of the non-retarded surface mode, where Re(eps) = -1.
    double surface_mode_frequency() const;

    /// Points where real-frequency integrands of Im r_p have sharp structure.
    /// Used as quadrature breakpoints.
    std::vector<double> spectral_features() const;
};

namespace material {

MaterialModel drude_gold();
MaterialModel lorentz_dielectric();

/// Names accepted by `preset`.
std::vector<std::string> preset_names();

/// Throws ConfigError("material", ...) for unknown names.
MaterialModel preset(std::string_view name);

/// Reads a `key = value` file with keys name, omega_p, omega_r, gamma.
/// Blank lines and `#` comments are ignored.
MaterialModel load(const std::filesystem::path& path);
MaterialModel parse(std::string_view text, std::string_view origin = "<string>");

/// eps(w). Throws StaticPole at w = 0 for a Drude model and DomainError
/// for non-finite input.
Complex permittivity(const MaterialModel& m, Complex omega);

/// Non-retarded p-polarised reflection (eps - 1) / (eps + 1).
///
/// Evaluated as wp^2 / (wp^2 + 2 (wr^2 - w^2 - i gamma w)), which is finite at
/// the Drude static pole (r_p(0) = 1). Throws PoleError where eps = -1.
Complex reflection_p(const MaterialModel& m, Complex omega);

/// r_p(w) - r_p(w0), evaluated as a product with the factor (w - w0) so that
/// nearby frequencies keep their relative accuracy.
Complex reflection_p_difference(const MaterialModel& m, Complex omega, Complex omega0);

/// r_p(i xi) for real xi >= 0; real-valued on the imaginary axis.
double reflection_imag_axis(const MaterialModel& m, double xi);

/// r_p(i xi) - r_p(0), evaluated without cancellation. Non-positive.
double reflection_imag_axis_excess(const MaterialModel& m, double xi);

/// Im r_p(w) for real w. Non-negative for w > 0.
double reflection_loss(const MaterialModel& m, double omega);

}  // namespace material
}  // namespace qfriction
