#include "qfriction/quadrature.hpp"

#include <cmath>
#include <limits>

namespace qfriction {

void QuadratureSpec::validate() const {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (!(rel_tol > 100.0 * eps) || !std::isfinite(rel_tol))
        throw DomainError("quadrature: rel_tol must exceed 100 machine epsilon");
    if (!(abs_tol >= 0.0) || !std::isfinite(abs_tol)) throw DomainError("quadrature: abs_tol must be >= 0");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("quadrature: mapping scale must be > 0");
    if (max_subdivisions < 1) throw DomainError("quadrature: max_subdivisions must be >= 1");
}

namespace quadrature {

double exponential_moment(int n, double z) {
    if (n < 0) throw DomainError("exponential_moment: negative order");
    if (!(z > 0.0)) throw DomainError("exponential_moment: z must be > 0");
    double value = 1.0 / (2.0 * z);
    for (int j = 1; j <= n; ++j) value *= j / (2.0 * z);
    return value;
}

double phi_average(PhiWeight weight, const DipoleConfig& dipole) {
    if (dipole.kind() == DipoleConfig::Kind::isotropic) {
        // Contraction is the constant 2.
        switch (weight) {
            case PhiWeight::one: return 2.0;
            case PhiWeight::cos_phi: return 0.0;
            case PhiWeight::cos2_phi: return 1.0;
            case PhiWeight::sin_2phi: return 0.0;
        }
    } else {
        const auto& n = dipole.direction();
        const double xx = n[0] * n[0], yy = n[1] * n[1], zz = n[2] * n[2];
        switch (weight) {
            case PhiWeight::one: return 0.5 * (xx + yy) + zz;
            case PhiWeight::cos_phi: return 0.0;
            case PhiWeight::cos2_phi: return 0.375 * xx + 0.125 * yy + 0.5 * zz;
            case PhiWeight::sin_2phi: return 0.5 * n[0] * n[1];
        }
    }
    throw DomainError("phi_average: unsupported weight");
}

}  // namespace quadrature
}  // namespace qfriction
