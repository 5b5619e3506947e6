#include "qfriction/dipole.hpp"

#include <cmath>

#include "qfriction/errors.hpp"

namespace qfriction {

DipoleConfig DipoleConfig::along(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw DomainError("DipoleConfig: direction must be a finite non-zero vector");
    DipoleConfig d;
    d.kind_ = Kind::vector;
    d.direction_ = {x / norm, y / norm, z / norm};
    return d;
}

double DipoleConfig::contraction(double phi) const {
    if (kind_ == Kind::isotropic) return 2.0;
    const auto& n = direction_;
    // |n . khat|^2 for real n; the i-components cancel between row and column.
    const double in_plane = n[0] * std::cos(phi) + n[1] * std::sin(phi);
    return in_plane * in_plane + n[2] * n[2];
}

}  // namespace qfriction
