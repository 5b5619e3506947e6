#pragma once

#include <array>

namespace qfriction {

/// Orientation of the atomic transition dipole. `isotropic` sums over three
/// orthogonal real polarisations (degenerate triplet), which turns every
/// dipole contraction into a trace.
class DipoleConfig {
public:
    enum class Kind { isotropic, vector };

    static DipoleConfig isotropic() { return DipoleConfig(); }
    /// Fixed real direction; normalised internally. Throws DomainError for a zero vector.
    static DipoleConfig along(double x, double y, double z);

    Kind kind() const { return kind_; }
    const std::array<double, 3>& direction() const { return direction_; }

    /// d^(phi)2 / d^2: the dipole sandwiched around the unit evanescent-wave
    /// tensor khat (x) khat* with khat = (cos phi, sin phi, i).
    double contraction(double phi) const;

private:
    DipoleConfig() = default;
    Kind kind_ = Kind::isotropic;
    std::array<double, 3> direction_{0.0, 0.0, 0.0};
};

}  // namespace qfriction
