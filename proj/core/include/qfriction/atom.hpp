#pragma once

#include "qfriction/constants.hpp"
#include "qfriction/dipole.hpp"

namespace qfriction {

/// Two-level atom: ground state |0>, excited level |1> at w10 above it.
struct AtomParams {
    double dipole = constants::elementary_charge * constants::bohr_radius;  // C m
    double omega10 = 1e13;                                                  // rad/s
    DipoleConfig config = DipoleConfig::isotropic();

    /// Throws DomainError unless d > 0 and w10 > 0 (finite).
    void validate() const;
};

}  // namespace qfriction
