#include "qfriction/atom.hpp"

#include <cmath>

#include "qfriction/errors.hpp"

namespace qfriction {

void AtomParams::validate() const {
    if (!std::isfinite(dipole) || !(dipole > 0.0)) throw DomainError("atom: dipole must be > 0");
    if (!std::isfinite(omega10) || !(omega10 > 0.0)) throw DomainError("atom: omega10 must be > 0");
}

}  // namespace qfriction
