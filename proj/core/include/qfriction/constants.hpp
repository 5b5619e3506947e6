#pragma once

#include <numbers>

namespace qfriction::constants {

// CODATA 2018, SI units.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double bohr_radius = 5.29177210903e-11;      // m

inline constexpr double pi = std::numbers::pi;

}  // namespace qfriction::constants
