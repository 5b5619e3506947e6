#pragma once

// Frequency moments of the reflection coefficient shared by the closed-form
// force, shift and rate expressions:
//
//   J_n(a) = integral over w in [0, inf) of Im r_p(w) / (w + a)^n
//
// together with their imaginary-axis representations, obtained from
// J_1(a) = integral of r_p(i xi) a / (a^2 + xi^2) by differentiating in a.

#include "qfriction/material.hpp"
#include "qfriction/quadrature.hpp"

namespace qfriction::detail {

enum class Contour { real, imaginary };

/// Quadrature settings for a frequency integral whose kernel varies on the
/// scale `a`, with the material's sharp features as breakpoints.
QuadratureSpec frequency_spec(const MaterialModel& m, double a, const QuadratureSpec& base, Contour contour);

/// J_n(a) on the real axis, n in {1, 2, 3, 5}.
RealResult loss_moment(const MaterialModel& m, double a, int n, const QuadratureSpec& base);

/// J_n(a) on the imaginary axis, n in {1, 2, 3}. For n >= 2 the kernel
/// integrates to zero, so r_p(i xi) - r_p(0) is integrated instead; this is
/// exact and removes a cancellation of order gamma a / wp^2.
RealResult wick_moment(const MaterialModel& m, double a, int n, const QuadratureSpec& base);

RealResult moment(const MaterialModel& m, double a, int n, const QuadratureSpec& base, Contour contour);

}  // namespace qfriction::detail
