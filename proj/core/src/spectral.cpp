#include "spectral.hpp"

#include <cmath>

namespace qfriction::detail {

QuadratureSpec frequency_spec(const MaterialModel& m, double a, const QuadratureSpec& base, Contour contour) {
    QuadratureSpec spec = base;
    spec.scale = a;
    if (contour == Contour::real) {
        spec.breakpoints = m.spectral_features();
    } else {
        spec.breakpoints = {m.surface_mode_frequency()};
    }
    spec.breakpoints.insert(spec.breakpoints.end(), base.breakpoints.begin(), base.breakpoints.end());
    return spec;
}

RealResult loss_moment(const MaterialModel& m, double a, int n, const QuadratureSpec& base) {
    if (!(a > 0.0)) throw DomainError("loss_moment: a must be > 0");
    if (n < 1 || n > 5) throw DomainError("loss_moment: unsupported order");
    auto f = [&](double w) {
        const double inv = 1.0 / (w + a);
        double kernel = inv;
        for (int j = 1; j < n; ++j) kernel *= inv;
        return material::reflection_loss(m, w) * kernel;
    };
    return quadrature::integrate_semi_infinite<double>(f, frequency_spec(m, a, base, Contour::real));
}

RealResult wick_moment(const MaterialModel& m, double a, int n, const QuadratureSpec& base) {
    if (!(a > 0.0)) throw DomainError("wick_moment: a must be > 0");
    const double a2 = a * a;
    const auto spec = frequency_spec(m, a, base, Contour::imaginary);
    switch (n) {
        case 1:
            return quadrature::integrate_semi_infinite<double>(
                [&](double xi) { return material::reflection_imag_axis(m, xi) * a / (a2 + xi * xi); }, spec);
        case 2:
            return quadrature::integrate_semi_infinite<double>(
                [&](double xi) {
                    const double q = a2 + xi * xi;
                    return material::reflection_imag_axis_excess(m, xi) * (a2 - xi * xi) / (q * q);
                },
                spec);
        case 3:
            return quadrature::integrate_semi_infinite<double>(
                [&](double xi) {
                    const double q = a2 + xi * xi;
                    return material::reflection_imag_axis_excess(m, xi) * a * (a2 - 3.0 * xi * xi) / (q * q * q);
                },
                spec);
        default:
            throw DomainError("wick_moment: unsupported order");
    }
}

RealResult moment(const MaterialModel& m, double a, int n, const QuadratureSpec& base, Contour contour) {
    return contour == Contour::real ? loss_moment(m, a, n, base) : wick_moment(m, a, n, base);
}

}  // namespace qfriction::detail
