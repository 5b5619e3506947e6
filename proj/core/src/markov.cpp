#include "qfriction/markov.hpp"

#include <algorithm>
#include <cmath>

#include "qfriction/errors.hpp"
#include "spectral.hpp"

namespace qfriction {

double InternalDynamics::primed_frequency(const MotionState& s, double k_par, double phi) const {
    return dressed_frequency - s.speed * k_par * s.sin_angle() * std::cos(phi);
}

double InternalDynamics::primed_width(const MotionState& s, double k_par) const {
    return mean_width - s.speed * k_par * s.cos_angle();
}

namespace markov {

namespace {

using constants::epsilon0;
using constants::hbar;
using constants::pi;
using detail::Contour;

struct Angular {
    double one;   // phi average of the dipole contraction
    double cos2;  // ... weighted with cos^2(phi)
};

Angular angular(const DipoleConfig& d) {
    return {quadrature::phi_average(quadrature::PhiWeight::one, d),
            quadrature::phi_average(quadrature::PhiWeight::cos2_phi, d)};
}

Contour contour(Axis axis) { return axis == Axis::real ? Contour::real : Contour::imaginary; }

const char* axis_tag(Axis axis) { return axis == Axis::real ? "real-axis" : "imaginary-axis"; }

QuadratureSpec nested(const QuadratureSpec& base, double factor) {
    QuadratureSpec q = base;
    q.rel_tol = std::max(base.rel_tol * factor, 1e-13);
    q.abs_tol = 0.0;
    q.breakpoints.clear();
    return q;
}

QuadratureSpec k_spec(const QuadratureSpec& base, double z) {
    QuadratureSpec q = nested(base, 0.1);
    q.mapping = TailMapping::exp_decay;
    q.scale = 2.0 / z;
    return q;
}

// Bookkeeping for nested integrals: worst relative error of any inner
// result and whether every inner integral converged.
struct InnerStats {
    double worst_rel = 0.0;
    bool converged = true;

    template <class T>
    T take(const IntegralResult<T>& r) {
        converged = converged && r.converged;
        const double mag = std::abs(r.value);
        if (mag > 0.0) worst_rel = std::max(worst_rel, r.error_estimate / mag);
        return r.value;
    }

    template <class T>
    IntegralResult<T> fold(IntegralResult<T> outer) const {
        outer.error_estimate += worst_rel * std::abs(outer.value);
        outer.converged = outer.converged && converged;
        return outer;
    }
};

Estimate from(const RealResult& r, double factor, bool valid, std::string source) {
    return {r.value * factor, r.error_estimate * std::abs(factor), r.converged, valid, std::move(source)};
}

// Linear functions of cos(phi): a + b cos(phi).
struct CosLinear {
    Complex a, b;
    Complex operator()(double phi) const { return a + b * std::cos(phi); }
};

// Integral over phi of contraction(phi) * weight(phi) times
//   integral over k of k^p exp(-2 k z) integral over xi of
//   r_p(i xi) [w / (w^2 + xi^2) - w0 / (w0^2 + xi^2)],  w = w0 + v k lambda(phi).
// The term linear in (w - w0) is done in closed form (it reduces to -J2 times
// phi averages of the dipole); the remainder
//   -(w - w0)^2 (xi^2 (2 w0 + w) - w0^2 w) / ((w^2 + xi^2)(w0^2 + xi^2)^2)
// is integrated numerically against r_p(i xi) - r_p(0); the constant part
// contributes only when Re w and w0 differ in sign.
ComplexResult doppler_xi_integral(const MaterialModel& m, const DipoleConfig& dipole, double z, int power, double w0,
                                  double speed, CosLinear lambda, CosLinear weight, const QuadratureSpec& spec) {
    const auto j2 = detail::wick_moment(m, std::abs(w0), 2, spec);
    const double a0 = quadrature::phi_average(quadrature::PhiWeight::one, dipole);
    const double a1 = quadrature::phi_average(quadrature::PhiWeight::cos_phi, dipole);
    const double a2 = quadrature::phi_average(quadrature::PhiWeight::cos2_phi, dipole);
    const Complex angular_linear =
        2.0 * pi * (weight.a * lambda.a * a0 + (weight.a * lambda.b + weight.b * lambda.a) * a1 + weight.b * lambda.b * a2);
    const double k_moment = quadrature::exponential_moment(power + 1, z);
    const Complex linear = -j2.value * speed * k_moment * angular_linear;
    const double linear_error = j2.error_estimate * speed * k_moment * std::abs(angular_linear);

    InnerStats stats;
    const auto xi_spec = detail::frequency_spec(m, std::abs(w0), nested(spec, 0.01), Contour::imaginary);
    const auto kq = k_spec(spec, z);
    const double w02 = w0 * w0;
    const double r_static = material::reflection_imag_axis(m, 0.0);
    auto over_k = [&](double phi) -> Complex {
        const Complex lam = lambda(phi);
        if (lam == Complex(0.0, 0.0)) return {};
        auto f = [&](double k) -> Complex {
            const Complex dw = speed * k * lam;
            const Complex w = w0 + dw;
            const Complex w2 = w * w;
            const Complex dw2 = dw * dw;
            const Complex mix = 2.0 * w0 + w;
            const Complex tail = w02 * w;
            auto g = [&](double xi) -> Complex {
                const double x2 = xi * xi;
                const double d = w02 + x2;
                return -material::reflection_imag_axis_excess(m, xi) * dw2 * (x2 * mix - tail) / ((w2 + x2) * d * d);
            };
            // Against a constant the kernel integrates to (pi/2)(sgn Re w - sgn w0).
            Complex h = stats.take(quadrature::integrate_semi_infinite<Complex>(g, xi_spec));
            if ((w.real() > 0.0) != (w0 > 0.0)) h += r_static * pi * (w0 > 0.0 ? -1.0 : 1.0);
            return h * std::pow(k, power) * std::exp(-2.0 * k * z);
        };
        const Complex inner = stats.take(quadrature::integrate_semi_infinite<Complex>(f, kq));
        return inner * weight(phi) * dipole.contraction(phi);
    };
    auto rest = stats.fold(quadrature::integrate_periodic<Complex>(over_k, spec.rel_tol));
    rest.value += linear;
    rest.error_estimate += linear_error;
    rest.converged = rest.converged && j2.converged;
    return rest;
}

// Integral over the Cherenkov region v k sin(theta) cos(phi) > gap:
//   integral dphi contraction(phi) integral_{k0(phi)}^inf dk k^p exp(-2 k z) f(k, phi).
// Empty for motion along the surface normal.
template <class F>
ComplexResult cherenkov_integral(const DipoleConfig& dipole, double speed, double sin_theta, double gap, double z,
                                 int power, F f, const QuadratureSpec& spec) {
    if (speed == 0.0 || sin_theta == 0.0) return {};
    InnerStats stats;
    const double center = sin_theta > 0.0 ? 0.0 : pi;
    const auto kq = k_spec(spec, z);
    auto over_k = [&](double phi) -> Complex {
        const double projection = speed * sin_theta * std::cos(phi);
        if (!(projection > 0.0)) return {};
        const double k0 = gap / projection;
        if (2.0 * k0 * z > 740.0) return {};  // exp underflows
        auto g = [&](double kappa) -> Complex {
            const double k = k0 + kappa;
            return f(k, phi) * std::pow(k, power) * std::exp(-2.0 * k * z);
        };
        return stats.take(quadrature::integrate_semi_infinite<Complex>(g, kq)) * dipole.contraction(phi);
    };
    QuadratureSpec phi_spec = nested(spec, 1.0);
    phi_spec.breakpoints = {center};
    return stats.fold(quadrature::integrate<Complex>(over_k, center - 0.5 * pi, center + 0.5 * pi, phi_spec));
}

double transition_frequency(const AtomParams& a, Transition t) {
    return t == Transition::ground ? -a.omega10 : a.omega10;
}

}  // namespace

Tensor3 greens_tensor_integrand(double k_par, double phi, double z, double z_prime, double dx, double dy) {
    if (!(k_par > 0.0)) throw DomainError("greens_tensor_integrand: k must be > 0");
    if (!(z > 0.0) || !(z_prime > 0.0)) throw DomainError("greens_tensor_integrand: heights must be > 0");
    const Complex K[3] = {k_par * std::cos(phi), k_par * std::sin(phi), Complex(0.0, k_par)};
    const double lateral = k_par * (std::cos(phi) * dx + std::sin(phi) * dy);
    const Complex factor = std::exp(Complex(-k_par * (z + z_prime), lateral));
    Tensor3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = K[i] * std::conj(K[j]) * factor;
    return out;
}

Complex sandwich(const Tensor3& kernel, const DipoleConfig& dipole) {
    if (dipole.kind() == DipoleConfig::Kind::isotropic) return kernel[0][0] + kernel[1][1] + kernel[2][2];
    const auto& n = dipole.direction();
    Complex sum{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) sum += n[i] * kernel[i][j] * n[j];
    return sum;
}

ComplexResult coeff_resonant(const AtomParams& a, const MaterialModel& m, const MotionState& s, Transition t,
                             const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const double d2 = a.dipole * a.dipole;
    const Complex prefactor(0.0, -d2 / (8.0 * pi * pi * hbar * epsilon0));
    ComplexResult r;
    if (t == Transition::excited) {
        // Static part in closed form, velocity part numerically.
        const double static_factor = 2.0 * pi * angular(a.config).one / (4.0 * z * z * z);
        const Complex base = material::reflection_p(m, a.omega10) * static_factor;
        const double v = s.speed, sn = s.sin_angle(), cs = s.cos_angle(), w = a.omega10;
        InnerStats stats;
        const auto kq = k_spec(spec, z);
        auto over_k = [&](double phi) -> Complex {
            auto f = [&](double k) -> Complex {
                const Complex wp(w + v * k * sn * std::cos(phi), -v * k * cs);
                const Complex change = wp.real() > 0.0 ? material::reflection_p_difference(m, wp, w)
                                                       : -material::reflection_p(m, w);
                return change * k * k * std::exp(-2.0 * k * z);
            };
            return stats.take(quadrature::integrate_semi_infinite<Complex>(f, kq)) * a.config.contraction(phi);
        };
        auto moving = v == 0.0 ? ComplexResult{} : stats.fold(quadrature::integrate_periodic<Complex>(over_k, spec.rel_tol));
        r.value = prefactor * (base + moving.value);
        r.error_estimate = std::abs(prefactor) * moving.error_estimate;
        r.evaluations = moving.evaluations;
        r.converged = moving.converged;
        return r;
    }
    const double w = a.omega10, v = s.speed, cs = s.cos_angle();
    auto f = [&](double k, double phi) -> Complex {
        const Complex wp(-w + v * k * s.sin_angle() * std::cos(phi), -v * k * cs);
        return material::reflection_p(m, wp);
    };
    auto g = cherenkov_integral(a.config, v, s.sin_angle(), w, z, 2, f, spec);
    r.value = prefactor * g.value;
    r.error_estimate = std::abs(prefactor) * g.error_estimate;
    r.evaluations = g.evaluations;
    r.converged = g.converged;
    return r;
}

ComplexResult coeff_nonresonant(const AtomParams& a, const MaterialModel& m, const MotionState& s, Transition t,
                                CoeffMode mode, const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const double d2 = a.dipole * a.dipole;
    const double sign = t == Transition::ground ? -1.0 : 1.0;
    const auto ang = angular(a.config);
    const Complex pref(0.0, d2 / (8.0 * pi * pi * pi * hbar * epsilon0));
    const auto j1 = detail::wick_moment(m, a.omega10, 1, spec);
    // Zeroth order: h(w_nk) = sign * J1 with h(w) = integral of r_p(i xi) w / (w^2 + xi^2).
    Complex series = 2.0 * pi * ang.one * sign * j1.value / (4.0 * z * z * z);
    double error = 2.0 * pi * ang.one * j1.error_estimate / (4.0 * z * z * z);
    bool converged = j1.converged;

    if (mode == CoeffMode::series) {
        const double v = s.speed, c = s.cos_angle(), sn = s.sin_angle();
        if (v != 0.0) {
            const auto j2 = detail::wick_moment(m, a.omega10, 2, spec);
            const auto j3 = detail::wick_moment(m, a.omega10, 3, spec);
            // h'(+-a) = -J2, h''(+-a) = +-2 J3; k moments 3/(8 z^4) and 3/(4 z^5).
            const Complex u1(0.0, -c * ang.one);
            const double u2 = sn * sn * ang.cos2 - c * c * ang.one;
            series += 2.0 * pi * u1 * v * (-j2.value) * 3.0 / (8.0 * std::pow(z, 4));
            series += 2.0 * pi * u2 * v * v * sign * j3.value * 3.0 / (4.0 * std::pow(z, 5));
            error += 2.0 * pi * (std::abs(u1) * v * j2.error_estimate * 3.0 / (8.0 * std::pow(z, 4)) +
                                 std::abs(u2) * v * v * j3.error_estimate * 3.0 / (4.0 * std::pow(z, 5)));
            converged = converged && j2.converged && j3.converged;
        }
        return {pref * series, std::abs(pref) * error, 0, converged};
    }

    ComplexResult moving;
    if (s.speed != 0.0) {
        const double v = s.speed, c = s.cos_angle(), sn = s.sin_angle(), w0 = transition_frequency(a, t);
        moving = doppler_xi_integral(m, a.config, z, 2, w0, v, {Complex(0.0, -c), sn}, {1.0, 0.0}, spec);
    }
    return {pref * (series + moving.value), std::abs(pref) * (error + moving.error_estimate), moving.evaluations,
            converged && moving.converged};
}

ComplexResult coeff_velocity_part(const AtomParams& a, const MaterialModel& m, const MotionState& s, Transition t,
                                  const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    if (s.speed == 0.0) {
        kinematics::height(s);
        return {};
    }
    const double z = kinematics::height(s);
    const double d2 = a.dipole * a.dipole;
    const double v = s.speed, c = s.cos_angle(), sn = s.sin_angle(), w0 = transition_frequency(a, t);

    // Non-resonant part.
    const Complex pref_n(0.0, d2 / (8.0 * pi * pi * pi * hbar * epsilon0));
    auto doppler = [&](double k, double phi) { return Complex(w0 + v * k * sn * std::cos(phi), -v * k * c); };
    const auto nres = doppler_xi_integral(m, a.config, z, 2, w0, v, {Complex(0.0, -c), sn}, {1.0, 0.0}, spec);

    // Resonant part: r_p(w') Theta(Re w') minus its static value.
    const Complex pref_r(0.0, -d2 / (8.0 * pi * pi * hbar * epsilon0));
    ComplexResult res;
    if (t == Transition::excited) {
        InnerStats stats;
        const auto kq = k_spec(spec, z);
        const Complex r0 = material::reflection_p(m, w0);
        auto over_k = [&](double phi) -> Complex {
            auto f = [&](double k) -> Complex {
                const Complex wp = doppler(k, phi);
                const Complex change = wp.real() > 0.0 ? material::reflection_p_difference(m, wp, w0) : -r0;
                return change * k * k * std::exp(-2.0 * k * z);
            };
            return stats.take(quadrature::integrate_semi_infinite<Complex>(f, kq)) * a.config.contraction(phi);
        };
        res = stats.fold(quadrature::integrate_periodic<Complex>(over_k, spec.rel_tol));
    } else {
        auto f = [&](double k, double phi) { return material::reflection_p(m, doppler(k, phi)); };
        res = cherenkov_integral(a.config, v, sn, a.omega10, z, 2, f, spec);
    }
    return {pref_n * nres.value + pref_r * res.value,
            std::abs(pref_n) * nres.error_estimate + std::abs(pref_r) * res.error_estimate,
            nres.evaluations + res.evaluations, nres.converged && res.converged};
}

Estimate shift_ground(const AtomParams& a, const MaterialModel& m, const MotionState& s, Axis axis,
                      const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    const auto ang = angular(a.config);
    const double d2 = a.dipole * a.dipole;
    const double v = s.speed, c = s.cos_angle(), sn = s.sin_angle();
    const double pref = -d2 / (16.0 * pi * pi * hbar * epsilon0 * z * z * z);
    const auto j1 = detail::moment(m, a.omega10, 1, spec, contour(axis));
    double value = ang.one * j1.value;
    double error = ang.one * j1.error_estimate;
    bool converged = j1.converged;
    if (v != 0.0) {
        // U2 = sin^2 <D cos^2> - cos^2 <D>; equals 1 - 3 cos^2 for an isotropic atom.
        const double u2 = sn * sn * ang.cos2 - c * c * ang.one;
        const auto j3 = detail::moment(m, a.omega10, 3, spec, contour(axis));
        value += 3.0 * u2 * v * v * j3.value / (z * z);
        error += std::abs(3.0 * u2 * v * v / (z * z)) * j3.error_estimate;
        converged = converged && j3.converged;
    }
    return {pref * value, std::abs(pref) * error, converged, valid,
            std::string("markov.shift_ground.series.") + axis_tag(axis)};
}

Estimate rate_ground(const AtomParams& a, const MaterialModel& m, const MotionState& s, Axis axis,
                     const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    if (s.is_parallel()) {
        const auto res = coeff_resonant(a, m, s, Transition::ground, spec);
        return {2.0 * res.value.real(), 2.0 * res.error_estimate, res.converged, valid,
                "markov.rate_ground.resonance_gated"};
    }
    const auto ang = angular(a.config);
    const double d2 = a.dipole * a.dipole;
    const double pref = -3.0 * s.cos_angle() * ang.one * d2 * s.speed / (16.0 * pi * pi * hbar * epsilon0 * std::pow(z, 4));
    const auto j2 = detail::moment(m, a.omega10, 2, spec, contour(axis));
    return from(j2, pref, valid, std::string("markov.rate_ground.linear.") + axis_tag(axis));
}

double excited_rate(const AtomParams& a, const MaterialModel& m, const MotionState& s) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const double d2 = a.dipole * a.dipole;
    return d2 * angular(a.config).one * material::reflection_loss(m, a.omega10) /
           (8.0 * pi * hbar * epsilon0 * z * z * z);
}

InternalDynamics internal_dynamics(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                                   const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const double d2 = a.dipole * a.dipole;
    const auto ang = angular(a.config);
    InternalDynamics out;
    out.valid = kinematics::within_validity(s, a.omega10);

    const auto j1 = detail::wick_moment(m, a.omega10, 1, spec);
    const double cp_scale = d2 * ang.one / (16.0 * pi * pi * hbar * epsilon0 * z * z * z);
    out.static_shift = -cp_scale * j1.value;
    out.static_rate = 0.0;
    out.excited_rate = excited_rate(a, m, s);
    const Complex r10 = material::reflection_p(m, a.omega10);
    const double excited_static_shift = cp_scale * j1.value - d2 * ang.one * r10.real() / (16.0 * pi * hbar * epsilon0 * z * z * z);

    const auto c01 = coeff_velocity_part(a, m, s, Transition::ground, spec);
    const auto c10 = coeff_velocity_part(a, m, s, Transition::excited, spec);
    out.delta_c01 = c01.value;
    out.delta_c10 = c10.value;
    out.converged = j1.converged && c01.converged && c10.converged;

    out.shift = out.static_shift + c01.value.imag();
    out.rate = out.static_rate + 2.0 * c01.value.real();
    const double excited_shift = excited_static_shift + c10.value.imag();
    const double excited_rate_v = out.excited_rate + 2.0 * c10.value.real();
    out.dressed_frequency = a.omega10 + excited_shift - out.shift;
    out.mean_width = 0.5 * (out.rate + excited_rate_v);
    out.velocity_correction_order = s.is_parallel() ? 2 : 1;
    return out;
}

Estimate cp_force_d2(const AtomParams& a, const MaterialModel& m, const MotionState& s, Axis axis,
                     const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    const double c = s.cos_angle();
    const std::string source = std::string("markov.cp_d2.") + axis_tag(axis);
    if (c == 0.0) return {0.0, 0.0, true, valid, source};
    const double d2 = a.dipole * a.dipole;
    const double pref = -3.0 * c * angular(a.config).one * d2 / (16.0 * pi * pi * epsilon0 * std::pow(z, 4));
    return from(detail::moment(m, a.omega10, 1, spec, contour(axis)), pref, valid, source);
}

Estimate friction_force_d2(const AtomParams& a, const MaterialModel& m, const MotionState& s, Axis axis,
                           const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    const double c = s.cos_angle(), sn = s.sin_angle(), v = s.speed;
    const std::string source = std::string("markov.friction_d2.") + axis_tag(axis);
    if (c == 0.0 || v == 0.0) return {0.0, 0.0, true, valid, source};
    const auto ang = angular(a.config);
    const double d2 = a.dipole * a.dipole;
    const double weight = c * (sn * sn * ang.cos2 + c * c * ang.one);
    const double pref = 15.0 * d2 * v * v * weight / (16.0 * pi * pi * epsilon0 * std::pow(z, 6));
    return from(detail::moment(m, a.omega10, 3, spec, contour(axis)), pref, valid, source);
}

FrictionD4 friction_force_d4(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                             const InternalDynamics& dynamics, Axis axis, ImplicitWeight weight,
                             const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    const double c = s.cos_angle(), sn = s.sin_angle(), v = s.speed;
    const auto ang = angular(a.config);
    const double d2 = a.dipole * a.dipole;
    const double omega = a.omega10;
    FrictionD4 out;

    const std::string tag = axis_tag(axis);
    const double explicit_weight = c * c * ang.one + sn * sn * ang.cos2;
    const double pref_e = -3.0 * d2 * dynamics.excited_rate * v * explicit_weight / (8.0 * pi * pi * epsilon0 * std::pow(z, 5));
    if (pref_e == 0.0) {
        out.explicit_part = {0.0, 0.0, true, valid, "markov.friction_d4.explicit." + tag};
    } else {
        out.explicit_part = from(detail::moment(m, omega, 3, spec, contour(axis)), pref_e, valid,
                                 "markov.friction_d4.explicit." + tag);
    }

    const Complex x = std::conj(dynamics.delta_c01) + dynamics.delta_c10;
    const double shift = weight == ImplicitWeight::rate ? x.real() : x.imag();
    const double pref_i = 3.0 * c * ang.one * d2 * shift / (16.0 * pi * pi * epsilon0 * std::pow(z, 4));
    const std::string itag = std::string("markov.friction_d4.implicit.") +
                             (weight == ImplicitWeight::rate ? "rate." : "shift.") + tag;
    if (pref_i == 0.0) {
        out.implicit_part = {0.0, 0.0, true, valid, itag};
    } else {
        out.implicit_part = from(detail::moment(m, omega, 2, spec, contour(axis)), pref_i, valid, itag);
    }
    out.implicit_part.converged = out.implicit_part.converged && dynamics.converged;
    return out;
}

Estimate force_nonresonant_velocity_part(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                                         const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    const double c = s.cos_angle(), sn = s.sin_angle(), v = s.speed, w0 = a.omega10;
    const std::string source = "markov.nonresonant_force.doppler_exact";
    if (v == 0.0) return {0.0, 0.0, true, valid, source};
    const double d2 = a.dipole * a.dipole;
    // w = Omega' - i Gamma' with Gamma = 0: Omega - v k sin cos(phi) + i v k cos.
    const auto r = doppler_xi_integral(m, a.config, z, 3, w0, v, {Complex(0.0, c), -sn}, {c, Complex(0.0, -sn)}, spec);
    const double pref = -d2 / (4.0 * pi * pi * pi * epsilon0);
    return {pref * r.value.real(), std::abs(pref) * r.error_estimate, r.converged, valid, source};
}

Estimate force_resonant(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                        const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    const double c = s.cos_angle(), sn = s.sin_angle(), v = s.speed, w0 = a.omega10;
    const double d2 = a.dipole * a.dipole;
    // r_p(-Omega' + i Gamma') (cos - i sin cos(phi)), gated on -Omega' > 0, Gamma = 0.
    auto f = [&](double k, double phi) -> Complex {
        const Complex arg(v * k * sn * std::cos(phi) - w0, -v * k * c);
        return material::reflection_p(m, arg) * Complex(c, -sn * std::cos(phi));
    };
    const auto r = cherenkov_integral(a.config, v, sn, w0, z, 3, f, spec);
    const double pref = -d2 / (4.0 * pi * pi * epsilon0);
    return {pref * r.value.real(), std::abs(pref) * r.error_estimate, r.converged, valid, "markov.resonant_force"};
}

ForceReport force_nonresonant(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                              const InternalDynamics& dynamics, const QuadratureSpec& spec) {
    ForceReport report;
    report.cp_d2 = cp_force_d2(a, m, s, Axis::imaginary, spec);
    report.friction_d2 = friction_force_d2(a, m, s, Axis::real, spec);
    const auto d4 = friction_force_d4(a, m, s, dynamics, Axis::real, ImplicitWeight::rate, spec);
    report.friction_d4_explicit = d4.explicit_part;
    report.friction_d4_implicit = d4.implicit_part;
    report.resonant = force_resonant(a, m, s, spec);
    report.valid = kinematics::within_validity(s, a.omega10);
    return report;
}

}  // namespace markov
}  // namespace qfriction
