#include "qfriction/perturbative.hpp"

#include <algorithm>
#include <cmath>

#include "qfriction/errors.hpp"
#include "lsq.hpp"
#include "spectral.hpp"

namespace qfriction {

PlasmonMode PlasmonMode::make(const MaterialModel& m, double k_par, double phi, double omega) {
    if (!(k_par > 0.0)) throw DomainError("PlasmonMode: k must be > 0");
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("PlasmonMode: omega must be finite and >= 0");
    const double amp = constants::hbar * material::reflection_loss(m, omega) /
                       (8.0 * constants::pi * constants::pi * constants::pi * constants::epsilon0 * k_par);
    return {k_par, phi, omega, amp};
}

namespace perturbative {

namespace {

using constants::epsilon0;
using constants::hbar;
using constants::pi;
using detail::Contour;

struct Angular {
    double one, cos2;
};

Angular angular(const DipoleConfig& d) {
    return {quadrature::phi_average(quadrature::PhiWeight::one, d),
            quadrature::phi_average(quadrature::PhiWeight::cos2_phi, d)};
}

Contour contour(Axis axis) { return axis == Axis::real ? Contour::real : Contour::imaginary; }

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

Estimate scaled(const RealResult& r, double factor, bool valid, std::string source) {
    return {r.value * factor, r.error_estimate * std::abs(factor), r.converged, valid, std::move(source)};
}

// exp(i w) - 1 without cancellation for small |w|.
Complex expm1i(Complex w) {
    const double x = -w.imag(), y = w.real();  // i w = x + i y
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// (1 - exp(-x)) / x, continuous at x = 0.
double one_minus_exp_over(double x) { return x == 0.0 ? 1.0 : -std::expm1(-x) / x; }

// Integral over phi in [0, 2 pi) of (2P - 1) / (P^2 + C^2), P = 1 - B cos(phi),
// through K = integral of 1 / (alpha - B cos(phi)) = 2 pi / sqrt(alpha^2 - B^2),
// alpha = 1 + i C, with the branch fixed by the product of principal roots.
double phi_kernel(double b, double c) {
    const Complex alpha(1.0, c);
    const Complex k = 2.0 * pi / (std::sqrt(alpha - b) * std::sqrt(alpha + b));
    return 2.0 * k.real() + k.imag() / c;
}

// phi_kernel(b, c) - 2 pi without cancellation. With u = alpha^2 - B^2 - 1 and
// w = sqrt(1 + u), h = 1/w - 1 + u/2 = u^2 (w + 2) / (2 w (1 + w)^2) is O(u^2).
double phi_kernel_excess(double b, double c) {
    const Complex u(-(b * b + c * c), 2.0 * c);
    const Complex w = std::sqrt(Complex(1.0, 0.0) + u);
    const Complex h = u * u * (w + 2.0) / (2.0 * w * (1.0 + w) * (1.0 + w));
    return 2.0 * pi * (b * b + c * c) + 4.0 * pi * h.real() + 2.0 * pi * h.imag() / c;
}

// Surface-plasmon pole of Im r_p continued off the real axis: p = w~ - i gamma / 2.
struct PlasmonPole {
    bool underdamped = false;
    Complex position{};
    Complex residue{};  // residue of (r_p(w) - r_p(-w)) / (2i) at p
};

PlasmonPole plasmon_pole(const MaterialModel& m) {
    const double wp2 = m.plasma_frequency * m.plasma_frequency;
    const double w = wp2 + 2.0 * m.resonance_frequency * m.resonance_frequency;
    const double disc = 2.0 * w - m.damping * m.damping;
    PlasmonPole p;
    if (!(disc > 0.0)) return p;
    const double wt = 0.5 * std::sqrt(disc);
    p.underdamped = true;
    p.position = Complex(wt, -0.5 * m.damping);
    p.residue = Complex(0.0, wp2 / (8.0 * wt));
    return p;
}

// (r_p(-i xi) - r_p(i xi)) / (2i) on the negative imaginary axis, divided by -i.
double loss_on_negative_axis(const MaterialModel& m, double xi) {
    const double wp2 = m.plasma_frequency * m.plasma_frequency;
    const double w = wp2 + 2.0 * m.resonance_frequency * m.resonance_frequency;
    const double gx = 2.0 * m.damping * xi;
    return 2.0 * m.damping * xi * wp2 / ((w + 2.0 * xi * xi - gx) * (w + 2.0 * xi * xi + gx));
}

// Per-mode quantities of c_0^(2): A' = w + beta, and the poles q1 = -beta,
// q2 = -beta + 2 i k v cos(theta) of the bracket.
struct ModeKinematics {
    Complex beta, q1, q2;
    double decay;  // 2 k v cos(theta)
};

ModeKinematics mode_kinematics(const AtomParams& a, const MotionState& s, double k, double phi) {
    const double v = s.speed;
    ModeKinematics mk;
    mk.beta = Complex(a.omega10 - v * k * std::cos(phi) * s.sin_angle(), v * k * s.cos_angle());
    mk.q1 = -mk.beta;
    mk.decay = 2.0 * k * v * s.cos_angle();
    mk.q2 = mk.q1 + Complex(0.0, mk.decay);
    return mk;
}

void check_adiabatic(const AtomParams& a, const MotionState& s, const char* who) {
    // Modes with Re(w10 + w') < 0 (k > w10 / (v sin)) must be negligible.
    const double proj = s.speed * std::abs(s.sin_angle());
    if (proj > 0.0 && a.omega10 * s.initial_height / proj < 40.0)
        throw DomainError(std::string(who) + ": velocity outside the adiabatic range");
}

}  // namespace

Complex amp_c11(const PlasmonMode& mode, const AtomParams& a, const MotionState& s, const std::array<double, 3>& eta) {
    a.validate();
    s.validate();
    if (s.time < 0.0) throw DomainError("amp_c11: t must be >= 0");
    if (s.time == 0.0) return {};
    const double k = mode.k_par;
    const Complex wprime = kinematics::doppler_pert(mode.omega, s.speed, s.angle, mode.phi, k);
    const Complex big_a = a.omega10 + wprime;
    const Complex eta_k_conj = k * Complex(eta[0] * std::cos(mode.phi) + eta[1] * std::sin(mode.phi), -eta[2]);
    const double psi = std::sqrt(std::max(mode.amplitude_sq, 0.0));
    const Complex coupling = a.dipole * eta_k_conj * psi * std::exp(-k * s.initial_height) / hbar;
    // i/(A') (e^{i A' t} - 1), continuous as A' t -> 0.
    const Complex phase = big_a * s.time;
    const Complex ratio = std::abs(phase) < 1e-300 ? Complex(0.0, s.time) : Complex(0.0, 1.0) * expm1i(phase) / big_a;
    return coupling * ratio;
}

C02Parts amp_c02_parts(const AtomParams& a, const MaterialModel& m, const MotionState& s, const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    s.validate();
    spec.validate();
    if (s.time < 0.0) throw DomainError("amp_c02: t must be >= 0");
    C02Parts out;
    if (s.time == 0.0) return out;
    check_adiabatic(a, s, "amp_c02");
    const double z0 = s.initial_height;
    const double t = s.time;
    const double d2 = a.dipole * a.dipole;
    const Complex pref(0.0, d2 / (8.0 * pi * pi * pi * hbar * epsilon0));
    const auto pole = plasmon_pole(m);

    const auto w_spec = detail::frequency_spec(m, a.omega10, nested(spec, 0.01), Contour::real);
    auto xi_spec = nested(spec, 0.01);
    xi_spec.scale = a.omega10;
    xi_spec.breakpoints = {m.surface_mode_frequency(), 1.0 / t};
    const auto kq = k_spec(spec, z0);

    // Per (k, phi): background and plasmon-pole parts of the omega integral.
    InnerStats stats;
    auto background = [&](double k, double phi) -> Complex {
        const auto mk = mode_kinematics(a, s, k, phi);
        const double b1 = t * one_minus_exp_over(mk.decay * t);
        const Complex iq2 = Complex(0.0, 1.0) * mk.q2;
        // Secular part: [B1 - 1/(i (w - q2))] / (w - q1).
        auto secular = [&](double w) -> Complex {
            const Complex a1 = w - mk.q1;
            return material::reflection_loss(m, w) * (b1 - 1.0 / (Complex(0.0, 1.0) * (w - mk.q2))) / a1;
        };
        Complex value = stats.take(quadrature::integrate_semi_infinite<Complex>(secular, w_spec));
        // Oscillatory part exp(i q2 t) * integral of Im r g(w) exp(-i w t),
        // g = 1 / (i (w - q1)(w - q2)).
        auto g = [&](Complex w) { return 1.0 / (Complex(0.0, 1.0) * (w - mk.q1) * (w - mk.q2)); };
        Complex osc;
        if (pole.underdamped) {
            auto along = [&](double xi) -> Complex {
                return loss_on_negative_axis(m, xi) * g(Complex(0.0, -xi)) * std::exp(-xi * t);
            };
            osc = -stats.take(quadrature::integrate_semi_infinite<Complex>(along, xi_spec));
        } else {
            auto direct = [&](double w) -> Complex {
                return material::reflection_loss(m, w) * g(Complex(w, 0.0)) * std::exp(Complex(0.0, -w * t));
            };
            osc = stats.take(quadrature::integrate_semi_infinite<Complex>(direct, w_spec));
        }
        value += std::exp(iq2 * t) * osc;
        return value;
    };
    auto pole_part = [&](double k, double phi) -> Complex {
        if (!pole.underdamped) return {};
        const auto mk = mode_kinematics(a, s, k, phi);
        const Complex p = pole.position;
        const Complex g = 1.0 / (Complex(0.0, 1.0) * (p - mk.q1) * (p - mk.q2));
        return Complex(0.0, -2.0 * pi) * pole.residue * g * std::exp(Complex(0.0, 1.0) * (mk.q2 - p) * t);
    };

    auto run = [&](auto&& per_mode) {
        InnerStats kstats;
        auto over_phi = [&](double phi) -> Complex {
            auto f = [&](double k) -> Complex { return per_mode(k, phi) * k * k * std::exp(-2.0 * k * z0); };
            return kstats.take(quadrature::integrate_semi_infinite<Complex>(f, kq)) * a.config.contraction(phi);
        };
        auto r = kstats.fold(quadrature::integrate_periodic<Complex>(over_phi, spec.rel_tol));
        r.value *= pref;
        r.error_estimate *= std::abs(pref);
        return r;
    };
    out.background = stats.fold(run(background));
    out.plasmon_pole = run(pole_part);
    return out;
}

ComplexResult amp_c02(const AtomParams& a, const MaterialModel& m, const MotionState& s, const QuadratureSpec& spec) {
    const auto parts = amp_c02_parts(a, m, s, spec);
    return {parts.total(), parts.background.error_estimate + parts.plasmon_pole.error_estimate,
            parts.background.evaluations + parts.plasmon_pole.evaluations,
            parts.background.converged && parts.plasmon_pole.converged};
}

RealResult excited_population(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                              const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    s.validate();
    spec.validate();
    if (s.time < 0.0) throw DomainError("excited_population: t must be >= 0");
    if (s.time == 0.0) return {};
    check_adiabatic(a, s, "excited_population");
    const double z0 = s.initial_height;
    const double t = s.time;
    const double pref = a.dipole * a.dipole / (8.0 * pi * pi * pi * epsilon0 * hbar);
    const auto w_spec = detail::frequency_spec(m, a.omega10, nested(spec, 0.01), Contour::real);
    const auto kq = k_spec(spec, z0);
    InnerStats stats;
    auto over_phi = [&](double phi) -> double {
        auto f = [&](double k) -> double {
            const auto mk = mode_kinematics(a, s, k, phi);
            auto g = [&](double w) -> double {
                const Complex big_a = w + mk.beta;
                return material::reflection_loss(m, w) * std::norm(expm1i(big_a * t)) / std::norm(big_a);
            };
            return stats.take(quadrature::integrate_semi_infinite<double>(g, w_spec)) * k * k * std::exp(-2.0 * k * z0);
        };
        return stats.take(quadrature::integrate_semi_infinite<double>(f, kq)) * a.config.contraction(phi);
    };
    auto r = stats.fold(quadrature::integrate_periodic<double>(over_phi, spec.rel_tol));
    r.value *= pref;
    r.error_estimate *= pref;
    return r;
}

ShiftRate shift_rate_ground(const AtomParams& a, const MaterialModel& m, const MotionState& s, Axis axis,
                            const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    s.validate();
    const double z0 = s.initial_height;
    if (!(z0 > 0.0)) throw SurfaceContact("shift_rate_ground: z0 must be > 0");
    const bool valid = kinematics::within_validity(s.at_start(), a.omega10);
    const auto ang = angular(a.config);
    const double d2 = a.dipole * a.dipole;
    const double v = s.speed, c = s.cos_angle(), sn = s.sin_angle();
    const std::string tag = axis == Axis::real ? "real-axis" : "imaginary-axis";

    ShiftRate out;
    const double shift_pref = -d2 / (16.0 * pi * pi * epsilon0 * z0 * z0 * z0);
    const auto j1 = detail::moment(m, a.omega10, 1, spec, contour(axis));
    out.static_energy_shift = scaled(j1, shift_pref * ang.one, valid, "perturbative.energy_shift.static." + tag);
    out.energy_shift = out.static_energy_shift;
    out.energy_shift.source = "perturbative.energy_shift." + tag;
    if (v != 0.0) {
        const double u2 = sn * sn * ang.cos2 - c * c * ang.one;
        const auto j3 = detail::moment(m, a.omega10, 3, spec, contour(axis));
        const double f = shift_pref * 3.0 * u2 * v * v / (z0 * z0);
        out.energy_shift.value += f * j3.value;
        out.energy_shift.error += std::abs(f) * j3.error_estimate;
        out.energy_shift.converged = out.energy_shift.converged && j3.converged;
    }
    const std::string rate_source = "perturbative.rate." + tag;
    if (c == 0.0 || v == 0.0) {
        out.rate = {0.0, 0.0, true, valid, rate_source};
    } else {
        const double rate_pref = -3.0 * c * ang.one * d2 * v / (16.0 * pi * pi * hbar * epsilon0 * std::pow(z0, 4));
        out.rate = scaled(detail::moment(m, a.omega10, 2, spec, contour(axis)), rate_pref, valid, rate_source);
    }
    return out;
}

namespace {

// Integral over s in [0, inf) of s^3 exp(-2 s) times the phi integral of the
// adiabatic kernel, for a given y. `subtract_static` removes the y = 0 value
// of the phi integral before integrating.
double s_kernel(const DipoleConfig& dipole, double sin_t, double cos_t, double y, bool subtract_static,
                const QuadratureSpec& s_spec, InnerStats& stats) {
    const bool iso = dipole.kind() == DipoleConfig::Kind::isotropic;
    auto f = [&](double s) -> double {
        const double b = y * s * sin_t, c = y * s * cos_t;
        double phi_int;
        if (iso) {
            phi_int = subtract_static ? phi_kernel_excess(b, c) : phi_kernel(b, c);
        } else {
            // (2P - 1) / (P^2 + C^2) - 1 = -((1 - P)^2 + C^2) / (P^2 + C^2)
            auto g = [&](double phi) {
                const double x = b * std::cos(phi), p = 1.0 - x, q = p * p + c * c;
                const double kernel = subtract_static ? -(x * x + c * c) / q : (2.0 * p - 1.0) / q;
                return 0.5 * dipole.contraction(phi) * kernel;
            };
            phi_int = stats.take(quadrature::integrate_periodic<double>(g, s_spec.rel_tol * 0.1));
        }
        return s * s * s * std::exp(-2.0 * s) * phi_int;
    };
    return stats.take(quadrature::integrate_semi_infinite<double>(f, s_spec));
}

RealResult full_force_integral(const AtomParams& a, const MaterialModel& m, const MotionState& s, bool subtract_static,
                               const QuadratureSpec& spec) {
    const double z = kinematics::height(s);
    const double v = s.speed, c = s.cos_angle(), sn = s.sin_angle();
    QuadratureSpec s_spec = nested(spec, 0.1);
    s_spec.mapping = TailMapping::exp_decay;
    s_spec.scale = 0.5;
    const auto w_spec = detail::frequency_spec(m, a.omega10, spec, Contour::real);
    InnerStats stats;
    auto f = [&](double w) -> double {
        const double big_a = a.omega10 + w;
        const double y = v / (z * big_a);
        return material::reflection_loss(m, w) / big_a * s_kernel(a.config, sn, c, y, subtract_static, s_spec, stats);
    };
    auto r = stats.fold(quadrature::integrate_semi_infinite<double>(f, w_spec));
    const double pref = -a.dipole * a.dipole * c / (2.0 * pi * pi * pi * epsilon0 * std::pow(z, 4));
    r.value *= pref;
    r.error_estimate *= std::abs(pref);
    return r;
}

}  // namespace

ForceReport force_2(const AtomParams& a, const MaterialModel& m, const MotionState& s, const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    const double c = s.cos_angle(), sn = s.sin_angle(), v = s.speed;
    const auto ang = angular(a.config);
    const double d2 = a.dipole * a.dipole;

    ForceReport report;
    report.valid = valid;
    report.friction_d4_explicit = {0.0, 0.0, true, valid, ""};
    report.friction_d4_implicit = {0.0, 0.0, true, valid, ""};
    report.resonant = {0.0, 0.0, true, valid, ""};
    if (c == 0.0) {
        report.cp_d2 = {0.0, 0.0, true, valid, "perturbative.cp_d2"};
        report.friction_d2 = {0.0, 0.0, true, valid, "perturbative.friction_d2"};
        report.full_d2 = {0.0, 0.0, true, valid, "perturbative.force_d2.full"};
        return report;
    }
    const double cp_pref = -3.0 * c * ang.one * d2 / (16.0 * pi * pi * epsilon0 * std::pow(z, 4));
    report.cp_d2 = scaled(detail::loss_moment(m, a.omega10, 1, spec), cp_pref, valid, "perturbative.cp_d2");
    if (v == 0.0) {
        report.friction_d2 = {0.0, 0.0, true, valid, "perturbative.friction_d2"};
    } else {
        const double fr_pref =
            15.0 * d2 * v * v * c * (sn * sn * ang.cos2 + c * c * ang.one) / (16.0 * pi * pi * epsilon0 * std::pow(z, 6));
        report.friction_d2 = scaled(detail::loss_moment(m, a.omega10, 3, spec), fr_pref, valid, "perturbative.friction_d2");
    }
    const auto full = full_force_integral(a, m, s, false, spec);
    report.full_d2 = {full.value, full.error_estimate, full.converged, valid, "perturbative.force_d2.full"};
    return report;
}

Estimate force_2_velocity_part(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                               const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    const std::string source = "perturbative.force_d2.velocity_part";
    if (s.cos_angle() == 0.0 || s.speed == 0.0) return {0.0, 0.0, true, valid, source};
    const auto r = full_force_integral(a, m, s, true, spec);
    return {r.value, r.error_estimate, r.converged, valid, source};
}

Estimate force_2_y4_term(const AtomParams& a, const MaterialModel& m, const MotionState& s, const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    if (a.config.kind() != DipoleConfig::Kind::isotropic)
        throw DomainError("force_2_y4_term: isotropic atoms only");
    const double z = kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    const double c = s.cos_angle(), v = s.speed;
    const double c2 = c * c;
    const double pref = -a.dipole * a.dipole * c / (2.0 * pi * pi * pi * epsilon0 * std::pow(z, 4)) *
                        (315.0 * pi / 64.0) * (7.0 * c2 * c2 + 10.0 * c2 - 9.0) * std::pow(v / z, 4);
    if (pref == 0.0) return {0.0, 0.0, true, valid, "perturbative.force_d2.y4"};
    return scaled(detail::loss_moment(m, a.omega10, 5, spec), pref, valid, "perturbative.force_d2.y4");
}

Force4Vacuum force_4_vacuum(const AtomParams& a, const MaterialModel& m, const MotionState& s, const ShiftRate& sr,
                            const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    const double z = kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    const double c = s.cos_angle(), sn = s.sin_angle(), v = s.speed;
    const auto ang = angular(a.config);
    const double d2 = a.dipole * a.dipole;
    Force4Vacuum out;

    const double rate = sr.rate.value;
    if (rate == 0.0 || s.time == 0.0) {
        out.loss_term = {0.0, 0.0, true, valid, "perturbative.force_d4.loss"};
    } else {
        const auto f2 = force_2(a, m, s, spec);
        const double split = f2.cp_d2.value + f2.friction_d2.value;
        out.loss_term = {-rate * s.time * split, std::abs(rate * s.time) * (f2.cp_d2.error + f2.friction_d2.error),
                         f2.cp_d2.converged && f2.friction_d2.converged, valid, "perturbative.force_d4.loss"};
    }

    const double shift0 = sr.static_energy_shift.value / hbar;
    const double cp_pref = 3.0 * c * ang.one * d2 * shift0 / (16.0 * pi * pi * epsilon0 * std::pow(z, 4));
    if (cp_pref == 0.0) {
        out.cp4 = {0.0, 0.0, true, valid, "perturbative.cp_d4"};
    } else {
        out.cp4 = scaled(detail::loss_moment(m, a.omega10, 2, spec), cp_pref, valid, "perturbative.cp_d4");
    }

    const double fr_pref =
        -3.0 * d2 * rate * v * (c * c * ang.one + sn * sn * ang.cos2) / (8.0 * pi * pi * epsilon0 * std::pow(z, 5));
    if (fr_pref == 0.0) {
        out.fr4 = {0.0, 0.0, true, valid, "perturbative.friction_d4"};
    } else {
        out.fr4 = scaled(detail::loss_moment(m, a.omega10, 3, spec), fr_pref, valid, "perturbative.friction_d4");
    }
    return out;
}

Estimate sigma4_0(const AtomParams& a, const MaterialModel& m, const MotionState& s, const QuadratureSpec& spec) {
    a.validate();
    m.validate();
    if (a.config.kind() != DipoleConfig::Kind::isotropic) throw DomainError("sigma4_0: isotropic atoms only");
    const double z = kinematics::height(s);
    const bool valid = kinematics::within_validity(s, a.omega10);
    const double c = s.cos_angle();
    const std::string source = "perturbative.two_photon_d4";
    if (c == 0.0) return {0.0, 0.0, true, valid, source};
    const double w10 = a.omega10;
    const auto w_spec = detail::frequency_spec(m, w10, spec, Contour::real);
    auto f = [&](double w1, double w2) -> double {
        const double sum = w1 + w2;
        if (!(sum > 0.0)) return 0.0;
        const double a1 = w10 + w1, a2 = w10 + w2;
        const double num = 2.0 * w10 + sum;
        return material::reflection_loss(m, w1) * material::reflection_loss(m, w2) * num * num /
               (sum * a1 * a1 * a2 * a2);
    };
    const auto r = quadrature::integrate_2d<double>(f, w_spec, quadrature::Symmetry::exchange);
    const double d2 = a.dipole * a.dipole;
    const double pref = -3.0 * d2 * d2 * c / (128.0 * pi * pi * pi * hbar * epsilon0 * epsilon0 * std::pow(z, 7));
    return scaled(r, pref, valid, source);
}

C02Fit fit_c02(const AtomParams& a, const MaterialModel& m, const MotionState& s, int first_period, int count,
               const QuadratureSpec& spec) {
    if (count < 4) throw FitError("fit_c02: need at least 4 samples");
    if (first_period < 1) throw FitError("fit_c02: first_period must be >= 1");
    C02Fit fit;
    for (int n = first_period; n < first_period + count; ++n) {
        MotionState st = s;
        st.time = 2.0 * pi * n / a.omega10;
        const auto parts = amp_c02_parts(a, m, st, spec);
        fit.times.push_back(st.time);
        fit.samples.push_back(parts.background.value);
    }
    // Intercept + slope + drift, on t scaled to O(1).
    const double t_scale = fit.times.back();
    const auto n = static_cast<Eigen::Index>(fit.times.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd re(n), im(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = fit.times[i] / t_scale;
        design.row(i) << 1.0, u, u * u;
        re(i) = fit.samples[i].real();
        im(i) = fit.samples[i].imag();
    }
    auto solve = [&](const Eigen::VectorXd& y, double& slope, double& slope_err) {
        const auto ls = detail::least_squares(design, y);
        slope = ls.beta(1) / t_scale;
        slope_err = std::sqrt(std::max(ls.covariance(1, 1), 0.0)) / t_scale;
    };
    double im_slope = 0.0, im_err = 0.0, re_slope = 0.0, re_err = 0.0;
    solve(im, im_slope, im_err);
    solve(re, re_slope, re_err);
    fit.energy_shift = -hbar * im_slope;
    fit.energy_shift_stderr = hbar * im_err;
    fit.rate = -2.0 * re_slope;
    fit.rate_stderr = 2.0 * re_err;
    return fit;
}

}  // namespace perturbative
}  // namespace qfriction
