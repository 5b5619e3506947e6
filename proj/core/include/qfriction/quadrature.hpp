#pragma once

// Adaptive Gauss-Kronrod quadrature on finite and semi-infinite domains.
//
// Every routine returns an IntegralResult carrying an error estimate and a
// convergence flag; running out of subdivisions is reported, never hidden.
// The engine is stateless and reentrant: concurrent calls are safe as long
// as the integrands themselves are.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "qfriction/dipole.hpp"
#include "qfriction/errors.hpp"

namespace qfriction {

/// Change of variables used to map [0, inf) onto [0, 1).
enum class TailMapping {
    exp_decay,      // x = -scale * ln(1 - u)
    rational_tail,  // x = scale * u / (1 - u)
};

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_subdivisions = 4000;
    TailMapping mapping = TailMapping::rational_tail;
    /// Length scale of the semi-infinite mapping (same units as the variable).
    double scale = 1.0;
    /// Points with sharp integrand structure; the domain is split there first.
    std::vector<double> breakpoints;

    /// Throws DomainError unless rel_tol > 100 eps, abs_tol >= 0, scale > 0
    /// and max_subdivisions >= 1.
    void validate() const;

    QuadratureSpec with_scale(double s) const {
        QuadratureSpec q = *this;
        q.scale = s;
        return q;
    }
    QuadratureSpec with_breakpoints(std::vector<double> points) const {
        QuadratureSpec q = *this;
        q.breakpoints = std::move(points);
        return q;
    }
    QuadratureSpec with_rel_tol(double tol) const {
        QuadratureSpec q = *this;
        q.rel_tol = tol;
        return q;
    }
};

template <class T>
struct IntegralResult {
    T value{};
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

using RealResult = IntegralResult<double>;
using ComplexResult = IntegralResult<std::complex<double>>;

namespace quadrature {

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

// 21-point Kronrod rule with the embedded 10-point Gauss rule; error
// estimate scaled as in QUADPACK's qk21.
template <class T, class F>
Segment<T> kronrod21(const F& f, double a, double b) {
    static constexpr double xgk[11] = {
        0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
        0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
        0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
        0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
        0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
        0.0};
    static constexpr double wgk[11] = {
        0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
        0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
        0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
        0.123491976262065851077600712399530, 0.134709217311473325928054001771707,
        0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
        0.149445554002916905664936468389821};
    static constexpr double wg[5] = {
        0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
        0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
        0.295524224714752870173892994651338};

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T fv[21];
    fv[20] = f(center);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * xgk[j];
        fv[2 * j] = f(center - dx);
        fv[2 * j + 1] = f(center + dx);
    }
    T kronrod = fv[20] * wgk[10];
    T gauss{};
    double resabs = magnitude(fv[20]) * wgk[10];
    for (int j = 0; j < 10; ++j) {
        const T pair = fv[2 * j] + fv[2 * j + 1];
        kronrod += pair * wgk[j];
        resabs += wgk[j] * (magnitude(fv[2 * j]) + magnitude(fv[2 * j + 1]));
        if (j % 2 == 1) gauss += pair * wg[j / 2];
    }
    const T mean = kronrod * 0.5;
    double resasc = wgk[10] * magnitude(fv[20] - mean);
    for (int j = 0; j < 10; ++j)
        resasc += wgk[j] * (magnitude(fv[2 * j] - mean) + magnitude(fv[2 * j + 1] - mean));

    const double scale = std::abs(half);
    resabs *= scale;
    resasc *= scale;
    double err = magnitude((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
    return {a, b, kronrod * half, err};
}

template <class T, class F>
IntegralResult<T> adaptive(const F& f, std::vector<double> cuts, const QuadratureSpec& spec) {
    std::priority_queue<Segment<T>> queue;
    IntegralResult<T> result;
    T total{};
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto seg = kronrod21<T>(f, cuts[i], cuts[i + 1]);
        result.evaluations += 21;
        total += seg.value;
        total_error += seg.error;
        queue.push(seg);
    }
    int subdivisions = static_cast<int>(queue.size());
    auto target = [&] { return std::max(spec.abs_tol, spec.rel_tol * magnitude(total)); };
    while (total_error > target()) {
        if (subdivisions >= spec.max_subdivisions || !std::isfinite(total_error)) {
            result.converged = false;
            break;
        }
        auto worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval can no longer be split in double precision.
            result.converged = false;
            break;
        }
        queue.pop();
        auto left = kronrod21<T>(f, worst.a, mid);
        auto right = kronrod21<T>(f, mid, worst.b);
        result.evaluations += 42;
        ++subdivisions;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    // Re-sum to shed the drift of the running totals.
    T fresh{};
    double fresh_error = 0.0;
    while (!queue.empty()) {
        fresh += queue.top().value;
        fresh_error += queue.top().error;
        queue.pop();
    }
    result.value = fresh;
    result.error_estimate = fresh_error;
    if (result.converged && fresh_error > std::max(spec.abs_tol, spec.rel_tol * magnitude(fresh)))
        result.converged = false;
    return result;
}

inline std::vector<double> cut_points(double a, double b, const std::vector<double>& interior) {
    std::vector<double> cuts{a};
    std::vector<double> sorted = interior;
    std::sort(sorted.begin(), sorted.end());
    for (double p : sorted)
        if (p > a && p < b && p > cuts.back()) cuts.push_back(p);
    cuts.push_back(b);
    return cuts;
}

}  // namespace detail

/// Adaptive integral of f over the finite interval [a, b]. Breakpoints in
/// the spec that fall inside (a, b) seed the initial partition.
template <class T, class F>
IntegralResult<T> integrate(const F& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate: non-finite limits");
    if (a == b) return {};
    if (a > b) {
        auto r = integrate<T>(f, b, a, spec);
        r.value = -r.value;
        return r;
    }
    return detail::adaptive<T>(f, detail::cut_points(a, b, spec.breakpoints), spec);
}

/// Adaptive integral of f over [0, inf) after mapping onto u in [0, 1).
/// The integrand is only ever evaluated at interior points.
template <class T, class F>
IntegralResult<T> integrate_semi_infinite(const F& f, const QuadratureSpec& spec) {
    spec.validate();
    const double c = spec.scale;
    const bool rational = spec.mapping == TailMapping::rational_tail;
    auto mapped = [&](double u) -> T {
        const double rest = 1.0 - u;
        if (!(rest > 0.0) || !(u > 0.0)) return T{};
        if (rational) {
            const double x = c * u / rest;
            return f(x) * (c / (rest * rest));
        }
        const double x = -c * std::log(rest);
        return f(x) * (c / rest);
    };
    std::vector<double> interior;
    for (double x : spec.breakpoints) {
        if (!(x > 0.0) || !std::isfinite(x)) continue;
        interior.push_back(rational ? x / (x + c) : -std::expm1(-x / c));
    }
    return detail::adaptive<T>(mapped, detail::cut_points(0.0, 1.0, interior), spec);
}

enum class Symmetry { none, exchange };

/// Integral over [0, inf)^2 of f(x, y), nested adaptive. With
/// Symmetry::exchange the integrand must satisfy f(x, y) = f(y, x) and only
/// the triangle y < x is evaluated (then doubled).
template <class T, class F>
IntegralResult<T> integrate_2d(const F& f, const QuadratureSpec& spec, Symmetry symmetry = Symmetry::none) {
    spec.validate();
    QuadratureSpec inner_spec = spec;
    inner_spec.rel_tol = std::max(0.1 * spec.rel_tol, 200.0 * std::numeric_limits<double>::epsilon());
    inner_spec.abs_tol = 0.0;
    QuadratureSpec outer_spec = spec;
    outer_spec.rel_tol = 0.8 * spec.rel_tol;

    bool inner_ok = true;
    double worst_inner_rel = 0.0;
    std::size_t inner_evals = 0;
    auto outer = [&](double x) -> T {
        auto g = [&](double y) -> T { return f(x, y); };
        IntegralResult<T> r = symmetry == Symmetry::exchange ? integrate<T>(g, 0.0, x, inner_spec)
                                                             : integrate_semi_infinite<T>(g, inner_spec);
        inner_evals += r.evaluations;
        inner_ok = inner_ok && r.converged;
        const double mag = detail::magnitude(r.value);
        if (mag > 0.0) worst_inner_rel = std::max(worst_inner_rel, r.error_estimate / mag);
        return r.value;
    };
    IntegralResult<T> result = integrate_semi_infinite<T>(outer, outer_spec);
    if (symmetry == Symmetry::exchange) {
        result.value = result.value * 2.0;
        result.error_estimate *= 2.0;
    }
    result.error_estimate += worst_inner_rel * detail::magnitude(result.value);
    result.evaluations += inner_evals;
    result.converged = result.converged && inner_ok &&
                       result.error_estimate <= std::max(spec.abs_tol, spec.rel_tol * detail::magnitude(result.value));
    return result;
}

/// Trapezoidal rule over one period [0, 2 pi), doubling the node count until
/// successive estimates agree. Converges geometrically for analytic periodic
/// integrands.
template <class T, class F>
IntegralResult<T> integrate_periodic(const F& f, double rel_tol, double abs_tol = 0.0, int min_nodes = 8,
                                     int max_nodes = 4096) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    IntegralResult<T> result;
    int n = min_nodes;
    T sum{};
    for (int j = 0; j < n; ++j) sum += f(two_pi * j / n);
    result.evaluations = static_cast<std::size_t>(n);
    T estimate = sum * (two_pi / n);
    while (true) {
        T extra{};
        for (int j = 0; j < n; ++j) extra += f(two_pi * (j + 0.5) / n);
        result.evaluations += static_cast<std::size_t>(n);
        sum += extra;
        n *= 2;
        const T refined = sum * (two_pi / n);
        const double diff = detail::magnitude(refined - estimate);
        estimate = refined;
        if (diff <= std::max(abs_tol, rel_tol * detail::magnitude(refined))) {
            result.error_estimate = diff;
            break;
        }
        if (n >= max_nodes) {
            result.error_estimate = diff;
            result.converged = false;
            break;
        }
    }
    result.value = estimate;
    return result;
}

/// n! / (2 z)^(n+1): the exact value of the integral over k in [0, inf) of k^n exp(-2 k z).
double exponential_moment(int n, double z);

enum class PhiWeight { one, cos_phi, cos2_phi, sin_2phi };

/// Closed form of (1 / 2 pi) * integral over phi in [0, 2 pi) of w(phi) d^(phi)2 / d^2.
double phi_average(PhiWeight weight, const DipoleConfig& dipole);

}  // namespace quadrature
}  // namespace qfriction
