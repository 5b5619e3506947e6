#include "qfriction/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "lsq.hpp"
#include "qfriction/errors.hpp"
#include "qfriction/markov.hpp"
#include "qfriction/perturbative.hpp"

namespace qfriction::analysis {

FitWindow FitWindow::relative(double z, double omega10, double lo, double hi, int points) {
    return {lo * z * omega10, hi * z * omega10, points};
}

void FitWindow::validate() const {
    if (!(v_min > 0.0) || !(v_max > v_min) || !std::isfinite(v_max))
        throw FitError("fit window must satisfy 0 < v_min < v_max");
    if (points < 8) throw FitError("fit window needs at least 8 points");
}

std::vector<double> FitWindow::grid() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(points));
    const double step = std::log(v_max / v_min) / (points - 1);
    for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = v_min * std::exp(step * i);
    v.back() = v_max;
    return v;
}

ScalingFit fit_power_law(const std::vector<double>& speeds, const std::vector<double>& values) {
    if (speeds.size() != values.size()) throw FitError("fit_power_law: size mismatch");
    if (speeds.size() < 3) throw FitError("fit_power_law: need at least 3 points");
    const auto n = static_cast<Eigen::Index>(speeds.size());
    const double sign = values.front() < 0.0 ? -1.0 : 1.0;
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v = speeds[static_cast<std::size_t>(i)], q = values[static_cast<std::size_t>(i)];
        if (!(v > 0.0)) throw FitError("fit_power_law: speeds must be positive");
        if (!(q * sign > 0.0) || !std::isfinite(q))
            throw FitError("fit_power_law: values must be nonzero and of one sign");
        design.row(i) << 1.0, std::log(v);
        y(i) = std::log(q * sign);
    }
    const auto ls = detail::least_squares(design, y);
    ScalingFit fit;
    fit.exponent = ls.beta(1);
    fit.exponent_stderr = std::sqrt(std::max(ls.covariance(1, 1), 0.0));
    fit.prefactor = sign * std::exp(ls.beta(0));
    fit.v_min = *std::min_element(speeds.begin(), speeds.end());
    fit.v_max = *std::max_element(speeds.begin(), speeds.end());
    fit.residual_norm = std::sqrt(ls.rss / static_cast<double>(n));
    return fit;
}

int default_threads() {
    if (const char* env = std::getenv("QFRICTION_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<int>(std::min(n, 1024L));
    }
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

ScalingFit fit_exponent(const Evaluator& q, const FitWindow& window, Baseline baseline, int threads) {
    auto speeds = window.grid();
    auto points = speeds;
    if (baseline == Baseline::subtract) points.push_back(0.0);
    auto values = parallel_generate<double>(points.size(), [&](std::size_t i) { return q(points[i]); }, threads);
    if (baseline == Baseline::subtract) {
        const double q0 = values.back();
        values.pop_back();
        for (double& v : values) v -= q0;
    }
    return fit_power_law(speeds, values);
}

std::string Cell::label() const {
    switch (kind) {
        case Scaling::zero:
            return "0";
        case Scaling::exp_small:
            return "exp. small";
        case Scaling::fit_failed:
            return "fit failed";
        case Scaling::power_law: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "v^%.2f", fit.exponent);
            return buf;
        }
    }
    return {};
}

Cell classify(const std::vector<double>& speeds, const std::vector<double>& values, double at_half_max,
              double reference) {
    Cell cell;
    if (values.empty()) {
        cell.error = "empty series";
        return cell;
    }
    const auto top = std::max_element(speeds.begin(), speeds.end()) - speeds.begin();
    cell.value_at_max = values[static_cast<std::size_t>(top)];
    if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; }) && at_half_max == 0.0) {
        cell.kind = Scaling::zero;
        return cell;
    }
    const double q_max = std::abs(cell.value_at_max);
    if (q_max < 1e-8 * std::abs(reference) && q_max > 16.0 * std::abs(at_half_max)) {
        cell.kind = Scaling::exp_small;
        return cell;
    }
    try {
        cell.fit = fit_power_law(speeds, values);
        cell.kind = Scaling::power_law;
    } catch (const FitError& e) {
        cell.kind = Scaling::fit_failed;
        cell.error = e.what();
    }
    return cell;
}

const char* to_string(Agreement a) {
    switch (a) {
        case Agreement::match:
            return "match";
        case Agreement::differ:
            return "differ";
        case Agreement::not_applicable:
            return "n/a";
    }
    return "";
}

const char* to_string(Scaling s) {
    switch (s) {
        case Scaling::power_law:
            return "power_law";
        case Scaling::exp_small:
            return "exp_small";
        case Scaling::zero:
            return "zero";
        case Scaling::fit_failed:
            return "fit_failed";
    }
    return "";
}

std::string ComparisonRow::label() const {
    return std::string(direction == MotionDirection::parallel ? "parallel " : "perpendicular ") + quantity;
}

namespace {

// Power laws agree when they round to the same integer; the two suppressed
// classes (exponentially small, identically zero) count as agreeing.
Agreement compare(const Cell& x, const Cell& y) {
    if (x.kind == Scaling::fit_failed || y.kind == Scaling::fit_failed) return Agreement::not_applicable;
    const bool px = x.kind == Scaling::power_law, py = y.kind == Scaling::power_law;
    if (px && py)
        return std::lround(x.fit.exponent) == std::lround(y.fit.exponent) ? Agreement::match : Agreement::differ;
    return px == py ? Agreement::match : Agreement::differ;
}

// Every velocity-dependent quantity of the table at one speed, each already
// reduced to its change from v = 0.
struct Sample {
    double markov[4] = {};
    double pert[4] = {};
};

enum Quantity { shift = 0, rate = 1, force_d2 = 2, force_d4 = 3 };
constexpr const char* kQuantityNames[4] = {"shift", "rate", "force_d2", "force_d4"};

struct StaticParts {
    double pert_force_d4 = 0.0;
};

Sample evaluate(const AtomParams& a, const MaterialModel& m, const MotionState& s, const StaticParts& statics,
                const QuadratureSpec& spec) {
    Sample out;
    const auto dc = markov::coeff_velocity_part(a, m, s, markov::Transition::ground, spec);
    out.markov[shift] = dc.value.imag();
    out.markov[rate] = 2.0 * dc.value.real();
    out.markov[force_d2] = markov::force_nonresonant_velocity_part(a, m, s, spec).value +
                           markov::force_resonant(a, m, s, spec).value;
    const auto dyn = markov::internal_dynamics(a, m, s, spec);
    out.markov[force_d4] = markov::friction_force_d4(a, m, s, dyn, Axis::real, markov::ImplicitWeight::rate, spec).total();

    const auto sr = perturbative::shift_rate_ground(a, m, s, Axis::real, spec);
    out.pert[shift] = sr.energy_shift.value - sr.static_energy_shift.value;
    out.pert[rate] = sr.rate.value;
    out.pert[force_d2] = perturbative::force_2_velocity_part(a, m, s, spec).value;
    double f4 = perturbative::force_4_vacuum(a, m, s, sr, spec).total();
    if (a.config.kind() == DipoleConfig::Kind::isotropic) f4 += perturbative::sigma4_0(a, m, s, spec).value;
    out.pert[force_d4] = f4 - statics.pert_force_d4;
    return out;
}

StaticParts statics_at_rest(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                            const QuadratureSpec& spec) {
    const auto rest = s.with_speed(0.0);
    const auto sr = perturbative::shift_rate_ground(a, m, rest, Axis::real, spec);
    double f4 = perturbative::force_4_vacuum(a, m, rest, sr, spec).total();
    if (a.config.kind() == DipoleConfig::Kind::isotropic) f4 += perturbative::sigma4_0(a, m, rest, spec).value;
    return {f4};
}

struct Sweep {
    std::vector<double> speeds;
    std::vector<Sample> samples;  // one per speed
    Sample half_max;              // at v_max / 2
};

Sweep sweep(const AtomParams& a, const MaterialModel& m, const MotionState& base, const FitWindow& window,
            const TableOptions& options) {
    Sweep sw;
    sw.speeds = window.grid();
    auto points = sw.speeds;
    points.push_back(0.5 * window.v_max);
    const auto statics = statics_at_rest(a, m, base, options.spec);
    auto results = parallel_generate<Sample>(
        points.size(), [&](std::size_t i) { return evaluate(a, m, base.with_speed(points[i]), statics, options.spec); },
        options.threads);
    sw.half_max = results.back();
    results.pop_back();
    sw.samples = std::move(results);
    return sw;
}

std::vector<double> series(const Sweep& sw, bool markov_method, int q) {
    std::vector<double> v;
    v.reserve(sw.samples.size());
    for (const auto& s : sw.samples) v.push_back(markov_method ? s.markov[q] : s.pert[q]);
    return v;
}

}  // namespace

std::vector<ComparisonRow> build_table(const AtomParams& a, const MaterialModel& m, const MotionState& base,
                                       const TableOptions& options) {
    a.validate();
    m.validate();
    MotionState start = base.at_start();
    const double z0 = start.initial_height;
    if (!(z0 > 0.0)) throw DomainError("build_table: z0 must be > 0");
    const auto window = FitWindow::relative(z0, a.omega10, options.window_lo, options.window_hi, options.points);
    window.validate();

    const auto par = sweep(a, m, start.with_angle(0.5 * constants::pi), window, options);
    const auto perp = sweep(a, m, start.with_angle(constants::pi), window, options);

    std::vector<ComparisonRow> rows;
    for (int q = 0; q < 4; ++q) {
        for (auto dir : {MotionDirection::parallel, MotionDirection::perpendicular}) {
            const auto& sw = dir == MotionDirection::parallel ? par : perp;
            ComparisonRow row;
            row.quantity = kQuantityNames[q];
            row.direction = dir;
            for (bool mk : {true, false}) {
                // Suppression is judged against the perpendicular value of the same method.
                const double reference = std::abs(series(perp, mk, q).back());
                const double half = mk ? sw.half_max.markov[q] : sw.half_max.pert[q];
                (mk ? row.markov : row.perturbative) = classify(sw.speeds, series(sw, mk, q), half, reference);
            }
            row.agree = compare(row.markov, row.perturbative);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

double magnitude_estimate(double speed, double omega10, double z) {
    if (!(speed >= 0.0) || !(omega10 > 0.0) || !(z > 0.0)) throw DomainError("magnitude_estimate: bad arguments");
    const double x = speed / omega10 / z;
    return x * x;
}

MagnitudeReport magnitude_report(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                                 const QuadratureSpec& spec) {
    MagnitudeReport r;
    r.analytic_ratio = magnitude_estimate(s.speed, a.omega10, kinematics::height(s));
    const auto fr = markov::friction_force_d2(a, m, s, Axis::real, spec);
    const auto cp = markov::cp_force_d2(a, m, s, Axis::imaginary, spec);
    r.force_ratio = cp.value == 0.0 ? 0.0 : std::abs(fr.value / cp.value);
    return r;
}

}  // namespace qfriction::analysis
