#pragma once

// Power-law extraction from velocity sweeps, the Markov/perturbative
// comparison table, and the order-of-magnitude friction estimate.

#include <algorithm>
#include <atomic>
#include <exception>
#include <cstddef>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qfriction/atom.hpp"
#include "qfriction/kinematics.hpp"
#include "qfriction/material.hpp"
#include "qfriction/quadrature.hpp"

namespace qfriction::analysis {

/// Log-spaced speeds v_min .. v_max (inclusive).
struct FitWindow {
    double v_min = 0.0;
    double v_max = 0.0;
    int points = 8;

    /// Window expressed in units of z w10; the default [1e-3, 1e-2] sits inside
    /// the series guard and above quadrature noise.
    static FitWindow relative(double z, double omega10, double lo = 1e-3, double hi = 1e-2, int points = 8);

    /// Throws FitError unless 0 < v_min < v_max and points >= 8.
    void validate() const;
    std::vector<double> grid() const;
};

struct ScalingFit {
    double exponent = 0.0;
    double exponent_stderr = 0.0;
    double prefactor = 0.0;  // Q ~ prefactor * v^exponent, signed
    double v_min = 0.0;
    double v_max = 0.0;
    double residual_norm = 0.0;  // RMS of the log residuals
};

enum class Baseline { none, subtract };

using Evaluator = std::function<double(double)>;

/// Least-squares slope of log|Q| against log v. Every value must be nonzero
/// and of one sign, otherwise FitError.
ScalingFit fit_power_law(const std::vector<double>& speeds, const std::vector<double>& values);

/// Evaluates q over the window (and at v = 0 when subtracting the baseline)
/// and fits Q(v) - Q(0). Points are evaluated concurrently.
ScalingFit fit_exponent(const Evaluator& q, const FitWindow& window, Baseline baseline = Baseline::none,
                        int threads = 0);

/// Worker count: QFRICTION_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int default_threads();

/// Computes f(0) .. f(n - 1) with up to `threads` workers (0 = default),
/// results in index order. The first exception is rethrown after all
/// workers have stopped.
template <class R, class F>
std::vector<R> parallel_generate(std::size_t n, const F& f, int threads = 0) {
    std::vector<R> out(n);
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads > 0 ? threads : default_threads()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

enum class Scaling { power_law, exp_small, zero, fit_failed };

/// A table cell: a fitted power law or a suppressed/vanishing classification.
struct Cell {
    Scaling kind = Scaling::fit_failed;
    ScalingFit fit;            // meaningful for power_law only
    double value_at_max = 0.0; // Q(v_max) - Q(0)
    std::string error;         // fit failure message

    std::string label() const;
};

/// Classifies a sampled series (values already baseline-subtracted).
/// `zero`: every sample is exactly zero. `exp_small`: |Q(v_max)| is below
/// 1e-8 * reference and halving v_max shrinks Q by more than 2^4, i.e. faster
/// than any power up to the fourth (`at_half_max` is Q(v_max / 2)).
/// Anything else is fitted as a power law.
Cell classify(const std::vector<double>& speeds, const std::vector<double>& values, double at_half_max,
              double reference);

enum class Agreement { match, differ, not_applicable };

const char* to_string(Agreement a);
const char* to_string(Scaling s);

enum class MotionDirection { parallel, perpendicular };

struct ComparisonRow {
    std::string quantity;  // "shift", "rate", "force_d2", "force_d4"
    MotionDirection direction = MotionDirection::parallel;
    Cell markov;
    Cell perturbative;
    Agreement agree = Agreement::not_applicable;

    std::string label() const;  // e.g. "parallel shift"
};

struct TableOptions {
    double window_lo = 1e-3;  // in units of z0 w10
    double window_hi = 1e-2;
    int points = 8;
    int threads = 0;
    QuadratureSpec spec = QuadratureSpec{}.with_rel_tol(1e-8);
};

/// Eight rows: {parallel, perpendicular} x {shift, rate, force_d2, force_d4},
/// each cell filled from a velocity sweep at height base.initial_height. The
/// perpendicular direction is motion towards the surface. A cell whose fit
/// fails is reported as fit_failed in its row rather than thrown.
std::vector<ComparisonRow> build_table(const AtomParams& a, const MaterialModel& m, const MotionState& base,
                                       const TableOptions& options = {});

/// (v / (w10 z))^2, the relative size of the friction force. Throws
/// DomainError for w10 <= 0, z <= 0 or v < 0.
double magnitude_estimate(double speed, double omega10, double z);

struct MagnitudeReport {
    double analytic_ratio = 0.0;  // magnitude_estimate
    double force_ratio = 0.0;     // |friction_d2 / cp_d2| at the state
};

MagnitudeReport magnitude_report(const AtomParams& a, const MaterialModel& m, const MotionState& s,
                                 const QuadratureSpec& spec = {});

}  // namespace qfriction::analysis
