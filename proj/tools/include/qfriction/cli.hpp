#pragma once

// Scenario handling and output formatting behind the `qfriction` tool.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfriction/analysis.hpp"
#include "qfriction/atom.hpp"
#include "qfriction/kinematics.hpp"
#include "qfriction/material.hpp"
#include "qfriction/quadrature.hpp"
#include "qfriction/report.hpp"

namespace qfriction::cli {

/// One evaluation request. Angles are in degrees here and converted to
/// radians for the library.
struct Scenario {
    MaterialModel material = material::drude_gold();
    AtomParams atom;
    double speed = 50.0;        // m/s
    double theta_deg = 180.0;   // 0 = away from the surface, 180 = towards it
    double z0 = 5e-9;           // m
    double time = 0.0;          // s
    double rel_tol = 1e-9;
    std::vector<std::string> terms;  // empty selects every applicable term

    /// Throws ConfigError naming the offending field.
    void validate() const;
    MotionState motion() const;
    QuadratureSpec spec() const;
};

/// Names accepted by --terms, in output order.
const std::vector<std::string>& term_names();

struct Quantity {
    std::string name;  // e.g. "markov.cp_d2"
    std::string unit;
    Estimate estimate;
};

/// Evaluates the requested terms at the scenario's state.
std::vector<Quantity> evaluate(const Scenario& sc);

/// Number formatting shared by every output: 12 significant digits.
std::string format_number(double x);
/// Same rounding, kept as a JSON number.
nlohmann::json json_number(double x);

nlohmann::json scenario_json(const Scenario& sc);

/// Point result document (validates against schemas/result.schema.json).
nlohmann::json run_point(const Scenario& sc);
/// Same quantities as CSV rows: name,unit,value,error,converged,valid,source.
void write_point_csv(const std::vector<Quantity>& qs, std::ostream& out);

enum class SweepAxis { v, theta, z0, t };

SweepAxis parse_axis(const std::string& name);
const char* axis_label(SweepAxis axis);  // column header with unit

struct Grid {
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log = false;

    /// Throws ConfigError for an empty grid, non-finite bounds, or a log grid
    /// touching zero.
    std::vector<double> values() const;
};

/// Applies one grid value to the scenario.
Scenario at(const Scenario& sc, SweepAxis axis, double value);

/// CSV with a header row; one row per grid point, computed by a worker pool
/// and written in grid order. States outside the series guard are kept and
/// flagged in the `valid` column.
void run_sweep(const Scenario& sc, SweepAxis axis, const Grid& grid, std::ostream& out, int threads = 0);

nlohmann::json table_json(const Scenario& sc, const std::vector<analysis::ComparisonRow>& rows);
std::string render_table(const std::vector<analysis::ComparisonRow>& rows);

}  // namespace qfriction::cli
