#include "qfriction/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "qfriction/constants.hpp"
#include "qfriction/errors.hpp"
#include "qfriction/markov.hpp"
#include "qfriction/perturbative.hpp"

namespace qfriction::cli {

using nlohmann::json;

void Scenario::validate() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(atom.dipole)) throw ConfigError("dipole", "must be a positive dipole moment in C m");
    if (!positive(atom.omega10)) throw ConfigError("omega10", "must be a positive frequency in rad/s");
    if (!(speed >= 0.0) || !std::isfinite(speed)) throw ConfigError("v", "must be >= 0");
    if (!(theta_deg >= 0.0 && theta_deg < 360.0)) throw ConfigError("theta", "must be in [0, 360) degrees");
    if (!positive(z0)) throw ConfigError("z0", "must be > 0");
    if (!(time >= 0.0) || !std::isfinite(time)) throw ConfigError("t", "must be >= 0");
    if (!(rel_tol >= 1e-13 && rel_tol < 1.0)) throw ConfigError("rel-tol", "must be in [1e-13, 1)");
    try {
        material.validate();
    } catch (const DomainError& e) {
        throw ConfigError("material", e.what());
    }
    const auto& known = term_names();
    for (const auto& t : terms)
        if (std::find(known.begin(), known.end(), t) == known.end())
            throw ConfigError("terms", "unknown term '" + t + "'");
}

MotionState Scenario::motion() const {
    MotionState s;
    s.speed = speed;
    s.angle = theta_deg * constants::pi / 180.0;
    s.initial_height = z0;
    s.time = time;
    return s;
}

QuadratureSpec Scenario::spec() const { return QuadratureSpec{}.with_rel_tol(rel_tol); }

const std::vector<std::string>& term_names() {
    static const std::vector<std::string> names = {
        "shift",         "rate",          "cp_d2",  "friction_d2", "friction_d4", "resonant", "pert_shift",
        "pert_rate",     "pert_force_d2", "pert_force_d4",         "sigma4",      "magnitude"};
    return names;
}

std::vector<Quantity> evaluate(const Scenario& sc) {
    sc.validate();
    const bool all = sc.terms.empty();
    auto wanted = [&](const char* t) { return all || std::find(sc.terms.begin(), sc.terms.end(), t) != sc.terms.end(); };
    const auto& a = sc.atom;
    const auto& m = sc.material;
    const auto s = sc.motion();
    const auto spec = sc.spec();
    kinematics::height(s);  // surface contact is an error for every term
    const bool iso = a.config.kind() == DipoleConfig::Kind::isotropic;

    std::vector<Quantity> out;
    auto add = [&](std::string name, std::string unit, Estimate e) {
        out.push_back({std::move(name), std::move(unit), std::move(e)});
    };
    if (wanted("shift")) add("markov.shift_ground", "rad/s", markov::shift_ground(a, m, s, Axis::imaginary, spec));
    if (wanted("rate")) add("markov.rate_ground", "1/s", markov::rate_ground(a, m, s, Axis::imaginary, spec));
    if (wanted("cp_d2")) add("markov.cp_d2", "N", markov::cp_force_d2(a, m, s, Axis::imaginary, spec));
    if (wanted("friction_d2")) add("markov.friction_d2", "N", markov::friction_force_d2(a, m, s, Axis::real, spec));
    if (wanted("friction_d4")) {
        const auto dyn = markov::internal_dynamics(a, m, s, spec);
        auto f4 = markov::friction_force_d4(a, m, s, dyn, Axis::real, markov::ImplicitWeight::rate, spec);
        add("markov.friction_d4.explicit", "N", f4.explicit_part);
        add("markov.friction_d4.implicit", "N", f4.implicit_part);
    }
    if (wanted("resonant")) add("markov.resonant_force", "N", markov::force_resonant(a, m, s, spec));

    const bool need_sr = wanted("pert_shift") || wanted("pert_rate") || wanted("pert_force_d4");
    perturbative::ShiftRate sr;
    if (need_sr) sr = perturbative::shift_rate_ground(a, m, s, Axis::real, spec);
    if (wanted("pert_shift")) add("perturbative.energy_shift", "J", sr.energy_shift);
    if (wanted("pert_rate")) add("perturbative.rate", "1/s", sr.rate);
    if (wanted("pert_force_d2")) {
        const auto f2 = perturbative::force_2(a, m, s, spec);
        add("perturbative.cp_d2", "N", f2.cp_d2);
        add("perturbative.friction_d2", "N", f2.friction_d2);
        add("perturbative.force_d2_full", "N", f2.full_d2);
    }
    if (wanted("pert_force_d4")) {
        const auto f4 = perturbative::force_4_vacuum(a, m, s, sr, spec);
        add("perturbative.force_d4.loss", "N", f4.loss_term);
        add("perturbative.force_d4.cp", "N", f4.cp4);
        add("perturbative.force_d4.friction", "N", f4.fr4);
    }
    if (wanted("sigma4")) {
        if (iso)
            add("perturbative.two_photon_d4", "N", perturbative::sigma4_0(a, m, s, spec));
        else if (!all)
            throw ConfigError("terms", "sigma4 needs an isotropic dipole");
    }
    if (wanted("magnitude")) {
        const double z = kinematics::height(s);
        add("analysis.magnitude_estimate", "1",
            {analysis::magnitude_estimate(sc.speed, a.omega10, z), 0.0, true, kinematics::within_validity(s, a.omega10),
             "analysis.magnitude_estimate"});
    }
    return out;
}

std::string format_number(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::strtod(format_number(x).c_str(), nullptr);
}

json scenario_json(const Scenario& sc) {
    json dipole;
    if (sc.atom.config.kind() == DipoleConfig::Kind::isotropic) {
        dipole = "isotropic";
    } else {
        const auto& d = sc.atom.config.direction();
        dipole = json::array({json_number(d[0]), json_number(d[1]), json_number(d[2])});
    }
    return {
        {"material",
         {{"name", sc.material.name},
          {"omega_p", json_number(sc.material.plasma_frequency)},
          {"omega_r", json_number(sc.material.resonance_frequency)},
          {"gamma", json_number(sc.material.damping)}}},
        {"atom", {{"dipole", json_number(sc.atom.dipole)}, {"omega10", json_number(sc.atom.omega10)}, {"orientation", dipole}}},
        {"motion",
         {{"v", json_number(sc.speed)},
          {"theta_deg", json_number(sc.theta_deg)},
          {"z0", json_number(sc.z0)},
          {"t", json_number(sc.time)}}},
        {"rel_tol", json_number(sc.rel_tol)},
    };
}

json run_point(const Scenario& sc) {
    const auto qs = evaluate(sc);
    const auto s = sc.motion();
    json results = json::array();
    for (const auto& q : qs) {
        results.push_back({{"name", q.name},
                           {"unit", q.unit},
                           {"value", json_number(q.estimate.value)},
                           {"error", json_number(q.estimate.error)},
                           {"converged", q.estimate.converged},
                           {"valid", q.estimate.valid},
                           {"source", q.estimate.source}});
    }
    return {{"kind", "point"},
            {"scenario", scenario_json(sc)},
            {"z_A", json_number(kinematics::height(s))},
            {"valid", kinematics::within_validity(s, sc.atom.omega10)},
            {"results", results}};
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace

void write_point_csv(const std::vector<Quantity>& qs, std::ostream& out) {
    out << "name,unit,value,error,converged,valid,source\n";
    for (const auto& q : qs) {
        out << q.name << ',' << q.unit << ',' << format_number(q.estimate.value) << ','
            << format_number(q.estimate.error) << ',' << (q.estimate.converged ? 1 : 0) << ','
            << (q.estimate.valid ? 1 : 0) << ',' << csv_field(q.estimate.source) << '\n';
    }
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "v") return SweepAxis::v;
    if (name == "theta") return SweepAxis::theta;
    if (name == "z0") return SweepAxis::z0;
    if (name == "t") return SweepAxis::t;
    throw ConfigError("axis", "expected one of v, theta, z0, t; got '" + name + "'");
}

const char* axis_label(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::v:
            return "v [m/s]";
        case SweepAxis::theta:
            return "theta [deg]";
        case SweepAxis::z0:
            return "z0 [m]";
        case SweepAxis::t:
            return "t [s]";
    }
    return "";
}

std::vector<double> Grid::values() const {
    if (points < 1) throw ConfigError("points", "grid is empty");
    if (!std::isfinite(from) || !std::isfinite(to)) throw ConfigError("from", "grid bounds must be finite");
    if (log && !(from > 0.0 && to > 0.0)) throw ConfigError("from", "log grid bounds must be > 0");
    std::vector<double> v(static_cast<std::size_t>(points));
    if (points == 1) {
        v[0] = from;
        return v;
    }
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        v[static_cast<std::size_t>(i)] = log ? from * std::pow(to / from, f) : from + (to - from) * f;
    }
    v.back() = to;
    return v;
}

Scenario at(const Scenario& sc, SweepAxis axis, double value) {
    Scenario out = sc;
    switch (axis) {
        case SweepAxis::v:
            out.speed = value;
            break;
        case SweepAxis::theta:
            out.theta_deg = value;
            break;
        case SweepAxis::z0:
            out.z0 = value;
            break;
        case SweepAxis::t:
            out.time = value;
            break;
    }
    return out;
}

void run_sweep(const Scenario& sc, SweepAxis axis, const Grid& grid, std::ostream& out, int threads) {
    sc.validate();
    const auto xs = grid.values();
    // Column layout comes from the first point's term list; every row uses it.
    struct Row {
        std::vector<Quantity> qs;
        bool valid = false;
        std::string error;
    };
    auto rows = analysis::parallel_generate<Row>(
        xs.size(),
        [&](std::size_t i) {
            Row row;
            try {
                const auto point = at(sc, axis, xs[i]);
                row.qs = evaluate(point);
                row.valid = kinematics::within_validity(point.motion(), point.atom.omega10);
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                row.error = e.what();
            }
            return row;
        },
        threads);

    std::vector<std::pair<std::string, std::string>> columns;
    for (const auto& r : rows) {
        if (r.error.empty()) {
            for (const auto& q : r.qs) columns.emplace_back(q.name, q.unit);
            break;
        }
    }
    out << axis_label(axis);
    for (const auto& [name, unit] : columns) out << ',' << name << " [" << unit << "]," << name << ".error [" << unit << ']';
    out << ",valid,status\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto& r = rows[i];
        out << format_number(xs[i]);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (r.error.empty() && c < r.qs.size())
                out << ',' << format_number(r.qs[c].estimate.value) << ',' << format_number(r.qs[c].estimate.error);
            else
                out << ",nan,nan";
        }
        out << ',' << (r.valid ? 1 : 0) << ',' << (r.error.empty() ? std::string("ok") : csv_field(r.error)) << '\n';
    }
}

namespace {

json cell_json(const analysis::Cell& c) {
    json j = {{"classification", analysis::to_string(c.kind)},
              {"label", c.label()},
              {"value_at_max", json_number(c.value_at_max)}};
    if (c.kind == analysis::Scaling::power_law) {
        j["exponent"] = json_number(c.fit.exponent);
        j["exponent_stderr"] = json_number(c.fit.exponent_stderr);
        j["v_min"] = json_number(c.fit.v_min);
        j["v_max"] = json_number(c.fit.v_max);
    }
    if (!c.error.empty()) j["error"] = c.error;
    return j;
}

}  // namespace

json table_json(const Scenario& sc, const std::vector<analysis::ComparisonRow>& rows) {
    json out = {{"kind", "table"}, {"scenario", scenario_json(sc)}, {"rows", json::array()}};
    for (const auto& r : rows) {
        out["rows"].push_back(
            {{"quantity", r.quantity},
             {"direction", r.direction == analysis::MotionDirection::parallel ? "parallel" : "perpendicular"},
             {"markov", cell_json(r.markov)},
             {"perturbative", cell_json(r.perturbative)},
             {"agree", analysis::to_string(r.agree)}});
    }
    return out;
}

std::string render_table(const std::vector<analysis::ComparisonRow>& rows) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-24s %-14s %-14s %s\n", "quantity", "markov", "perturbative", "agree");
    out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-24s %-14s %-14s %s\n", r.label().c_str(), r.markov.label().c_str(),
                      r.perturbative.label().c_str(), analysis::to_string(r.agree));
        out << line;
    }
    return out.str();
}

}  // namespace qfriction::cli
