#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfriction/cli.hpp"
#include "qfriction/errors.hpp"

namespace {

using namespace qfriction;

struct Options {
    std::string material = "drude-gold";
    std::string orientation = "isotropic";
    std::string format;
    std::string terms;
    cli::Scenario scenario;
    // sweep
    std::string axis = "v";
    double from = 0.0, to = 0.0;
    int points = 16;
    bool log = false;
    int threads = 0;
    // table
    double window_lo = 1e-3, window_hi = 1e-2;
    int window_points = 8;
};

MaterialModel resolve_material(const std::string& spec) {
    const auto names = material::preset_names();
    for (const auto& n : names)
        if (n == spec) return material::preset(spec);
    if (std::filesystem::exists(spec)) return material::load(spec);
    throw ConfigError("material", "'" + spec + "' is neither a preset nor a readable file");
}

DipoleConfig resolve_orientation(const std::string& text) {
    if (text == "isotropic") return DipoleConfig::isotropic();
    std::vector<double> c;
    std::stringstream in(text);
    for (std::string part; std::getline(in, part, ',');) {
        try {
            std::size_t used = 0;
            c.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ConfigError("orientation", "expected 'isotropic' or x,y,z");
        }
    }
    if (c.size() != 3) throw ConfigError("orientation", "expected 'isotropic' or x,y,z");
    try {
        return DipoleConfig::along(c[0], c[1], c[2]);
    } catch (const DomainError& e) {
        throw ConfigError("orientation", e.what());
    }
}

std::vector<std::string> split_terms(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    for (std::string t; std::getline(in, t, ',');)
        if (!t.empty()) out.push_back(t);
    return out;
}

cli::Scenario finish(Options& o) {
    auto sc = o.scenario;
    sc.material = resolve_material(o.material);
    sc.atom.config = resolve_orientation(o.orientation);
    sc.terms = split_terms(o.terms);
    sc.validate();
    return sc;
}

void add_scenario_flags(CLI::App* cmd, Options& o) {
    auto& sc = o.scenario;
    cmd->add_option("--material", o.material, "Preset name or key=value material file")->capture_default_str();
    cmd->add_option("--omega10", sc.atom.omega10, "Transition frequency [rad/s]")->capture_default_str();
    cmd->add_option("--dipole", sc.atom.dipole, "Transition dipole moment [C m]")->capture_default_str();
    cmd->add_option("--orientation", o.orientation, "'isotropic' or a direction x,y,z")->capture_default_str();
    cmd->add_option("--v", sc.speed, "Speed [m/s]")->capture_default_str();
    cmd->add_option("--theta", sc.theta_deg, "Direction of motion [deg]; 180 = towards the surface")
        ->capture_default_str();
    cmd->add_option("--z0", sc.z0, "Initial height [m]")->capture_default_str();
    cmd->add_option("--t", sc.time, "Time since the boost [s]")->capture_default_str();
    cmd->add_option("--rel-tol", sc.rel_tol, "Relative quadrature tolerance")->capture_default_str();
}

int run(int argc, char** argv) {
    CLI::App app{"Velocity-dependent atom-surface forces, shifts and rates"};
    app.require_subcommand(1);
    Options o;

    auto* point = app.add_subcommand("point", "Evaluate every selected term at one state");
    add_scenario_flags(point, o);
    point->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    point->add_option("--terms", o.terms, "Comma-separated subset of terms (see `presets`)");

    auto* sweep = app.add_subcommand("sweep", "Evaluate terms over a grid in one variable (CSV)");
    add_scenario_flags(sweep, o);
    sweep->add_option("--terms", o.terms, "Comma-separated subset of terms");
    sweep->add_option("--axis", o.axis, "v, theta, z0 or t")->capture_default_str();
    sweep->add_option("--from", o.from, "First grid value")->required();
    sweep->add_option("--to", o.to, "Last grid value")->required();
    sweep->add_option("--points", o.points, "Grid size")->capture_default_str();
    sweep->add_flag("--log", o.log, "Logarithmic grid");
    sweep->add_option("--threads", o.threads, "Workers (default QFRICTION_THREADS or all cores)");

    auto* table = app.add_subcommand("table", "Velocity-scaling comparison of the two methods");
    add_scenario_flags(table, o);
    table->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    table->add_option("--window-lo", o.window_lo, "Lowest fit speed in units of z0 omega10")->capture_default_str();
    table->add_option("--window-hi", o.window_hi, "Highest fit speed in units of z0 omega10")->capture_default_str();
    table->add_option("--window-points", o.window_points, "Speeds per fit")->capture_default_str();
    table->add_option("--threads", o.threads, "Workers (default QFRICTION_THREADS or all cores)");

    auto* presets = app.add_subcommand("presets", "List material presets and term names");

    CLI11_PARSE(app, argc, argv);

    if (presets->parsed()) {
        for (const auto& name : material::preset_names()) {
            const auto m = material::preset(name);
            std::cout << name << ": omega_p=" << cli::format_number(m.plasma_frequency)
                      << " omega_r=" << cli::format_number(m.resonance_frequency)
                      << " gamma=" << cli::format_number(m.damping) << '\n';
        }
        std::cout << "terms:";
        for (const auto& t : cli::term_names()) std::cout << ' ' << t;
        std::cout << '\n';
        return 0;
    }

    const auto sc = finish(o);
    if (point->parsed()) {
        if (o.format == "csv")
            cli::write_point_csv(cli::evaluate(sc), std::cout);
        else
            std::cout << cli::run_point(sc).dump(2) << '\n';
    } else if (sweep->parsed()) {
        if (o.points < 1) throw ConfigError("points", "must be >= 1");
        cli::run_sweep(sc, cli::parse_axis(o.axis), {o.from, o.to, o.points, o.log}, std::cout, o.threads);
    } else if (table->parsed()) {
        analysis::TableOptions opts;
        opts.window_lo = o.window_lo;
        opts.window_hi = o.window_hi;
        opts.points = o.window_points;
        opts.threads = o.threads;
        const auto rows = analysis::build_table(sc.atom, sc.material, sc.motion(), opts);
        if (o.format == "json")
            std::cout << cli::table_json(sc, rows).dump(2) << '\n';
        else
            std::cout << cli::render_table(rows);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qfriction::ConfigError& e) {
        std::cerr << "error: invalid " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
