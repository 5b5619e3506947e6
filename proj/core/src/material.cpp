#include "qfriction/material.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qfriction/errors.hpp"

namespace qfriction {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// wr^2 - w^2 - i gamma w
Complex oscillator(const MaterialModel& m, Complex omega) {
    const double wr = m.resonance_frequency;
    return Complex(wr * wr, 0.0) - omega * omega - Complex(0.0, m.damping) * omega;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

void MaterialModel::validate() const {
    auto check = [&](double value, bool ok, const char* what) {
        if (!std::isfinite(value) || !ok)
            throw DomainError("material '" + name + "': invalid " + what);
    };
    check(plasma_frequency, plasma_frequency > 0.0, "omega_p (must be > 0)");
    check(damping, damping > 0.0, "gamma (must be > 0)");
    check(resonance_frequency, resonance_frequency >= 0.0, "omega_r (must be >= 0)");
}

double MaterialModel::surface_mode_frequency() const {
    return std::sqrt(resonance_frequency * resonance_frequency +
                     0.5 * plasma_frequency * plasma_frequency);
}

std::vector<double> MaterialModel::spectral_features() const {
    const double ws = surface_mode_frequency();
    std::vector<double> points;
    for (double k : {-30.0, -3.0, 0.0, 3.0, 30.0}) {
        const double p = ws + k * damping;
        if (p > 0.0) points.push_back(p);
    }
    return points;
}

namespace material {

MaterialModel drude_gold() { return {1.37e16, 0.0, 5.3e13, "drude-gold"}; }

MaterialModel lorentz_dielectric() { return {1.0e16, 8.0e15, 1.0e14, "lorentz-dielectric"}; }

std::vector<std::string> preset_names() { return {"drude-gold", "lorentz-dielectric"}; }

MaterialModel preset(std::string_view name) {
    if (name == "drude-gold") return drude_gold();
    if (name == "lorentz-dielectric") return lorentz_dielectric();
    throw ConfigError("material", "unknown preset '" + std::string(name) + "'");
}

MaterialModel parse(std::string_view text, std::string_view origin) {
    MaterialModel m;
    bool have_wp = false, have_gamma = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = std::string(origin) + ":" + std::to_string(lineno);
        if (eq == std::string::npos)
            throw ConfigError("material", where + ": expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key == "name") {
            m.name = value;
            continue;
        }
        double number = 0.0;
        try {
            std::size_t used = 0;
            number = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw ConfigError(key, where + ": not a number: '" + value + "'");
        }
        if (key == "omega_p") {
            m.plasma_frequency = number;
            have_wp = true;
        } else if (key == "omega_r") {
            m.resonance_frequency = number;
        } else if (key == "gamma") {
            m.damping = number;
            have_gamma = true;
        } else {
            throw ConfigError(key, where + ": unknown key");
        }
    }
    if (!have_wp) throw ConfigError("omega_p", std::string(origin) + ": missing");
    if (!have_gamma) throw ConfigError("gamma", std::string(origin) + ": missing");
    if (m.name.empty()) m.name = std::string(origin);
    try {
        m.validate();
    } catch (const DomainError& e) {
        throw ConfigError("material", e.what());
    }
    return m;
}

MaterialModel load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("material", "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.string());
}

Complex permittivity(const MaterialModel& m, Complex omega) {
    if (!finite(omega)) throw DomainError("permittivity: non-finite frequency");
    const Complex denom = oscillator(m, omega);
    if (denom == Complex(0.0, 0.0))
        throw StaticPole("permittivity: static pole of the Drude model at omega = 0");
    const double wp = m.plasma_frequency;
    return 1.0 + wp * wp / denom;
}

Complex reflection_p(const MaterialModel& m, Complex omega) {
    if (!finite(omega)) throw DomainError("reflection_p: non-finite frequency");
    const double wp2 = m.plasma_frequency * m.plasma_frequency;
    const Complex denom = wp2 + 2.0 * oscillator(m, omega);
    if (std::abs(denom) <= 1e-300 * wp2)
        throw PoleError("reflection_p: surface-mode pole (eps = -1)");
    return wp2 / denom;
}

Complex reflection_p_difference(const MaterialModel& m, Complex omega, Complex omega0) {
    const Complex r = reflection_p(m, omega);
    const Complex r0 = reflection_p(m, omega0);
    // D(w0) - D(w) = 2 (w - w0)(w + w0 + i gamma), with D the denominator of r_p.
    const double wp2 = m.plasma_frequency * m.plasma_frequency;
    return r * r0 * 2.0 * (omega - omega0) * (omega + omega0 + Complex(0.0, m.damping)) / wp2;
}

double reflection_imag_axis(const MaterialModel& m, double xi) {
    const double wp2 = m.plasma_frequency * m.plasma_frequency;
    const double wr2 = m.resonance_frequency * m.resonance_frequency;
    return wp2 / (wp2 + 2.0 * (wr2 + xi * xi + m.damping * xi));
}

double reflection_imag_axis_excess(const MaterialModel& m, double xi) {
    const double wp2 = m.plasma_frequency * m.plasma_frequency;
    const double base = wp2 + 2.0 * m.resonance_frequency * m.resonance_frequency;
    const double shift = 2.0 * (xi * xi + m.damping * xi);
    return -wp2 * shift / (base * (base + shift));
}

double reflection_loss(const MaterialModel& m, double omega) {
    // Im[wp^2 / (a - i b)] = wp^2 b / (a^2 + b^2)
    const double wp2 = m.plasma_frequency * m.plasma_frequency;
    const double wr2 = m.resonance_frequency * m.resonance_frequency;
    const double a = wp2 + 2.0 * (wr2 - omega * omega);
    const double b = 2.0 * m.damping * omega;
    return wp2 * b / (a * a + b * b);
}

}  // namespace material
}  // namespace qfriction
