#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace adlab::cli {

namespace {

constexpr double two_pi = 2 * M_PI;

ParamSpec P(std::string key, std::string fallback, Unit unit, std::string help, Bound bound = Bound::none,
            std::vector<std::string> choices = {})
{
    return {std::move(key), std::move(fallback), unit, std::move(help), bound, std::move(choices)};
}

std::vector<ScenarioSpec> build_catalog()
{
    const Bound pos = Bound::positive, nonneg = Bound::non_negative;
    return {
        {"adcheck",
         "Adiabaticity conditions over a driving-frequency sweep r = omega / omega0",
         {P("model", "oscillating", Unit::choice, "driven model", Bound::none, {"oscillating", "nmr"}),
          P("frame", "noninertial", Unit::choice, "reference frame", Bound::none, {"inertial", "noninertial"}),
          P("r-sweep", "0:3:0.05", Unit::range, "ratio sweep start:stop:step"),
          P("omega0", "1e6", Unit::hz, "level splitting", pos),
          P("omega1", "2e4", Unit::hz, "drive amplitude", pos),
          P("tau", "1e-5", Unit::seconds, "total evolution time", pos),
          P("grid", "2001", Unit::grid, "time grid points")}},
        {"deutsch",
         "Open-system Deutsch algorithm: fidelities over a geometric tau ladder",
         {P("balanced", "false", Unit::flag, "balanced oracle f = (0,1); constant f = (1,1) otherwise"),
          P("omega", "1e6", Unit::hz, "oracle energy scale", pos),
          P("gamma", "0.1", Unit::ratio, "dephasing rate in units of omega", nonneg),
          P("tau-ladder", "8", Unit::count, "number of tau values, doubling from tau-min", pos),
          P("tau-min", "12.5", Unit::ratio, "shortest tau in units of 1/omega", pos),
          P("points", "401", Unit::grid, "spectral grid points")}},
        {"heat",
         "Heat exchanged under time-dependent dephasing of a thermal qubit",
         {P("energy-pev", "82.662", Unit::ratio, "level energy hbar omega in peV", pos),
          P("temperature-pev", "17.238", Unit::ratio, "thermal energy 1/beta in peV", pos),
          P("gamma0", "314,628,1257", Unit::list, "initial dephasing rates", nonneg),
          P("tau-dec", "0.0005,0.001,0.002,0.005,0.01", Unit::list, "decoherence times in s", pos),
          P("steps", "4000", Unit::grid, "integration steps per run")}},
        {"lz-tqd",
         "Landau-Zener transitionless driving: energy cost or field intensities versus tau",
         {P("intensities", "false", Unit::flag, "write time-averaged intensities instead of energy costs"),
          P("delta", "2000", Unit::hz, "gap parameter", pos),
          P("theta0", "1.0471975511965976", Unit::ratio, "final mixing angle in rad", pos),
          P("tau-min", "1e-5", Unit::seconds, "shortest tau", pos),
          P("tau-max", "1e-3", Unit::seconds, "longest tau", pos),
          P("tau-count", "25", Unit::count, "geometric tau points", pos),
          P("quad", "2001", Unit::grid, "quadrature points")}},
        {"nmr-tqd",
         "Rotating-field transitionless driving: field norms along the run",
         {P("omega0", "200", Unit::hz, "static field", pos), P("omega1", "200", Unit::hz, "transverse field", pos),
          P("omega", "200", Unit::hz, "rotation frequency", pos), P("tau", "", Unit::seconds, "total time", pos),
          P("points", "201", Unit::grid, "time samples")}},
        {"gate",
         "Controlled-evolution gate: fidelity and success probability versus tau",
         {P("axis", "0,0,1", Unit::list, "rotation axis (unit vector)"),
          P("phi", "3.141592653589793", Unit::ratio, "rotation angle in rad"),
          P("phi0", "3.141592653589793", Unit::ratio, "ancilla sweep angle in rad", pos),
          P("nu", "35", Unit::hz, "drive frequency", pos),
          P("variant", "optimal", Unit::choice, "driving variant", Bound::none, {"adiabatic", "standard", "optimal"}),
          P("controlled", "false", Unit::flag, "add a control qubit prepared in |+>"),
          P("input", "plus", Unit::choice, "target input state", Bound::none, {"plus", "minus", "zero", "one"}),
          P("tau", "1e-4,1e-3,1e-2", Unit::list, "total times in s", pos),
          P("steps", "2000", Unit::grid, "integration steps per run")}},
        {"pulses",
         "NMR pulse programs for the phase gate versus slice count",
         {P("variant", "standard", Unit::choice, "driving variant", Bound::none, {"adiabatic", "standard", "optimal"}),
          P("slices", "8,16,32,64", Unit::list, "slice counts", pos), P("tau", "", Unit::seconds, "total time", pos),
          P("nu", "35", Unit::hz, "drive frequency", pos), P("j", "215", Unit::hz, "scalar coupling", pos),
          P("steps", "20000", Unit::grid, "steps for the reference propagator"),
          P("program", "none", Unit::path, "write the last program as text to this path")}},
        {"battery-stirap",
         "Three-level battery charged by STIRAP: ergotropy and power versus rabi * tau",
         {P("protocol", "stable", Unit::choice, "charging protocol", Bound::none, {"stable", "unstable"}),
          P("ramp", "linear", Unit::choice, "pulse ramp", Bound::none, {"linear", "sin2", "smoothstep"}),
          P("rabi", "1e6", Unit::hz, "peak Rabi frequency", pos),
          P("omega0", "5e9", Unit::hz, "first level spacing; third level at 1.95 omega0", pos),
          P("rabi-tau", "1,2,5,10,20,50,100", Unit::list, "rabi * tau values (rabi in rad/s)", pos),
          P("gamma0", "0,0.001,0.01", Unit::list, "noise strength: decay21 = gamma0 * rabi", nonneg),
          P("steps", "2000", Unit::grid, "minimum integration steps per run")}},
        {"battery-cells",
         "Two-cell battery discharged adiabatically into a qubit hub",
         {P("ramps", "linear,sin2,smoothstep", Unit::choice, "interpolation ramps", Bound::none,
            {"linear", "sin2", "smoothstep"}),
          P("j", "1e6", Unit::hz, "coupling", pos), P("omega0", "5e9", Unit::hz, "hub frequency", pos),
          P("j-tau", "1,2,5,10,20", Unit::list, "coupling (Hz) times tau", pos),
          P("steps", "4000", Unit::grid, "minimum integration steps per run")}},
    };
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

bool parse_double(const std::string& s, double& out)
{
    if (s.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == s.size();
}

const ParamSpec* find_param(const ScenarioSpec& spec, const std::string& key)
{
    for (const auto& p : spec.params)
        if (p.key == key) return &p;
    return nullptr;
}

const ParamSpec& param_of(const ScenarioConfig& c, const std::string& key)
{
    const ParamSpec* p = find_param(scenario_spec(c.scenario), key);
    if (!p) throw std::invalid_argument(c.scenario + ": no parameter '" + key + "'");
    return *p;
}

double scale_of(Unit u) { return u == Unit::hz ? two_pi : 1.0; }

}  // namespace

const std::vector<ScenarioSpec>& scenario_catalog()
{
    static const std::vector<ScenarioSpec> catalog = build_catalog();
    return catalog;
}

const ScenarioSpec& scenario_spec(const std::string& name)
{
    for (const auto& s : scenario_catalog())
        if (s.name == name) return s;
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

bool ScenarioConfig::has(const std::string& key) const { return values.count(key) > 0; }

std::string ScenarioConfig::text(const std::string& key) const
{
    auto it = values.find(key);
    if (it != values.end()) return it->second;
    const ParamSpec& p = param_of(*this, key);
    if (p.fallback.empty()) throw std::invalid_argument(scenario + ": missing required key '" + key + "'");
    return p.fallback;
}

double ScenarioConfig::number(const std::string& key) const
{
    double x = 0;
    const std::string s = text(key);
    if (!parse_double(s, x)) throw std::invalid_argument(scenario + ": key '" + key + "': '" + s + "' is not a number");
    return x * scale_of(param_of(*this, key).unit);
}

int ScenarioConfig::integer(const std::string& key) const
{
    const double x = number(key);
    if (x != std::floor(x) || std::abs(x) > 1e9)
        throw std::invalid_argument(scenario + ": key '" + key + "' must be an integer");
    return int(x);
}

bool ScenarioConfig::flag(const std::string& key) const
{
    const std::string s = text(key);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::invalid_argument(scenario + ": key '" + key + "': '" + s + "' is not a flag value");
}

std::vector<double> ScenarioConfig::numbers(const std::string& key) const
{
    const double scale = scale_of(param_of(*this, key).unit);
    std::vector<double> out;
    for (const auto& item : split(text(key), ',')) {
        double x = 0;
        if (!parse_double(item, x))
            throw std::invalid_argument(scenario + ": key '" + key + "': '" + item + "' is not a number");
        out.push_back(x * scale);
    }
    return out;
}

std::vector<double> ScenarioConfig::range(const std::string& key) const
{
    auto parts = split(text(key), ':');
    double a = 0, b = 0, h = 0;
    if (parts.size() != 3 || !parse_double(parts[0], a) || !parse_double(parts[1], b) || !parse_double(parts[2], h))
        throw std::invalid_argument(scenario + ": key '" + key + "' must read start:stop:step");
    if (!(h > 0) || b < a) throw std::invalid_argument(scenario + ": key '" + key + "' needs step > 0 and stop >= start");
    const long n = std::lround(std::floor((b - a) / h + 1e-9));
    if (n > 1000000) throw std::invalid_argument(scenario + ": key '" + key + "' has too many points");
    std::vector<double> out;
    for (long k = 0; k <= n; ++k) out.push_back(a + double(k) * h);
    return out;
}

std::vector<std::string> ScenarioConfig::words(const std::string& key) const { return split(text(key), ','); }

std::vector<ScenarioConfig> parse_config(const std::string& text)
{
    std::vector<ScenarioConfig> out;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw std::invalid_argument("line " + std::to_string(line) + ": unterminated section");
            ScenarioConfig c;
            c.scenario = trim(s.substr(1, s.size() - 2));
            c.line = line;
            out.push_back(c);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line) + ": expected key = value");
        if (out.empty()) throw std::invalid_argument("line " + std::to_string(line) + ": key outside a section");
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw std::invalid_argument("line " + std::to_string(line) + ": empty key");
        if (out.back().values.count(key))
            throw std::invalid_argument("line " + std::to_string(line) + ": duplicate key '" + key + "'");
        out.back().values[key] = trim(s.substr(eq + 1));
    }
    if (out.empty()) throw std::invalid_argument("config has no [scenario] section");
    return out;
}

std::vector<ScenarioConfig> load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

namespace {

void check_bound(const ParamSpec& p, double x, std::vector<std::string>& d)
{
    if (!std::isfinite(x)) d.push_back("key '" + p.key + "' must be finite");
    else if (p.bound == Bound::positive && !(x > 0)) d.push_back("key '" + p.key + "' must be > 0");
    else if (p.bound == Bound::non_negative && x < 0) d.push_back("key '" + p.key + "' must be >= 0");
}

void check_value(const ScenarioConfig& c, const ParamSpec& p, std::vector<std::string>& d)
{
    try {
        switch (p.unit) {
        case Unit::hz:
        case Unit::seconds:
        case Unit::ratio:
            check_bound(p, c.number(p.key), d);
            break;
        case Unit::count:
            if (c.integer(p.key) < 1) d.push_back("key '" + p.key + "' must be >= 1");
            break;
        case Unit::grid:
            if (c.integer(p.key) < 100) d.push_back("key '" + p.key + "' must be >= 100 grid points");
            break;
        case Unit::list: {
            auto v = c.numbers(p.key);
            if (v.empty()) d.push_back("key '" + p.key + "' is empty");
            for (double x : v) check_bound(p, x, d);
            break;
        }
        case Unit::range:
            c.range(p.key);
            break;
        case Unit::choice:
            for (const auto& w : c.words(p.key))
                if (std::find(p.choices.begin(), p.choices.end(), w) == p.choices.end())
                    d.push_back("key '" + p.key + "': '" + w + "' is not one of the allowed values");
            break;
        case Unit::flag:
            c.flag(p.key);
            break;
        case Unit::path:
            break;
        }
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        const auto colon = msg.find(": ");
        d.push_back(colon == std::string::npos ? msg : msg.substr(colon + 2));
    }
}

void check_constraints(const ScenarioConfig& c, std::vector<std::string>& d)
{
    const std::string& s = c.scenario;
    if (s == "deutsch" && c.number("gamma") >= 1)
        d.push_back("constraint gamma < 1 violated (dephasing must stay below omega)");
    if (s == "lz-tqd" && c.number("tau-max") < c.number("tau-min"))
        d.push_back("constraint tau-max >= tau-min violated");
    if (s == "lz-tqd" && c.number("theta0") >= M_PI / 2) d.push_back("constraint theta0 < pi/2 violated");
    if (s == "gate") {
        auto a = c.numbers("axis");
        if (a.size() != 3) d.push_back("constraint axis has three components violated");
        else if (std::abs(std::hypot(a[0], a[1], a[2]) - 1) > 1e-9) d.push_back("constraint |axis| = 1 violated");
    }
    if (s == "pulses") {
        const double nu = c.number("nu") / two_pi, j = c.number("j") / two_pi, tau = c.number("tau");
        if (c.text("variant") == "optimal") {
            if (j * tau < 1) d.push_back("constraint j * tau >= 1 violated (optimal program free times)");
        } else if (4 * nu > j) {
            d.push_back("constraint 4 nu <= j violated (negative free evolution)");
        }
        for (double n : c.numbers("slices"))
            if (n != std::floor(n) || n < 2) d.push_back("constraint slices are integers >= 2 violated");
    }
}

}  // namespace

std::vector<std::string> validate(const ScenarioConfig& c)
{
    std::vector<std::string> d;
    const ScenarioSpec* spec = nullptr;
    try {
        spec = &scenario_spec(c.scenario);
    } catch (const std::invalid_argument& e) {
        return {e.what()};
    }
    for (const auto& [key, value] : c.values)
        if (!find_param(*spec, key)) d.push_back("unknown key '" + key + "'");
    for (const auto& p : spec->params) {
        if (p.fallback.empty() && !c.has(p.key)) {
            d.push_back("missing required key '" + p.key + "'");
            continue;
        }
        check_value(c, p, d);
    }
    if (d.empty()) check_constraints(c, d);
    return d;
}

std::string unit_label(Unit u)
{
    switch (u) {
    case Unit::hz: return "Hz, converted to rad/s";
    case Unit::seconds: return "s";
    case Unit::ratio: return "number";
    case Unit::count: return "integer";
    case Unit::grid: return "integer >= 100";
    case Unit::list: return "comma list";
    case Unit::range: return "start:stop:step";
    case Unit::choice: return "choice";
    case Unit::flag: return "flag";
    case Unit::path: return "path";
    }
    return "";
}

std::string config_echo(const ScenarioConfig& c)
{
    std::string out = "# scenario = " + c.scenario + "\n";
    for (const auto& p : scenario_spec(c.scenario).params) {
        auto it = c.values.find(p.key);
        out += "# " + p.key + " = " + (it != c.values.end() ? it->second : p.fallback);
        if (p.unit == Unit::hz) out += " Hz";
        out += "\n";
    }
    return out;
}

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x == 0 ? 0.0 : x);
    return buf;
}

}  // namespace adlab::cli
