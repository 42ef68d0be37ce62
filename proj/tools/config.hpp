// Scenario configuration: key=value sections, parameter schema and validation.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace adlab::cli {

enum class Unit {
    hz,      // frequency in Hz, read back in rad/s
    seconds,
    ratio,   // dimensionless number
    count,   // integer
    grid,    // integer >= 100
    list,    // comma-separated numbers
    range,   // start:stop:step
    choice,  // one of the listed words
    flag,    // true/false
    path,
};

enum class Bound { none, non_negative, positive };

struct ParamSpec {
    std::string key;
    std::string fallback;  // empty: required
    Unit unit = Unit::ratio;
    std::string help;
    Bound bound = Bound::none;
    std::vector<std::string> choices;  // choice keys; a comma list picks several
};

struct ScenarioSpec {
    std::string name;
    std::string help;
    std::vector<ParamSpec> params;
};

const std::vector<ScenarioSpec>& scenario_catalog();
const ScenarioSpec& scenario_spec(const std::string& name);  // throws invalid_argument

struct ScenarioConfig {
    std::string scenario;
    std::map<std::string, std::string> values;  // as written, before unit conversion
    int line = 0;                               // section header line in the source file

    bool has(const std::string& key) const;
    std::string text(const std::string& key) const;  // value or schema default
    double number(const std::string& key) const;     // Hz keys come back in rad/s
    int integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;  // lists; Hz lists in rad/s
    std::vector<double> range(const std::string& key) const;    // start:stop:step, inclusive
    std::vector<std::string> words(const std::string& key) const;
};

// Parses "[name]" sections of key = value lines; '#' starts a comment.
std::vector<ScenarioConfig> parse_config(const std::string& text);
std::vector<ScenarioConfig> load_config(const std::string& path);

// Schema and constraint report; empty when the config can run.
std::vector<std::string> validate(const ScenarioConfig& c);

// "# key = value" lines for every schema key, defaults included.
std::string config_echo(const ScenarioConfig& c);

std::string unit_label(Unit u);
std::string format_number(double x);

}  // namespace adlab::cli
