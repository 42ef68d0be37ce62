// adlab: runs adiabatic-dynamics scenarios from config files or command-line options.
#include "config.hpp"
#include "scenarios.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace adlab::cli;

namespace {

void write_output(const std::string& text, const std::string& path)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
}

std::string describe(const ParamSpec& p)
{
    std::string s = p.help + " [" + unit_label(p.unit);
    if (!p.choices.empty()) {
        s += ":";
        for (size_t k = 0; k < p.choices.size(); ++k) s += (k ? "|" : " ") + p.choices[k];
    }
    s += p.fallback.empty() ? ", required]" : ", default " + p.fallback + "]";
    return s;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Adiabatic dynamics laboratory.\n"
                 "Frequencies are given in Hz and used internally as angular frequencies (rad/s);\n"
                 "times are in seconds. Output is CSV: '#' config echo, comments, header, rows."};
    app.require_subcommand(1);
    std::string output;

    auto* run = app.add_subcommand("run", "Run every section of a config file");
    std::string run_path;
    run->add_option("config", run_path, "Config file with [scenario] sections")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", output, "CSV destination (default stdout)");

    auto* check = app.add_subcommand("validate", "Check a config file without running it");
    std::string check_path;
    check->add_option("config", check_path, "Config file")->required()->check(CLI::ExistingFile);

    std::map<std::string, std::map<std::string, std::string>> direct;
    std::map<std::string, std::map<std::string, bool>> direct_flags;
    std::vector<std::pair<CLI::App*, std::string>> scenario_cmds;
    for (const auto& spec : scenario_catalog()) {
        auto* sub = app.add_subcommand(spec.name, spec.help);
        sub->add_option("-o,--output", output, "CSV destination (default stdout)");
        for (const auto& p : spec.params) {
            if (p.unit == Unit::flag) sub->add_flag("--" + p.key, direct_flags[spec.name][p.key], describe(p));
            else sub->add_option("--" + p.key, direct[spec.name][p.key], describe(p));
        }
        scenario_cmds.emplace_back(sub, spec.name);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            int bad = 0;
            for (const auto& c : load_config(check_path)) {
                for (const auto& d : validate(c)) {
                    std::cout << check_path << ":" << c.line << ": [" << c.scenario << "] " << d << "\n";
                    ++bad;
                }
            }
            if (bad) return 1;
            std::cout << "ok\n";
            return 0;
        }
        std::vector<ScenarioConfig> configs;
        if (run->parsed()) configs = load_config(run_path);
        for (const auto& [sub, name] : scenario_cmds) {
            if (!sub->parsed()) continue;
            ScenarioConfig c;
            c.scenario = name;
            for (const auto& [k, v] : direct[name])
                if (sub->count("--" + k)) c.values[k] = v;
            for (const auto& [k, v] : direct_flags[name])
                if (sub->count("--" + k)) c.values[k] = v ? "true" : "false";
            configs.push_back(c);
        }
        std::string text;
        for (const auto& c : configs) text += run_scenario(c);
        write_output(text, output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
