// satnc: constellation propagation, network code construction and rate
// analysis from one INI configuration.

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>

#include "satnc/config.hpp"
#include "satnc/error.hpp"
#include "satnc/pipeline.hpp"

namespace {

constexpr int kExitIo = 4;

std::string flag_name(const std::string& key) { return key.substr(key.find('.') + 1); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network coding over a LEO constellation: propagate, build codes, compare rate schemes"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_file;
    app.add_option("-c,--config", config_file, "INI configuration file (defaults reproduce the reference scenario)");

    std::map<std::string, std::string> overrides;
    for (const auto& key : satnc::config_keys()) {
        app.add_option_function<std::string>(
               "--" + flag_name(key), [&overrides, key](const std::string& v) { overrides[key] = v; },
               "override " + key)
            ->group("Config overrides");
    }
    std::vector<std::string> sets;
    app.add_option("--set", sets, "override any key as section.key=value")->group("Config overrides");

    auto* propagate = app.add_subcommand("propagate", "write the range CSV for the configured duration");
    auto* code = app.add_subcommand("code", "build and verify a network code on one snapshot");
    double t_min = 0.0;
    code->add_option("--t", t_min, "snapshot time in minutes")->capture_default_str();
    auto* rates = app.add_subcommand("rates", "write rates.csv, interval_sweep.csv and criteria.csv");
    auto* crit = app.add_subcommand("criteria", "print the scheme-selection criteria");

    CLI11_PARSE(app, argc, argv);

    satnc::ScenarioConfig cfg;
    try {
        if (!config_file.empty()) cfg = satnc::load_config(config_file);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw satnc::ConfigError("--set expects section.key=value, got '" + s + "'");
            satnc::apply_override(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        for (const auto& [key, value] : overrides) satnc::apply_override(cfg, key, value);
        cfg.validate();

        if (*propagate) return satnc::cmd_propagate(cfg, std::cerr);
        if (*code) return satnc::cmd_code(cfg, t_min, std::cerr);
        if (*rates) return satnc::cmd_rates(cfg, std::cerr);
        if (*crit) return satnc::cmd_criteria(cfg, std::cout, std::cerr);
    } catch (const satnc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return satnc::kExitConfig;
    } catch (const satnc::ConsistencyError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return satnc::kExitConfig;
    } catch (const satnc::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    }
    return satnc::kExitConfig;
}
