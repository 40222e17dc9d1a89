#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfcontrol/cli.hpp"
#include "pfcontrol/errors.hpp"

namespace {

struct Options {
    std::string config;
    std::string scenario;
    std::string output;
    std::vector<std::string> overrides;
};

void add_run_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("-c,--config", opt.config, "config file with section.key = value lines");
    cmd->add_option("-s,--scenario", opt.scenario, "preset name");
    cmd->add_option("-o,--output", opt.output, "output directory");
    cmd->add_option("--override", opt.overrides, "section.key=value, applied after the config file")
        ->take_all();
}

pfc::cli::RunConfig load(const Options& opt) {
    std::vector<pfc::cli::Setting> settings;
    if (!opt.config.empty()) settings = pfc::cli::read_config_file(opt.config);
    if (!opt.scenario.empty()) settings.push_back({"run.scenario", opt.scenario, "--scenario"});
    if (!opt.output.empty()) settings.push_back({"run.output", opt.output, "--output"});
    for (const auto& o : opt.overrides) settings.push_back(pfc::cli::parse_override(o));
    return pfc::cli::resolve(settings);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal boundary temperature control of a phase-field solidification model"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list the built-in scenarios");
    auto* keys = app.add_subcommand("keys", "list the accepted configuration keys");
    Options run_opt;
    auto* run = app.add_subcommand("run", "run the gradient descent and export CSV files");
    add_run_options(run, run_opt);
    Options check_opt;
    auto* check = app.add_subcommand("gradcheck", "compare the adjoint gradient with finite differences");
    add_run_options(check, check_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pfc::cli::exit_config_error;
    }

    try {
        if (list->parsed()) return pfc::cli::cmd_list(std::cout);
        if (keys->parsed()) {
            for (const auto& [k, help] : pfc::cli::known_keys()) std::cout << k << "  " << help << '\n';
            return 0;
        }
        if (run->parsed()) return pfc::cli::cmd_run(load(run_opt), std::cout, std::cerr);
        if (check->parsed()) return pfc::cli::cmd_gradcheck(load(check_opt), std::cout, std::cerr);
    } catch (const pfc::InvalidSpec& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return pfc::cli::exit_config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return pfc::cli::exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
