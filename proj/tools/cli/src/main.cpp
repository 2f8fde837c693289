#include "plap/cli/config.hpp"
#include "plap/cli/run.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

int main(int argc, char** argv) {
    using namespace plap::cli;

    CLI::App app{"Positive radial solutions of p-Laplace Dirichlet problems on the unit ball"};
    app.set_version_flag("--version", std::string(PLAP_VERSION));
    std::string command;
    std::string configPath;
    std::string outDir;
    std::vector<std::string> formats;
    app.add_option("command", command, "solve, curve, homotopy, check, timemap, identities or classify")
        ->required()
        ->check(CLI::IsMember({"solve", "curve", "homotopy", "check", "timemap", "identities", "classify"}));
    app.add_option("--config", configPath, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--out", outDir, "output directory (overrides output.directory)");
    app.add_option("--format", formats, "comma-separated subset of csv,json")
        ->delimiter(',')
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kSolverFailure;
    }

    RunConfig config;
    try {
        config = loadConfig(configPath, parseCommand(command));
        if (!outDir.empty()) config.output.directory = outDir;
        if (!formats.empty()) {
            config.output.csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();
            config.output.json = std::find(formats.begin(), formats.end(), "json") != formats.end();
        }
        refreshResolved(config);
    } catch (const ConfigError& e) {
        std::cerr << "plap: config error in " << configPath << ": " << e.what() << "\n";
        return kSolverFailure;
    }

    try {
        const RunOutcome outcome = runCommand(config);
        (outcome.exitCode == kOk ? std::cout : std::cerr) << "plap " << command << ": " << outcome.summary << "\n";
        for (const auto& path : outcome.artifacts) std::cout << "  wrote " << path.generic_string() << "\n";
        return outcome.exitCode;
    } catch (const std::exception& e) {
        std::cerr << "plap " << command << ": " << e.what() << "\n";
        return kSolverFailure;
    }
}
