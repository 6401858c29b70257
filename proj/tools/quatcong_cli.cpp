#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "quatcong/app.hpp"

namespace qa = quatcong::app;

int main(int argc, char** argv)
{
    CLI::App cli{"Arithmetic invariants of congruence subgroups in quaternionic groups"};
    cli.require_subcommand(1);
    cli.fallthrough();

    std::string config_path, out_path, format = "json";
    std::optional<double> tol;
    bool single_thread = false;
    cli.add_option("--out", out_path, "Write the report here instead of stdout");
    cli.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cli.add_option("--tol", tol, "Tolerance for numeric cross-checks")->check(CLI::PositiveNumber);
    cli.add_flag("--single-thread", single_thread, "Disable worker threads (certification runs)");

    for (const auto& name : qa::command_names()) {
        auto* sub = cli.add_subcommand(name);
        sub->add_option("--config", config_path, "RunConfig JSON document")->required()->check(CLI::ExistingFile);
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = cli.exit(e);
        return rc == 0 ? 0 : quatcong::ConfigError::exit_code;
    }
    const std::string command = cli.get_subcommands().front()->get_name();

    qa::CommandOutput output;
    std::string message;
    int rc = qa::exit_code_of(
        [&] {
            std::ifstream in(config_path);
            quatcong::json doc = quatcong::json::parse(in);
            auto config = qa::parse_config(doc);
            output = qa::run_command(command, config, {tol, single_thread});
            if (format == "csv" && !output.csv) {
                throw quatcong::ConfigError("command '" + command + "' has no tabular output");
            }
        },
        message);
    if (rc != 0) {
        std::cerr << "error: " << message << "\n";
        return rc;
    }

    std::string text = format == "csv" ? *output.csv : output.report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return quatcong::ConfigError::exit_code;
        }
        out << text;
    }
    if (output.exit_code != 0) std::cerr << "error: consistency check failed\n";
    return output.exit_code;
}
