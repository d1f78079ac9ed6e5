// schottky-gap: transfer-operator experiments on Schottky surfaces.
//
//   schottky-gap <subcommand> --config <path> [--set key=value ...]
//
// Subcommands: validate, delta, zeros, scan, factor-check, expander.
// Errors are reported as one JSON record on stderr; exit codes:
//   0 success, 2 config error, 3 validation failure, 4 certificate failure,
//   1 anything else.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "schottky/config.hpp"
#include "schottky/errors.hpp"
#include "schottky/run.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw schottky::IoError("cannot read config file " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int report_error(const std::string& kind, const std::string& message, int code,
                 const nlohmann::json& context = {}) {
    nlohmann::json record{{"error", kind}, {"message", message}};
    if (!context.empty()) record["context"] = context;
    std::cerr << record.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Selberg zeta / L-function experiments for Schottky surfaces"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    for (const std::string name :
         {"validate", "delta", "zeros", "scan", "factor-check", "expander"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--set", overrides, "override a config key (section.key=value)");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string subcommand = app.get_subcommands().front()->get_name();

    try {
        schottky::ExperimentConfig config = schottky::parse_config(read_file(config_path));
        for (const auto& assignment : overrides) schottky::apply_override(config, assignment);
        const schottky::RunResult result = schottky::run(subcommand, config, std::cout);
        for (const auto& f : result.files_written) std::cout << "wrote " << f << "\n";
        if (result.exit_code != 0)
            return report_error("run_failure", "subcommand finished with failures",
                                result.exit_code, {{"subcommand", subcommand}});
        return 0;
    } catch (const schottky::ParseError& e) {
        return report_error("parse_error", e.what(), 2,
                            {{"line", e.line}, {"column", e.column}});
    } catch (const schottky::SemanticError& e) {
        return report_error("semantic_error", e.what(), 2, {{"field", e.field}});
    } catch (const schottky::CertificateError& e) {
        return report_error("certificate_error", e.what(), 4);
    } catch (const schottky::InvalidGroupError& e) {
        return report_error("invalid_group", e.what(), 3);
    } catch (const schottky::InfeasibleConfigurationError& e) {
        return report_error("infeasible_configuration", e.what(), 3);
    } catch (const schottky::Error& e) {
        return report_error("error", e.what(), 1);
    } catch (const std::exception& e) {
        return report_error("error", e.what(), 1);
    }
}
