#include "fluxtune/config.hpp"
#include "fluxtune/runner.hpp"
#include "fluxtune/table.hpp"
#include "fluxtune/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::string engine;
    int n_fock = 0;
    int n_charge = 0;
};

void attach_options(CLI::App* cmd, CommonOptions& opt)
{
    cmd->add_option("--config", opt.config_path,
                    "JSON configuration file ('-' or absent reads stdin)");
    cmd->add_option("--out", opt.out_path,
                    "output file (stdout when absent); written atomically");
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--engine", opt.engine,
                    "override the root-finding engine")
        ->check(CLI::IsMember({"exact", "perturbative"}));
    cmd->add_option("--nb", opt.n_fock, "override the oscillator cutoff")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--ncharge", opt.n_charge, "override the charge cutoff")
        ->check(CLI::PositiveNumber);
}

int run(const std::string& subcommand, const CommonOptions& opt)
{
    fluxtune::RunConfig config = fluxtune::load_config(opt.config_path);
    if (opt.engine == "exact") {
        config.engine = fluxtune::Engine::exact;
    } else if (opt.engine == "perturbative") {
        config.engine = fluxtune::Engine::perturbative;
    }
    if (opt.n_fock > 0) {
        config.n_fock = opt.n_fock;
    }
    if (opt.n_charge > 0) {
        config.n_charge = opt.n_charge;
    }
    if (config.n_fock < 2 || config.n_charge < 1) {
        throw fluxtune::ConfigError(
            "basis cutoffs must satisfy n_fock >= 2, n_charge >= 1");
    }

    const fluxtune::ResultTable table =
        fluxtune::run_subcommand(subcommand, config);
    fluxtune::write_table(table, fluxtune::parse_format(opt.format),
                          opt.out_path);
    return 0;
}

void emit_error(const std::string& type, const std::string& message)
{
    nlohmann::ordered_json err;
    err["error"] = {{"type", type}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fluxtune: tunable-coupling artificial-atom simulator"};
    app.set_version_flag("--version", fluxtune::version);
    app.require_subcommand(1);

    const std::vector<std::string> names = {
        "derive", "validate", "schedule", "spectrum", "couplings", "noise"};
    const std::vector<std::string> descriptions = {
        "derived energy and circuit scales",
        "parameter-regime validation report",
        "constant-splitting flux schedule with couplings",
        "five lowest levels along the schedule",
        "exact vs closed-form coupling coefficients",
        "decoherence-time budget along the schedule"};

    std::vector<CommonOptions> opts(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        CLI::App* cmd = app.add_subcommand(names[i], descriptions[i]);
        attach_options(cmd, opts[i]);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < names.size(); ++i) {
        if (app.got_subcommand(names[i])) {
            try {
                return run(names[i], opts[i]);
            } catch (const fluxtune::ConfigError& e) {
                emit_error("config", e.what());
                return 2;
            } catch (const std::invalid_argument& e) {
                emit_error("invalid_argument", e.what());
                return 2;
            } catch (const std::exception& e) {
                emit_error("runtime", e.what());
                return 1;
            }
        }
    }
    emit_error("usage", "no subcommand given");
    return 2;
}
