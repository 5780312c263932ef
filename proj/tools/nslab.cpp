// Command-line front end: wires a json run configuration to the solver,
// symbolic, spectra and comparison pipelines.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nslab/cli.hpp"
#include "nslab/config.hpp"

namespace {

nslab::RunConfig load_config(const std::optional<std::string>& path,
                             const std::optional<std::uint64_t>& seed_override) {
    nslab::RunConfig cfg;
    if (path) cfg = nslab::config_from_json(nslab::read_json_file(*path));
    if (seed_override) cfg.initial.seed = *seed_override;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral Taylor-series laboratory for the periodic Navier-Stokes equations"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed_override;
    nslab::OutputOptions out;
    app.add_option("--config", config_path, "json run configuration (defaults apply if omitted)");
    app.add_option("--out", out.out_dir, "output directory")->capture_default_str();
    app.add_option("--format", out.format, "summary table format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--seed", seed_override, "override the initial-condition seed");

    auto* symbolic = app.add_subcommand(
        "symbolic", "emit recursion/exponential-product polynomials and their differences");
    int symbolic_order = 4;
    symbolic->add_option("-N,--order", symbolic_order, "highest order to expand")
        ->capture_default_str();

    auto* solve = app.add_subcommand("solve", "solve the coefficient recursion");
    auto* spectra = app.add_subcommand("spectra", "eigenvalue stability sweep");
    auto* compare = app.add_subcommand("compare", "series error against the rk4 reference");
    auto* info = app.add_subcommand("lattice-info", "print lattice bookkeeping");

    // let global flags appear after the subcommand as well
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? nslab::kExitOk : nslab::kExitConfig;
    }

    try {
        if (symbolic->parsed()) return nslab::cmd_symbolic(symbolic_order, out);
        const nslab::RunConfig cfg = load_config(config_path, seed_override);
        if (solve->parsed()) return nslab::cmd_solve(cfg, out);
        if (spectra->parsed()) return nslab::cmd_spectra(cfg, out);
        if (compare->parsed()) return nslab::cmd_compare(cfg, out);
        if (info->parsed()) return nslab::cmd_lattice_info(cfg, out);
        std::cerr << "no subcommand selected\n";
        return nslab::kExitUsage;
    } catch (const nslab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return nslab::kExitConfig;
    } catch (const nslab::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return nslab::kExitValidation;
    } catch (const nslab::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return nslab::kExitNumeric;
    } catch (const nslab::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return nslab::kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return nslab::kExitUsage;
    }
}
