#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <stokes_unfold/cli/commands.hpp>

namespace su = stokes_unfold;
namespace cli = stokes_unfold::cli;

int main(int argc, char** argv) {
    CLI::App app{"stokes-unfold: Stokes matrices, unfolded monodromy and their confluence"};
    app.require_subcommand(1);

    std::string nu;
    std::optional<long> n;
    std::optional<double> inv_sqrt_eps;

    auto* inv = app.add_subcommand("invariants", "formal invariants and Stokes matrices of the unperturbed equation");
    inv->add_option("--nu", nu, "nu, real or a+bi")->required();

    auto* pert = app.add_subcommand("perturbed", "exponents, residues and monodromy of the perturbed equation");
    pert->add_option("--nu", nu, "nu, real or a+bi")->required();
    auto* pn = pert->add_option("--n", n, "resonant index, 1/sqrt eps = nu + 2n");
    pert->add_option("--inv-sqrt-eps", inv_sqrt_eps, "1/sqrt eps directly")->excludes(pn);

    cli::ConfluenceArgs conf;
    auto* con = app.add_subcommand("confluence", "table of residues and Stokes errors along the resonant sequence");
    con->add_option("--nu", conf.nu, "real nu")->required();
    con->add_option("--n-min", conf.n_min, "first n")->capture_default_str();
    con->add_option("--n-max", conf.n_max, "last n")->capture_default_str();
    con->add_option("--format", conf.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    con->add_option("--gnuplot", conf.gnuplot, "also write a gnuplot script to this path");
    con->add_option("--output", conf.output, "CSV path for --gnuplot (default: script path with .csv)");

    cli::OracleArgs orc;
    auto* ora = app.add_subcommand("oracle", "numerical monodromy by integrating the companion system around a loop");
    ora->add_option("--nu", orc.nu, "nu, real or a+bi")->required();
    auto* on = ora->add_option("--n", n, "resonant index, 1/sqrt eps = nu + 2n");
    ora->add_option("--inv-sqrt-eps", inv_sqrt_eps, "1/sqrt eps directly")->excludes(on);
    ora->add_option("--which", orc.which, "L, R or origin")->check(CLI::IsMember({"L", "R", "origin"}))->capture_default_str();
    ora->add_option("--tol", orc.tol, "integrator tolerance")->capture_default_str();
    ora->add_option("--radius", orc.radius, "loop radius for --which origin")->capture_default_str();
    ora->add_option("--invariant-tol", orc.invariant_tol, "tolerance on eigenvalue and determinant errors")->capture_default_str();
    ora->add_flag("--allow-stiff", orc.allow_stiff, "integrate even when 1/sqrt eps > 12");

    std::string filter;
    std::uint64_t seed = 42;
    auto* chk = app.add_subcommand("check", "run the property suite");
    chk->add_option("--filter", filter, "substring of module.property");
    chk->add_option("--seed", seed, "random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return su::exit_code(su::ErrorKind::Parse);
    }

    cli::PerturbChoice choice{n, inv_sqrt_eps};
    cli::CommandOutput out;
    if (inv->parsed()) {
        out = cli::cmd_invariants(nu);
    } else if (pert->parsed()) {
        out = cli::cmd_perturbed(nu, choice);
    } else if (con->parsed()) {
        out = cli::cmd_confluence(conf);
    } else if (ora->parsed()) {
        orc.choice = choice;
        out = cli::cmd_oracle(orc);
    } else {
        out = cli::cmd_check(filter, seed);
    }
    std::cout << out.text << std::flush;
    return out.exit_code;
}
