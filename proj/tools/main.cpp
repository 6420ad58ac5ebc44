#include <cstdio>

#include <CLI11.hpp>

#include "commands.hpp"
#include "pointint/version.hpp"

using namespace pointint;
using namespace pointint::cli;

int main(int argc, char** argv) {
    CLI::App app{
        "pointint - one-dimensional quantum point interactions as renormalized "
        "short-range delta trains (units: hbar = m = 1, E = k^2/2)"};
    app.set_version_flag("--version", std::string("pointint ") + kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path, format;
    std::uint64_t seed = 1;
    bool quiet = false;
    app.add_option("--config", config_path, "experiment config file (INI sections)");
    app.add_option("--out", out_path, "output file (or directory for fig1)");
    app.add_option("--seed", seed, "seed for randomized verification suites");
    app.add_option("--format", format, "output format override: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--quiet", quiet, "suppress progress output");

    auto* spectrum = app.add_subcommand("spectrum", "solve the configured box spectrum");

    Fig1Options fig1_opt;
    auto* fig1 = app.add_subcommand(
        "fig1", "box experiment: smeared discontinuity-inducing potential, four states");
    fig1->add_option("--c", fig1_opt.c, "epsilon coupling strength");
    fig1->add_option("--L", fig1_opt.length, "box length");
    fig1->add_option("--a", fig1_opt.a, "delta-train separation");
    fig1->add_option("--s", fig1_opt.s, "bump width");
    fig1->add_option("--N", fig1_opt.n, "interior grid points");

    ConvergeOptions conv_opt;
    std::vector<double> conv_window;
    auto* converge =
        app.add_subcommand("converge", "zero-range convergence study of a renormalized family");
    converge->add_option("--family", conv_opt.family, "constant|epsilon|chi3|chi5|chi5z");
    converge->add_option("--c", conv_opt.c, "epsilon coupling");
    converge->add_option("--v0", conv_opt.v0, "constant-law flank strength");
    converge->add_option("--u0", conv_opt.u0, "constant-law middle strength");
    converge->add_option("--alpha", conv_opt.alpha, "chi parameter alpha");
    converge->add_option("--beta", conv_opt.beta, "chi parameter beta");
    converge->add_option("--gamma", conv_opt.gamma, "chi parameter gamma");
    converge->add_option("--delta", conv_opt.delta, "chi parameter delta");
    converge->add_option("--a", conv_opt.a_list, "decreasing separations")
        ->delimiter(',')
        ->required();
    converge->add_option("--probe", conv_opt.probe, "transfer:<energy> or eigenvalue:<index>");
    converge->add_option("--L", conv_opt.length, "box length for eigenvalue probes");
    converge->add_option("--window", conv_window, "energy window emin,emax")->delimiter(',');
    converge->add_option("--tol", conv_opt.tolerance, "eigenvalue tolerance");

    VerifyOptions verify_opt;
    auto* verify = app.add_subcommand(
        "verify", "seeded property suites for the factorization and composition identities");
    verify->add_option("--trials", verify_opt.trials, "trials per branch");

    int extract_states = 4;
    auto* extract = app.add_subcommand(
        "extract", "fit a connection matrix from extracted boundary data");
    extract->add_option("--states", extract_states, "number of lowest states to use");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CommandContext ctx;
    ctx.out = out_path;
    ctx.format = format;
    ctx.seed = seed;
    ctx.quiet = quiet;

    try {
        if (spectrum->parsed()) {
            if (config_path.empty())
                throw ConfigError("config", "spectrum needs --config");
            return cmd_spectrum(load_config(config_path), ctx);
        }
        if (fig1->parsed()) return cmd_fig1(fig1_opt, ctx);
        if (converge->parsed()) {
            if (conv_window.size() == 2) {
                conv_opt.emin = conv_window[0];
                conv_opt.emax = conv_window[1];
            } else if (!conv_window.empty()) {
                throw ConfigError("window", "expected emin,emax");
            }
            return cmd_converge(conv_opt, ctx);
        }
        if (verify->parsed()) {
            verify_opt.seed = seed;
            return cmd_verify(verify_opt, ctx);
        }
        if (extract->parsed()) {
            if (config_path.empty())
                throw ConfigError("config", "extract needs --config");
            return cmd_extract(load_config(config_path), extract_states, ctx);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DegenerateInputs& e) {
        std::fprintf(stderr, "degenerate inputs: %s (increase --states)\n", e.what());
        return 4;
    } catch (const Error& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    }
    return 2;
}
