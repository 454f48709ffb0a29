#include <CLI11.hpp>

#include "moyal/cli.hpp"

namespace {

using moyal::cli::RunConfig;

void add_model_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("--model", cfg.model, "harmonic, helium or damped")->capture_default_str();
    app.add_option("--n", cfg.n, "quantum number")->capture_default_str();
    app.add_option("--nu", cfg.nu, "helium u-sector quantum number");
    app.add_option("--nv", cfg.nv, "helium v-sector quantum number");
    app.add_option("--lambda", cfg.lam, "damping parameter, |lambda| < 1");
    app.add_option("--xi", cfg.xi, "helium coupling, 0 <= xi < 1");
    app.add_option("--mass", cfg.m, "mass")->capture_default_str();
    app.add_option("--omega", cfg.omega, "angular frequency")->capture_default_str();
    app.add_option("--hbar", cfg.hbar, "reduced Planck constant")->capture_default_str();
    app.add_option("--out", cfg.out, "output path (stdout when omitted, where allowed)");
    app.add_option("--format", cfg.format, "csv or json");
}

void add_grid_options(CLI::App& app, RunConfig& cfg, std::vector<CLI::Option*>& opts) {
    opts.push_back(app.add_option("--qmin", cfg.grid.qmin)->capture_default_str());
    opts.push_back(app.add_option("--qmax", cfg.grid.qmax)->capture_default_str());
    opts.push_back(app.add_option("--pmin", cfg.grid.pmin)->capture_default_str());
    opts.push_back(app.add_option("--pmax", cfg.grid.pmax)->capture_default_str());
    opts.push_back(app.add_option("--nq", cfg.grid.nq)->capture_default_str());
    opts.push_back(app.add_option("--np", cfg.grid.np)->capture_default_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-space quantum mechanics with the Moyal star product"};
    app.set_version_flag("--version", std::string(moyal::cli::kVersion));
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<CLI::Option*> grid_opts;
    std::string method = "radial";

    CLI::App* wigner = app.add_subcommand("wigner", "write a sampled Wigner function as CSV");
    CLI::App* spectrum = app.add_subcommand("spectrum", "list energies as JSON");
    CLI::App* negativity = app.add_subcommand("negativity", "negativity indicator table as JSON");
    CLI::App* verify = app.add_subcommand("verify", "run the cross-engine invariant suite");

    for (CLI::App* sub : {wigner, spectrum, negativity, verify}) {
        add_model_options(*sub, cfg);
        add_grid_options(*sub, cfg, grid_opts);
    }
    for (CLI::App* sub : {spectrum, negativity})
        sub->add_option("--n-max", cfg.n_max, "largest quantum number")->capture_default_str();
    negativity->add_option("--method", method, "radial or grid")
        ->check(CLI::IsMember({"radial", "grid"}))
        ->capture_default_str();
    negativity->add_option("--tol", cfg.tol, "grid quadrature and lambda-scan tolerance")->capture_default_str();
    negativity->add_flag("--check-table1", cfg.check_table1, "compare n <= 9 with the published table");
    negativity->add_option("--table1-tol", cfg.table1_tol, "tolerance for --check-table1")->capture_default_str();
    negativity->add_option("--lambda-scan", cfg.lambda_scan, "comma-separated lambdas")->delimiter(',');
    verify->add_flag("--inject-sign-error", cfg.inject_sign_error)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : moyal::cli::kUsage;
    }
    for (const CLI::Option* o : grid_opts) cfg.grid_set = cfg.grid_set || o->count() > 0;
    cfg.method = method == "grid" ? moyal::NegativityMethod::grid : moyal::NegativityMethod::radial;

    return moyal::cli::run_guarded([&] {
        if (wigner->parsed()) return moyal::cli::cmd_wigner(cfg);
        if (spectrum->parsed()) return moyal::cli::cmd_spectrum(cfg);
        if (negativity->parsed()) return moyal::cli::cmd_negativity(cfg);
        return moyal::cli::cmd_verify(cfg);
    });
}
