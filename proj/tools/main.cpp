#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "run_config.hpp"

namespace {

struct Overrides {
    std::optional<std::string> config;
    std::optional<double> omega, gamma0, phi, eta;
    std::optional<std::string> branch, mode, out;
    std::optional<double> x_max, eta_start, eta_stop, eta_step, e_min, e_max, ridge_threshold;
    std::optional<std::size_t> n_points, n_eta, n_energy, fock_n_max;
    std::optional<std::vector<std::size_t>> modes;
    std::optional<std::vector<std::string>> formats;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON config file; flags override its values");
    cmd->add_option("--omega", o.omega, "vibration quantum (energy unit)");
    cmd->add_option("--gamma0", o.gamma0, "radiative decay rate, units of omega");
    cmd->add_option("--phi", o.phi, "propagation phase, radians");
    cmd->add_option("--eta", o.eta, "optomechanical coupling strength");
    cmd->add_option("--branch", o.branch, "excitation branch: + or -");
    cmd->add_option("--mode", o.mode, "hermitian or full");
    cmd->add_option("--x-max", o.x_max, "grid half-extent");
    cmd->add_option("--n-points", o.n_points, "grid point count");
    cmd->add_option("--eta-start", o.eta_start, "sweep/phase-map eta start");
    cmd->add_option("--eta-stop", o.eta_stop, "sweep/phase-map eta stop");
    cmd->add_option("--eta-step", o.eta_step, "sweep eta step");
    cmd->add_option("--e-min", o.e_min, "energy window bottom, units of omega");
    cmd->add_option("--e-max", o.e_max, "energy window top, units of omega");
    cmd->add_option("--n-eta", o.n_eta, "phase-map eta resolution");
    cmd->add_option("--n-energy", o.n_energy, "phase-map energy resolution");
    cmd->add_option("--ridge-threshold", o.ridge_threshold, "phase-map discontinuity threshold");
    cmd->add_option("--modes", o.modes, "eigenvector indices for eigenvectors.csv");
    cmd->add_option("--fock-n-max", o.fock_n_max, "phonon-basis truncation for validate");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--format", o.formats, "output formats: csv, json, svg")->delimiter(',');
}

ovib::cli::RunConfig assemble(const Overrides& o) {
    ovib::cli::RunConfig cfg;
    if (o.config) cfg = ovib::cli::RunConfig::load(*o.config);
    if (o.omega) cfg.omega = *o.omega;
    if (o.gamma0) cfg.gamma0 = *o.gamma0;
    if (o.phi) cfg.phi = *o.phi;
    if (o.eta) cfg.eta = *o.eta;
    if (o.branch) cfg.branch = *o.branch;
    if (o.mode) cfg.mode = *o.mode;
    if (o.x_max) cfg.x_max = *o.x_max;
    if (o.n_points) cfg.n_points = *o.n_points;
    if (o.eta_start) cfg.eta_start = *o.eta_start;
    if (o.eta_stop) cfg.eta_stop = *o.eta_stop;
    if (o.eta_step) cfg.eta_step = *o.eta_step;
    if (o.e_min) cfg.e_min = *o.e_min;
    if (o.e_max) cfg.e_max = *o.e_max;
    if (o.n_eta) cfg.n_eta = *o.n_eta;
    if (o.n_energy) cfg.n_energy = *o.n_energy;
    if (o.ridge_threshold) cfg.ridge_threshold = *o.ridge_threshold;
    if (o.modes) cfg.modes = *o.modes;
    if (o.fock_n_max) cfg.fock_n_max = *o.fock_n_max;
    if (o.out) cfg.out = *o.out;
    if (o.formats) cfg.formats = *o.formats;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vibrational spectra of two optomechanically coupled emitters near a waveguide"};
    app.require_subcommand(1);

    Overrides o;
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues, eigenvectors and potential at one eta");
    auto* sweep = app.add_subcommand("sweep", "spectrum vs eta with localized-pair tracks");
    auto* phasemap = app.add_subcommand("phasemap", "fractional quasiclassical phase over (eta, E)");
    auto* thresholds = app.add_subcommand("thresholds", "analytic localized-state thresholds");
    auto* validate = app.add_subcommand("validate", "cross-oracle and invariant battery");
    for (auto* cmd : {spectrum, sweep, phasemap, thresholds, validate}) add_common(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const auto cfg = assemble(o);
        if (spectrum->parsed()) return ovib::cli::cmd_spectrum(cfg);
        if (sweep->parsed()) return ovib::cli::cmd_sweep(cfg);
        if (phasemap->parsed()) return ovib::cli::cmd_phasemap(cfg);
        if (thresholds->parsed()) return ovib::cli::cmd_thresholds(cfg);
        if (validate->parsed()) return ovib::cli::cmd_validate(cfg);
    } catch (const ovib::cli::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ovib::cli::SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
