#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ovib/grid.hpp"
#include "ovib/model.hpp"

#include "json.hpp"

namespace ovib::cli {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat run configuration shared by all subcommands. JSON keys mirror the field
// names; unknown keys are errors, not warnings.
struct RunConfig {
    // model
    double omega = 1.0;
    double gamma0 = 4.0;
    double phi = std::numbers::pi / 2;
    double eta = 0.0;
    std::string branch = "+"; // "+" or "-"
    std::string mode = "hermitian";

    // grid overrides
    double x_max = 15.0;
    std::size_t n_points = 3001;

    // sweep spec: explicit list wins over start/stop/step
    double eta_start = 0.0;
    double eta_stop = 6.0;
    double eta_step = 0.05;
    std::vector<double> eta_list;

    // energy window (units of omega)
    double e_min = -5.0;
    double e_max = 40.0;

    // phase-map lattice
    std::size_t n_eta = 300;
    std::size_t n_energy = 300;
    double ridge_threshold = 0.25;

    // eigenvector columns for cmd_spectrum; empty = all solved modes
    std::vector<std::size_t> modes;

    std::string out = "out";
    std::vector<std::string> formats = {"csv"};
    std::uint64_t seed = 0; // reserved; the pipeline is deterministic
    std::size_t fock_n_max = 200;

    ModelParams params() const;
    Grid grid() const;
    SolveMode solve_mode() const;
    std::vector<double> sweep_etas() const;
    bool wants(const std::string& format) const;

    // Full checking (model, grid resolution at the largest eta the run will
    // touch, containment of the energy window). Throws ConfigError.
    void check(bool sweep_like) const;

    nlohmann::ordered_json to_json() const;
    static RunConfig from_json(const nlohmann::ordered_json& j);
    static RunConfig load(const std::string& path);
};

} // namespace ovib::cli
