#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "ovib/errors.hpp"

namespace ovib::cli {

ModelParams RunConfig::params() const {
    ModelParams p;
    p.omega = omega;
    p.gamma0 = gamma0;
    p.phi = phi;
    p.eta = eta;
    p.branch = branch == "-" ? Branch::antisymmetric : Branch::symmetric;
    return p;
}

Grid RunConfig::grid() const { return Grid(x_max, n_points); }

SolveMode RunConfig::solve_mode() const {
    return mode == "full" ? SolveMode::full : SolveMode::hermitian;
}

std::vector<double> RunConfig::sweep_etas() const {
    if (!eta_list.empty()) {
        auto out = eta_list;
        std::sort(out.begin(), out.end());
        return out;
    }
    std::vector<double> out;
    for (double e = eta_start; e <= eta_stop + 0.5 * eta_step; e += eta_step) out.push_back(e);
    return out;
}

bool RunConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void RunConfig::check(bool sweep_like) const {
    if (branch != "+" && branch != "-")
        throw ConfigError("branch must be \"+\" or \"-\", got \"" + branch + "\"");
    if (mode != "hermitian" && mode != "full")
        throw ConfigError("mode must be \"hermitian\" or \"full\", got \"" + mode + "\"");
    for (const auto& f : formats)
        if (f != "csv" && f != "json" && f != "svg")
            throw ConfigError("unknown output format \"" + f + "\"");
    if (!(e_max > e_min)) throw ConfigError("energy window needs e_max > e_min");
    if (sweep_like) {
        if (eta_list.empty() && !(eta_step > 0.0 && eta_stop >= eta_start))
            throw ConfigError("sweep spec needs eta_step > 0 and eta_stop >= eta_start");
        for (const double e : eta_list)
            if (e < 0.0) throw ConfigError("eta_list entries must be >= 0");
    }

    try {
        ModelParams p = params();
        p.validate();
        const Grid g = grid();
        // the run must resolve its largest coupling and contain its window
        double eta_top = eta;
        if (sweep_like) {
            const auto etas = sweep_etas();
            if (!etas.empty()) eta_top = std::max(eta_top, etas.back());
        }
        p.eta = eta_top;
        check_resolution(g, p);
        check_containment(g, p, e_max * omega);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

namespace {

template <class T>
void read_key(const nlohmann::ordered_json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

} // namespace

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["omega"] = omega;
    j["gamma0"] = gamma0;
    j["phi"] = phi;
    j["eta"] = eta;
    j["branch"] = branch;
    j["mode"] = mode;
    j["x_max"] = x_max;
    j["n_points"] = n_points;
    j["eta_start"] = eta_start;
    j["eta_stop"] = eta_stop;
    j["eta_step"] = eta_step;
    j["eta_list"] = eta_list;
    j["e_min"] = e_min;
    j["e_max"] = e_max;
    j["n_eta"] = n_eta;
    j["n_energy"] = n_energy;
    j["ridge_threshold"] = ridge_threshold;
    j["modes"] = modes;
    j["out"] = out;
    j["formats"] = formats;
    j["seed"] = seed;
    j["fock_n_max"] = fock_n_max;
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::ordered_json& j) {
    static const std::set<std::string> known = {
        "omega",   "gamma0",   "phi",      "eta",      "branch",   "mode",
        "x_max",   "n_points", "eta_start", "eta_stop", "eta_step", "eta_list",
        "e_min",   "e_max",    "n_eta",    "n_energy", "ridge_threshold",
        "modes",   "out",      "formats",  "seed",     "fock_n_max"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config key \"" + key + "\"");

    RunConfig c;
    try {
        read_key(j, "omega", c.omega);
        read_key(j, "gamma0", c.gamma0);
        read_key(j, "phi", c.phi);
        read_key(j, "eta", c.eta);
        read_key(j, "branch", c.branch);
        read_key(j, "mode", c.mode);
        read_key(j, "x_max", c.x_max);
        read_key(j, "n_points", c.n_points);
        read_key(j, "eta_start", c.eta_start);
        read_key(j, "eta_stop", c.eta_stop);
        read_key(j, "eta_step", c.eta_step);
        read_key(j, "eta_list", c.eta_list);
        read_key(j, "e_min", c.e_min);
        read_key(j, "e_max", c.e_max);
        read_key(j, "n_eta", c.n_eta);
        read_key(j, "n_energy", c.n_energy);
        read_key(j, "ridge_threshold", c.ridge_threshold);
        read_key(j, "modes", c.modes);
        read_key(j, "out", c.out);
        read_key(j, "formats", c.formats);
        read_key(j, "seed", c.seed);
        read_key(j, "fock_n_max", c.fock_n_max);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config value: ") + e.what());
    }
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

} // namespace ovib::cli
