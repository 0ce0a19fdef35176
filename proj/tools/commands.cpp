#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ovib/analysis.hpp"
#include "ovib/errors.hpp"
#include "ovib/fd_solver.hpp"
#include "ovib/quasiclassics.hpp"
#include "ovib/validate.hpp"

#include "emit.hpp"

namespace fs = std::filesystem;

namespace ovib::cli {

namespace {

void write_metadata(const RunConfig& cfg, const std::string& dir) {
    std::ofstream out(dir + "/run-metadata.json", std::ios::binary);
    out << cfg.to_json().dump(2) << "\n";
}

std::string prepare_output(const RunConfig& cfg) {
    fs::create_directories(cfg.out);
    return cfg.out;
}

// number of modes with Re E inside the energy window cap
std::size_t modes_in_window(const fd::HamiltonianMatrix& h, double e_cap) {
    const auto ev = fd::solve_eigenvalues(h);
    std::size_t k = 0;
    for (const auto& e : ev)
        if (e.real() <= e_cap) ++k;
    return std::clamp<std::size_t>(k, 1, ev.size());
}

long long pair_field(const std::optional<std::size_t>& p) {
    return p ? static_cast<long long>(*p) : -1LL;
}

void write_thresholds_csv(const std::string& path, const ModelParams& p, std::size_t n_max) {
    const auto table = qc::thresholds(p, n_max);
    CsvFile csv(path);
    csv.header("n,A_n,eta_n,E_n,approx_eta_n,approx_E_n");
    for (const auto& row : table.rows) {
        csv.field(row.n).field(row.a_n).field(row.eta_n).field(row.e_n / p.omega);
        if (row.n == 0) {
            csv.field("").field("");
        } else {
            csv.field(row.approx_eta_n).field(row.approx_e_n / p.omega);
        }
        csv.end_row();
    }
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

int cmd_spectrum(const RunConfig& cfg) {
    cfg.check(/*sweep_like=*/false);
    const ModelParams p = cfg.params();
    const Grid grid = cfg.grid();
    const SolveMode mode = cfg.solve_mode();

    analysis::ClassifiedSpectrum cls;
    try {
        const auto h = fd::build_hamiltonian(grid, p, mode, cfg.e_max * p.omega);
        const std::size_t k = modes_in_window(h, cfg.e_max * p.omega);
        cls = analysis::classify_window(h, k, p);
    } catch (const std::exception& e) {
        throw SolverError(std::string("spectrum solve: ") + e.what());
    }
    for (const auto i : cfg.modes)
        if (i >= cls.reports.size())
            throw ConfigError("modes: index " + std::to_string(i) + " beyond the " +
                              std::to_string(cls.reports.size()) + " modes in the energy window");

    const std::string dir = prepare_output(cfg);
    write_metadata(cfg, dir);

    if (cfg.wants("csv") || cfg.formats.empty()) {
        CsvFile ev(dir + "/eigenvalues.csv");
        ev.header("index,re_E_over_omega,im_E_over_omega,centroid,pr,localized,pair_id,pt_broken");
        for (const auto& r : cls.reports) {
            ev.field(r.index)
                .field(r.energy.real() / p.omega)
                .field(r.energy.imag() / p.omega)
                .field(r.centroid)
                .field(r.participation_ratio)
                .field(static_cast<int>(r.localized))
                .field(pair_field(r.pair_id))
                .field(static_cast<int>(r.pt_broken));
            ev.end_row();
        }

        std::vector<std::size_t> wanted = cfg.modes;
        if (wanted.empty())
            for (std::size_t i = 0; i < cls.reports.size(); ++i) wanted.push_back(i);
        std::string head = "x";
        for (const auto i : wanted) head += ",psi2_" + std::to_string(i);
        CsvFile vec(dir + "/eigenvectors.csv");
        vec.header(head);
        for (std::size_t gi = 0; gi < grid.n_points; ++gi) {
            vec.field(grid.x(gi));
            for (const auto i : wanted) vec.field(std::norm(cls.spectrum.eigenvectors[i][gi]));
            vec.end_row();
        }

        CsvFile pot(dir + "/potential.csv");
        pot.header("x,re_V,im_V");
        for (std::size_t gi = 0; gi < grid.n_points; ++gi) {
            const Complex v = potential_full(grid.x(gi), p);
            pot.field(grid.x(gi)).field(v.real() / p.omega).field(v.imag() / p.omega);
            pot.end_row();
        }
    }

    if (cfg.wants("json")) {
        nlohmann::ordered_json j;
        j["mode"] = cfg.mode;
        j["eta"] = p.eta;
        auto& arr = j["modes"];
        for (const auto& r : cls.reports) {
            nlohmann::ordered_json m;
            m["index"] = r.index;
            m["re_E_over_omega"] = r.energy.real() / p.omega;
            m["im_E_over_omega"] = r.energy.imag() / p.omega;
            m["centroid"] = r.centroid;
            m["spread"] = r.spread;
            m["pr"] = r.participation_ratio;
            m["localized"] = r.localized;
            m["pair_id"] = pair_field(r.pair_id);
            m["pt_broken"] = r.pt_broken;
            arr.push_back(m);
        }
        std::ofstream out(dir + "/spectrum.json", std::ios::binary);
        out << j.dump(2) << "\n";
    }

    if (cfg.wants("svg")) {
        const double x_lo = -grid.x_max, x_hi = grid.x_max;
        SvgPlot plot(x_lo, x_hi, cfg.e_min, cfg.e_max);
        std::vector<std::pair<double, double>> vcurve;
        for (std::size_t gi = 0; gi < grid.n_points; gi += 4)
            vcurve.push_back({grid.x(gi), potential_hermitian(grid.x(gi), p) / p.omega});
        plot.polyline(vcurve, "green");
        for (const auto& r : cls.reports) {
            const double e = r.energy.real() / p.omega;
            if (e < cfg.e_min || e > cfg.e_max) continue;
            plot.polyline({{x_lo, e}, {x_hi, e}}, "#cccccc", 0.5);
            std::vector<std::pair<double, double>> psi;
            for (std::size_t gi = 0; gi < grid.n_points; gi += 4)
                psi.push_back({grid.x(gi),
                               e + 3.0 * std::norm(cls.spectrum.eigenvectors[r.index][gi])});
            plot.polyline(psi, r.localized ? "red" : "black", r.localized ? 1.2 : 0.6);
        }
        plot.axes("x_d", "E / omega");
        plot.save(dir + "/spectrum.svg");
    }
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    cfg.check(/*sweep_like=*/true);
    const ModelParams p = cfg.params();
    const Grid grid = cfg.grid();
    const SolveMode mode = cfg.solve_mode();
    const auto etas = cfg.sweep_etas();
    if (etas.empty()) throw ConfigError("sweep: empty eta list");

    analysis::SweepResult sweep;
    try {
        ModelParams lo = p, hi = p;
        lo.eta = etas.front();
        hi.eta = etas.back();
        const std::size_t k =
            std::max(modes_in_window(fd::build_hamiltonian(grid, lo, mode), cfg.e_max * p.omega),
                     modes_in_window(fd::build_hamiltonian(grid, hi, mode), cfg.e_max * p.omega));
        sweep = analysis::sweep_eta(etas, p, grid, mode, k);
    } catch (const std::exception& e) {
        throw SolverError(std::string("sweep solve: ") + e.what());
    }

    const std::string dir = prepare_output(cfg);
    write_metadata(cfg, dir);

    CsvFile sw(dir + "/sweep.csv");
    sw.header("eta,mode_index,re_E,im_E,centroid,pr,localized,pair_id");
    for (const auto& pt : sweep.points) {
        if (pt.failed) continue;
        for (const auto& r : pt.reports) {
            sw.field(pt.eta)
                .field(r.energy.real() / p.omega)
                .field(r.energy.imag() / p.omega)
                .field(r.centroid)
                .field(r.participation_ratio)
                .field(static_cast<int>(r.localized))
                .field(pair_field(r.pair_id));
            sw.end_row();
        }
    }

    CsvFile fail(dir + "/failures.csv");
    fail.header("eta,stage,message");
    for (const auto& pt : sweep.points)
        if (pt.failed) {
            fail.field(pt.eta).field("solve").field(csv_quote(pt.error));
            fail.end_row();
        }

    if (p.gamma0 > 0.0) write_thresholds_csv(dir + "/thresholds.csv", p, 8);

    CsvFile tr(dir + "/tracks.csv");
    tr.header("pair_id,n,eta,re_E,ebar_n");
    for (const auto& t : sweep.tracks)
        for (const auto& s : t.samples) {
            tr.field(t.id).field(t.well).field(s.eta).field(s.re_energy / p.omega);
            ModelParams pe = p;
            try {
                tr.field(qc::localized_energy(static_cast<std::size_t>(t.well), s.eta, pe) / p.omega);
            } catch (const std::exception&) {
                tr.field("");
            }
            tr.end_row();
        }

    if (cfg.wants("svg")) {
        SvgPlot plot(etas.front(), etas.back(), cfg.e_min, cfg.e_max);
        for (const auto& pt : sweep.points) {
            if (pt.failed) continue;
            for (const auto& r : pt.reports) {
                const double e = r.energy.real() / p.omega;
                if (e >= cfg.e_min && e <= cfg.e_max) plot.circle(pt.eta, e, 0.8, "#888888");
            }
        }
        for (const auto& t : sweep.tracks) {
            std::vector<std::pair<double, double>> line;
            for (const auto& s : t.samples) line.push_back({s.eta, s.re_energy / p.omega});
            plot.polyline(line, "red", 1.4);
        }
        if (p.gamma0 > 0.0) {
            for (const auto& row : qc::thresholds(p, 6).rows) {
                if (row.eta_n > etas.back()) continue;
                std::vector<std::pair<double, double>> curve;
                for (double e = row.eta_n; e <= etas.back() + 1e-9; e += 0.02) {
                    try {
                        curve.push_back({e, qc::localized_energy(row.n, e, p) / p.omega});
                    } catch (const std::exception&) {
                    }
                }
                plot.polyline(curve, "blue", 1.0);
            }
        }
        plot.axes("eta", "Re E / omega");
        plot.save(dir + "/sweep.svg");
    }
    return 0;
}

int cmd_phasemap(const RunConfig& cfg) {
    cfg.check(/*sweep_like=*/true);
    const ModelParams p = cfg.params();
    if (cfg.n_eta < 2 || cfg.n_energy < 2) throw ConfigError("phasemap: lattice needs >= 2x2 points");

    qc::PhaseMap map;
    try {
        std::vector<double> eta_axis(cfg.n_eta), energy_axis(cfg.n_energy);
        for (std::size_t i = 0; i < cfg.n_eta; ++i)
            eta_axis[i] = cfg.eta_start +
                          (cfg.eta_stop - cfg.eta_start) * static_cast<double>(i) /
                              static_cast<double>(cfg.n_eta - 1);
        for (std::size_t j = 0; j < cfg.n_energy; ++j)
            energy_axis[j] = (cfg.e_min +
                              (cfg.e_max - cfg.e_min) * static_cast<double>(j) /
                                  static_cast<double>(cfg.n_energy - 1)) *
                             p.omega;
        qc::PhaseMapOptions opt;
        opt.ridge_threshold = cfg.ridge_threshold;
        map = qc::phase_map(std::move(eta_axis), std::move(energy_axis), p, opt);
    } catch (const std::exception& e) {
        throw SolverError(std::string("phasemap evaluation: ") + e.what());
    }

    const std::string dir = prepare_output(cfg);
    write_metadata(cfg, dir);

    CsvFile pm(dir + "/phasemap.csv");
    pm.header("eta,E,frac_n,masked");
    for (std::size_t i = 0; i < map.eta_axis.size(); ++i)
        for (std::size_t j = 0; j < map.energy_axis.size(); ++j) {
            pm.field(map.eta_axis[i])
                .field(map.energy_axis[j] / p.omega)
                .field(map.masked(i, j) ? 0.0 : map.value(i, j))
                .field(static_cast<int>(map.masked(i, j)));
            pm.end_row();
        }

    CsvFile rg(dir + "/ridges.csv");
    rg.header("eta,E,jump,component");
    for (const auto& r : map.ridges) {
        rg.field(r.eta).field(r.energy / p.omega).field(r.jump).field(r.component);
        rg.end_row();
    }

    if (cfg.wants("svg")) {
        SvgPlot plot(cfg.eta_start, cfg.eta_stop, cfg.e_min, cfg.e_max);
        const double de = (map.eta_axis.size() > 1 ? map.eta_axis[1] - map.eta_axis[0] : 0.01);
        const double dE =
            (map.energy_axis.size() > 1 ? (map.energy_axis[1] - map.energy_axis[0]) / p.omega : 0.1);
        for (std::size_t i = 0; i < map.eta_axis.size(); ++i)
            for (std::size_t j = 0; j < map.energy_axis.size(); ++j) {
                const double e = map.energy_axis[j] / p.omega;
                plot.cell(map.eta_axis[i] - 0.5 * de, map.eta_axis[i] + 0.5 * de, e - 0.5 * dE,
                          e + 0.5 * dE, map.masked(i, j) ? 1.0 : map.value(i, j));
            }
        plot.axes("eta", "E / omega");
        plot.save(dir + "/heatmap.svg");
    }
    return 0;
}

int cmd_thresholds(const RunConfig& cfg) {
    cfg.check(/*sweep_like=*/false);
    const ModelParams p = cfg.params();
    if (!(p.gamma0 > 0.0)) throw ConfigError("thresholds: gamma0 must be positive");

    const std::string dir = prepare_output(cfg);
    write_metadata(cfg, dir);
    write_thresholds_csv(dir + "/thresholds.csv", p, 8);

    const auto table = qc::thresholds(p, 8);
    std::printf("  n        A_n      eta_n    E_n/omega\n");
    for (const auto& row : table.rows)
        std::printf("%3zu %10.6f %10.6f %10.6f\n", row.n, row.a_n, row.eta_n, row.e_n / p.omega);
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    cfg.check(/*sweep_like=*/false);

    validate::ValidationOptions opt;
    opt.grid = cfg.grid();
    opt.fock_n_max = cfg.fock_n_max;
    opt.omega = cfg.omega;
    opt.gamma0 = cfg.gamma0;
    const auto report = validate::run_validation(opt);

    const std::string dir = prepare_output(cfg);
    write_metadata(cfg, dir);

    nlohmann::ordered_json j;
    auto& checks = j["checks"];
    for (const auto& c : report.checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        e["detail"] = c.detail;
        checks.push_back(e);
    }
    j["all_pass"] = report.all_pass();
    std::ofstream out(dir + "/validate.json", std::ios::binary);
    out << j.dump(2) << "\n";

    for (const auto& c : report.checks)
        std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    return report.all_pass() ? 0 : 1;
}

} // namespace ovib::cli
