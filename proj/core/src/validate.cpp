#include "ovib/validate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>

#include "ovib/analysis.hpp"
#include "ovib/errors.hpp"
#include "ovib/matching.hpp"
#include "ovib/quasiclassics.hpp"

namespace ovib::validate {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void run_check(ValidationReport& rep, const std::string& name,
               const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
        r.detail = body();
        r.pass = true;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = e.what();
    }
    rep.checks.push_back(std::move(r));
}

void expect(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(msg);
}

} // namespace

ValidationReport run_validation(const ValidationOptions& opt) {
    ValidationReport rep;

    ModelParams ref;
    ref.omega = opt.omega;
    ref.gamma0 = opt.gamma0;

    run_check(rep, "grid_invariants", [&] {
        ModelParams worst = ref;
        worst.eta = 6.0; // the figure-window sweep extent
        check_resolution(opt.grid, worst);
        check_containment(opt.grid, worst, 40.0 * ref.omega);
        return "spacing " + fmt(opt.grid.spacing()) + ", x_max " + fmt(opt.grid.x_max);
    });

    run_check(rep, "ladder_gamma0_zero", [&] {
        ModelParams p = ref;
        p.gamma0 = 0.0;
        const auto ev = fd::refined_eigenvalues(p, SolveMode::hermitian, 10, opt.grid);
        double worst = 0.0;
        for (std::size_t n = 0; n < ev.size(); ++n)
            worst = std::max(worst, std::abs(ev[n] - Complex(static_cast<double>(n) * p.omega, 0.0)));
        expect(worst < 1e-6 * p.omega, "oscillator ladder off by " + fmt(worst));
        return "max |E_n - n omega| = " + fmt(worst);
    });

    run_check(rep, "ladder_eta0_hermitian", [&] {
        const auto ev = fd::refined_eigenvalues(ref, SolveMode::hermitian, 10, opt.grid);
        double worst = 0.0;
        for (std::size_t n = 0; n < ev.size(); ++n)
            worst = std::max(worst,
                             std::abs(ev[n] - Complex(static_cast<double>(n) * ref.omega + ref.gamma0, 0.0)));
        expect(worst < 1e-6 * ref.omega, "shifted ladder off by " + fmt(worst));
        return "max deviation = " + fmt(worst);
    });

    run_check(rep, "ladder_eta0_full", [&] {
        const auto ev = fd::refined_eigenvalues(ref, SolveMode::full, 10, opt.grid);
        double worst = 0.0;
        for (std::size_t n = 0; n < ev.size(); ++n)
            worst = std::max(worst, std::abs(ev[n] - Complex(static_cast<double>(n) * ref.omega + ref.gamma0,
                                                             -ref.gamma0)));
        expect(worst < 1e-6 * ref.omega, "complex ladder off by " + fmt(worst));
        return "max deviation = " + fmt(worst);
    });

    run_check(rep, "potential_pt_property", [&] {
        ModelParams p = ref;
        p.eta = 2.0;
        double worst = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double x = -10.0 + 0.05 * i;
            worst = std::max(worst,
                             std::abs(potential_full(-x, p) - std::conj(potential_full(x, p))));
        }
        expect(worst < 1e-14 * (p.omega + p.gamma0), "PT defect " + fmt(worst));
        return "max |V(-x) - conj V(x)| = " + fmt(worst);
    });

    run_check(rep, "oracle_equivalence", [&] {
        const fock::FockConfig cfg{opt.fock_n_max};
        double worst = 0.0;
        std::string worst_at;
        for (const double gamma : {1.0, 4.0})
            for (const double eta : {0.0, 0.5, 1.0, 2.0, 3.0})
                for (const SolveMode mode : {SolveMode::hermitian, SolveMode::full}) {
                    ModelParams p = ref;
                    p.gamma0 = gamma;
                    p.eta = eta;
                    const auto fd_ev = fd::refined_eigenvalues(p, mode, 15, opt.grid);
                    const auto fk_ev = fock::fock_spectrum(p, cfg, mode);
                    const double dev = matched_deviation(fd_ev, fk_ev, 15, 20);
                    if (dev > worst) {
                        worst = dev;
                        worst_at = "(eta=" + fmt(eta) + ", gamma0=" + fmt(gamma) + ", " +
                                   mode_name(mode) + ")";
                    }
                }
        if (worst >= 1e-3 * ref.omega) {
            // distinguish truncation loss from a genuine disagreement
            std::string diag = "fd/fock disagree by " + fmt(worst) + " at " + worst_at;
            fock::FockConfig bigger{opt.fock_n_max + 50};
            ModelParams p = ref;
            p.eta = 3.0;
            const auto a = fock::fock_spectrum(p, fock::FockConfig{opt.fock_n_max}, SolveMode::full);
            const auto b = fock::fock_spectrum(p, bigger, SolveMode::full);
            double drift = 0.0;
            for (std::size_t n = 0; n < std::min<std::size_t>(15, std::min(a.size(), b.size())); ++n)
                drift = std::max(drift, std::abs(a[n] - b[n]));
            if (drift > 0.5e-3 * ref.omega)
                diag += "; fock truncation-limited (n_max -> n_max+50 shifts the spectrum by " +
                        fmt(drift) + ")";
            throw std::runtime_error(diag);
        }
        return "max |fd - fock| = " + fmt(worst) + " over the (eta, gamma0) lattice, both modes";
    });

    run_check(rep, "smode_decoupling", [&] {
        ModelParams p = ref;
        p.eta = 1.0;
        const auto r = fock::smode_decoupling_check(p, fock::FockConfig{20}, SolveMode::full, 1e-6);
        return "max deviation " + fmt(r.max_deviation) + " over " + std::to_string(r.compared) +
               " eigenvalues";
    });

    run_check(rep, "convergence_study", [&] {
        ModelParams p = ref;
        p.eta = 2.0;
        const auto study = fd::convergence_study(p, SolveMode::full, 30, opt.grid);
        std::size_t bad = 0;
        for (const auto& row : study.rows)
            if (!row.converged) ++bad;
        expect(bad == 0, std::to_string(bad) + " of 30 eigenvalues not converged to 1e-4 omega");
        return "all 30 lowest eigenvalues converged; worst Richardson error " +
               fmt(std::max_element(study.rows.begin(), study.rows.end(),
                                    [](const auto& a, const auto& b) {
                                        return a.richardson_error < b.richardson_error;
                                    })
                       ->richardson_error);
    });

    run_check(rep, "threshold_identities", [&] {
        const auto table = qc::thresholds(ref, 5);
        double worst_def = 0.0, worst_e = 0.0, worst_a = 0.0;
        for (const auto& row : table.rows) {
            const double defining =
                std::abs(ref.gamma0 * row.eta_n * row.eta_n * std::cos(row.a_n) - ref.omega) /
                ref.omega;
            worst_def = std::max(worst_def, defining);
            const double ebar = qc::localized_energy(row.n, row.eta_n, ref);
            worst_e = std::max(worst_e, std::abs(ebar - row.e_n) / row.e_n);
            if (row.n >= 1)
                worst_a = std::max(worst_a, std::abs(row.a_n - qc::tan_root_approx(row.n)));
        }
        expect(worst_def < 1e-12, "defining relation off by " + fmt(worst_def));
        expect(worst_e < 1e-9, "Ebar(eta_n) vs E_n off by " + fmt(worst_e));
        expect(worst_a < 2e-3, "A_n approximation off by " + fmt(worst_a));
        return "defining " + fmt(worst_def) + ", energies " + fmt(worst_e) + ", roots " + fmt(worst_a);
    });

    run_check(rep, "bs_phase_oscillator", [&] {
        ModelParams p = ref;
        p.gamma0 = 0.0;
        double worst = 0.0;
        for (const double e : {1.0, 5.5, 14.2, 27.0, 40.0})
            worst = std::max(worst, std::abs(qc::bs_phase(e, p) - (e / p.omega - 0.5)));
        expect(worst < 1e-6, "oscillator action off by " + fmt(worst));
        return "max |n(E) - (E - 1/2)| = " + fmt(worst);
    });

    run_check(rep, "pt_closure", [&] {
        ModelParams p = ref;
        p.eta = 2.0;
        const auto ev = fd::solve_eigenvalues(fd::build_hamiltonian(opt.grid, p, SolveMode::full));
        std::vector<Complex> shifted(40);
        for (std::size_t i = 0; i < 40; ++i) shifted[i] = ev[i] + Complex(0.0, p.gamma0);
        const double worst = conjugation_closure_defect(shifted);
        expect(worst < 1e-8 * p.omega, "conjugation closure defect " + fmt(worst));
        for (const auto& e : ev)
            expect(e.imag() <= 1e-10 && e.imag() >= -2.0 * p.gamma0 - 1e-10,
                   "Im E outside [-2 gamma0, 0]");
        return "closure defect " + fmt(worst) + " over the lowest 40 levels";
    });

    return rep;
}

} // namespace ovib::validate
