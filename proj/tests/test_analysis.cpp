#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "ovib/analysis.hpp"
#include "ovib/errors.hpp"

using namespace ovib;

namespace {

ModelParams reference(double eta = 0.0, double gamma0 = 4.0) {
    ModelParams p;
    p.gamma0 = gamma0;
    p.eta = eta;
    return p;
}

analysis::ClassifiedSpectrum classify_at(double eta, SolveMode mode, std::size_t k,
                                         double gamma0 = 4.0) {
    const ModelParams p = reference(eta, gamma0);
    const auto h = fd::build_hamiltonian(Grid::reference(), p, mode);
    return analysis::classify_spectrum(fd::solve_spectrum(h, k), p);
}

} // namespace

TEST_CASE("free oscillator: everything delocalized and centred") {
    const auto cls = classify_at(0.0, SolveMode::hermitian, 10, 0.0);
    for (const auto& r : cls.reports) {
        CHECK(!r.localized);
        CHECK(std::abs(r.centroid) < 1e-6);
        CHECK(r.participation_ratio > 1.0);
        CHECK(!r.pt_broken);
    }
}

TEST_CASE("eta = 2: exactly two localized near-degenerate pairs below 10 omega") {
    const auto cls = classify_at(2.0, SolveMode::hermitian, 20);
    struct Pair {
        double e_mean, c_abs, peak_abs;
    };
    std::vector<Pair> pairs;
    for (const auto& r : cls.reports) {
        if (!r.pair_id || r.index > *r.pair_id || !r.localized) continue;
        const auto& q = cls.reports[*r.pair_id];
        if (!q.localized) continue;
        const double mean = 0.5 * (r.energy.real() + q.energy.real());
        if (mean > 10.0) continue;
        // mirror partners
        CHECK(r.centroid * q.centroid < 0.0);
        pairs.push_back({mean, 0.5 * (std::abs(r.centroid) + std::abs(q.centroid)),
                         0.5 * (std::abs(r.peak) + std::abs(q.peak))});
    }
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].e_mean > -1.5);
    CHECK(pairs[0].e_mean < -0.5);
    CHECK(pairs[0].c_abs == doctest::Approx(1.5).epsilon(0.2));
    CHECK(pairs[0].peak_abs == doctest::Approx(1.5).epsilon(0.2));
    CHECK(pairs[1].e_mean > 7.0);
    CHECK(pairs[1].e_mean < 9.0);
    CHECK(pairs[1].peak_abs == doctest::Approx(4.4).epsilon(0.1));
}

TEST_CASE("participation ratio stays within the physical bound") {
    const auto cls = classify_at(1.3, SolveMode::hermitian, 30);
    for (const auto& r : cls.reports) {
        CHECK(r.participation_ratio > 0.0);
        CHECK(r.participation_ratio <= 30.0); // x_max - x_min
    }
}

TEST_CASE("no PT breaking at eta = 0") {
    const ModelParams p = reference();
    const auto h = fd::build_hamiltonian(Grid::reference(), p, SolveMode::full);
    const auto s = fd::solve_spectrum(h, 15);
    const auto rep = analysis::detect_pt_breaking(s, p, analysis::default_pt_tolerance(p));
    CHECK(rep.broken.empty());
    CHECK(rep.worst_unbroken_im < 1e-8);
    CHECK(rep.worst_unbroken_asym < 1e-8);
}

TEST_CASE("PT breaking at eta = 2: mirror pairs with one-sided decay") {
    const ModelParams p = reference(2.0);
    const auto h = fd::build_hamiltonian(Grid::reference(), p, SolveMode::full);
    const auto s = fd::solve_spectrum(h, 20);
    const auto rep = analysis::detect_pt_breaking(s, p, analysis::default_pt_tolerance(p));
    REQUIRE(rep.broken.size() >= 2);
    for (const auto& b : rep.broken) {
        // the faster-decaying member lives at positive x
        CHECK(b.centroid_fast > 0.0);
        CHECK(b.centroid_slow < 0.0);
        CHECK(b.mirror_deviation < 1e-3);
        CHECK(b.im_split > 0.0);
        // conjugate partners: equal Re, opposite Im after the +i gamma0 shift
        const Complex fast = s.eigenvalues[b.fast] + Complex(0.0, p.gamma0);
        const Complex slow = s.eigenvalues[b.slow] + Complex(0.0, p.gamma0);
        CHECK(std::abs(fast.real() - slow.real()) < 1e-3);
        CHECK(std::abs(fast.imag() + slow.imag()) < 1e-8);
    }
}

TEST_CASE("a lone conjugate-pair member is reported as unpaired") {
    const ModelParams p = reference(2.0);
    const auto h = fd::build_hamiltonian(Grid::reference(), p, SolveMode::full);
    // k = 1 keeps one member of the lowest broken pair and drops its partner
    const auto s = fd::solve_spectrum(h, 1);
    CHECK_THROWS_AS(analysis::detect_pt_breaking(s, p, analysis::default_pt_tolerance(p)),
                    UnpairedComplexEigenvalue);
}

TEST_CASE("hermitian and full real parts track each other in the weak-loss regime") {
    // the anti-Hermitian part has amplitude gamma0, so the real-part shift is
    // perturbative only for gamma0 ~ omega and below the first threshold
    for (const double eta : {0.2, 0.4}) {
        const auto herm = classify_at(eta, SolveMode::hermitian, 10, 1.0);
        const auto full = classify_at(eta, SolveMode::full, 10, 1.0);
        for (std::size_t i = 0; i < 10; ++i)
            CHECK(std::abs(herm.spectrum.eigenvalues[i].real() -
                           full.spectrum.eigenvalues[i].real()) < 0.2);
    }
}

TEST_CASE("sweep: per-eta records, tracks and threshold annotations") {
    const ModelParams p = reference();
    std::vector<double> etas;
    for (double e = 1.3; e < 2.301; e += 0.05) etas.push_back(e);
    const auto sweep = analysis::sweep_eta(etas, p, Grid::reference(), SolveMode::hermitian, 45);
    REQUIRE(sweep.points.size() == etas.size());
    for (const auto& pt : sweep.points) CHECK(!pt.failed);

    // the well-1 doublet is born at 1.45 and persists through this window
    const analysis::PairTrack* well1 = nullptr;
    for (const auto& t : sweep.tracks)
        if (t.well == 1 && t.slot == 0) well1 = &t;
    REQUIRE(well1 != nullptr);
    CHECK(well1->first_eta == doctest::Approx(1.45).epsilon(1e-12));
    CHECK(well1->samples.size() == 18); // contiguous 1.45 .. 2.30
    CHECK(std::abs(well1->samples.front().re_energy - 15.11) < 0.1);
    CHECK(well1->threshold_eta == doctest::Approx(1.3955).epsilon(1e-3));
    CHECK(well1->first_eta - well1->threshold_eta < 0.1); // detected just past the threshold
    CHECK(sweep.threshold_reference.rows[1].eta_n == doctest::Approx(1.3955).epsilon(1e-3));
}

TEST_CASE("sweep survives a failing point and records the reason") {
    const ModelParams p = reference();
    // eta = 40 violates the oscillation-resolution bound on the reference grid
    const auto sweep =
        analysis::sweep_eta({1.0, 40.0}, p, Grid::reference(), SolveMode::hermitian, 5);
    REQUIRE(sweep.points.size() == 2);
    CHECK(!sweep.points[0].failed);
    CHECK(sweep.points[1].failed);
    CHECK(sweep.points[1].error.find("oscillation") != std::string::npos);
}

TEST_CASE("gamma0 = 0 sweep: levels flat in eta, no tracks") {
    const ModelParams p = reference(0.0, 0.0);
    const auto sweep =
        analysis::sweep_eta({0.0, 1.0, 2.0}, p, Grid::reference(), SolveMode::hermitian, 12);
    CHECK(sweep.tracks.empty());
    for (std::size_t i = 0; i < 12; ++i)
        for (const auto& pt : sweep.points)
            CHECK(std::abs(pt.energies[i].real() - sweep.points[0].energies[i].real()) < 1e-9);
}

TEST_CASE("occupied minima sets track the crossed thresholds") {
    // thresholds at 0.5, 1.3955, 1.8776, 2.2581, ...; a freshly opened well is
    // too shallow to bind, so right above a threshold its pair is not yet
    // detectable (at 2.5 the n = 3 well, opened at 2.26, still binds nothing)
    const ModelParams p = reference();
    const auto sweep =
        analysis::sweep_eta({0.75, 1.6, 2.5}, p, Grid::reference(), SolveMode::hermitian, 45);
    const auto wells_at = [&](double eta) {
        std::set<int> wells;
        for (const auto& t : sweep.tracks)
            for (const auto& s : t.samples)
                if (std::abs(s.eta - eta) < 1e-9) wells.insert(t.well);
        return wells.size();
    };
    CHECK(wells_at(0.75) == 1);
    CHECK(wells_at(1.6) == 2);
    CHECK(wells_at(2.5) == 3);
}

TEST_CASE("track fitting: 1/eta^2 law and the short-track guard") {
    const ModelParams p = reference();
    std::vector<double> etas;
    for (double e = 1.5; e < 4.001; e += 0.1) etas.push_back(e);
    const auto sweep = analysis::sweep_eta(etas, p, Grid::reference(), SolveMode::hermitian, 45);

    const analysis::PairTrack* well1 = nullptr;
    for (const auto& t : sweep.tracks)
        if (t.well == 1 && t.slot == 0) well1 = &t;
    REQUIRE(well1 != nullptr);
    const auto fit = analysis::fit_track(sweep, well1->id);
    CHECK(fit.points == etas.size());
    CHECK(fit.rms_residual / std::abs(fit.mean_energy) < 0.10);
    CHECK(fit.mean_abs_dev_vs_estimate < 1.5);
    CHECK(fit.coeff_inv_eta2 > 0.0);

    // restricting the window below 5 samples trips the guard
    CHECK_THROWS_AS(analysis::fit_track(sweep, well1->id, 1.5, 1.75), InsufficientTrack);
}
