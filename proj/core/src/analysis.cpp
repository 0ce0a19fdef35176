#include "ovib/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ovib/errors.hpp"

namespace ovib::analysis {

namespace {

struct Moments {
    double centroid, spread, pr, peak;
};

Moments moments_of(const std::vector<Complex>& v, const Grid& g) {
    const double h = g.spacing();
    double m1 = 0.0, m2 = 0.0, p4 = 0.0, dmax = -1.0;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = std::norm(v[i]);
        const double x = g.x(i);
        m1 += x * d;
        m2 += x * x * d;
        p4 += d * d;
        if (d > dmax) {
            dmax = d;
            imax = i;
        }
    }
    m1 *= h;
    m2 *= h;
    p4 *= h;
    Moments m;
    m.centroid = m1;
    m.spread = std::sqrt(std::max(0.0, m2 - m1 * m1));
    m.pr = p4 > 0.0 ? 1.0 / p4 : 0.0;
    m.peak = g.x(imax);
    return m;
}

double cross_centroid(const std::vector<Complex>& a, const std::vector<Complex>& b, const Grid& g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += g.x(i) * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
    return acc * g.spacing();
}

double mirror_deviation(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    const std::size_t n = a.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(std::abs(a[i]) - std::abs(b[n - 1 - i])));
    return worst;
}

double max_amplitude(const std::vector<Complex>& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

// Rotate a near-degenerate doublet within its 2-space to extremize the
// centroid; for a mirror doublet the extremal combinations are the left/right
// localized states. Returns (negative-centroid member, positive-centroid member).
std::pair<std::vector<Complex>, std::vector<Complex>> localize_rotation(
    const std::vector<Complex>& a, const std::vector<Complex>& b, const Grid& g) {
    const double caa = moments_of(a, g).centroid;
    const double cbb = moments_of(b, g).centroid;
    const double cab = cross_centroid(a, b, g);
    const double theta = 0.5 * std::atan2(2.0 * cab, caa - cbb);
    const double c = std::cos(theta), s = std::sin(theta);
    const std::size_t n = a.size();
    std::vector<Complex> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = c * a[i] + s * b[i];
        v[i] = -s * a[i] + c * b[i];
    }
    if (moments_of(u, g).centroid > moments_of(v, g).centroid) std::swap(u, v);
    return {std::move(u), std::move(v)};
}

bool is_localized(double pr, double re_energy, const ModelParams& p) {
    try {
        const double half_hull = qc::outermost_turning_point(re_energy, p);
        return pr < half_hull;
    } catch (const NoClassicalRegion&) {
        return false;
    }
}

// hosting-minima index from the density peak: well n sits at eta*x near
// 2 pi n + 3 pi / 4 (between the inflection A_n and the cos minimum)
int well_index(double eta, double abs_peak) {
    const double a = eta * abs_peak;
    const int w =
        static_cast<int>(std::lround((a - 0.75 * std::numbers::pi) / (2.0 * std::numbers::pi)));
    return std::max(0, w);
}

} // namespace

double default_pt_tolerance(const ModelParams& p) { return 1e-4 * p.gamma0; }

PtReport detect_pt_breaking(const fd::SpectrumResult& s, const ModelParams& p, double tol_im) {
    if (s.mode != SolveMode::full)
        throw std::invalid_argument("detect_pt_breaking: needs a full-mode spectrum");

    const std::size_t k = s.size();
    PtReport rep;
    rep.tol_im = tol_im;

    std::vector<ComplexEnergy> shifted(k);
    for (std::size_t j = 0; j < k; ++j) shifted[j] = s.eigenvalues[j] + Complex(0.0, p.gamma0);

    std::vector<bool> used(k, false);
    for (std::size_t j = 0; j < k; ++j) {
        if (used[j]) continue;
        if (std::abs(shifted[j].imag()) <= tol_im) {
            used[j] = true;
            rep.worst_unbroken_im = std::max(rep.worst_unbroken_im, std::abs(shifted[j].imag()));
            rep.worst_unbroken_asym =
                std::max(rep.worst_unbroken_asym, mirror_deviation(s.eigenvectors[j], s.eigenvectors[j]));
            continue;
        }
        std::size_t best = k;
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t j2 = j + 1; j2 < k; ++j2) {
            if (used[j2]) continue;
            const double gap = std::abs(shifted[j] - std::conj(shifted[j2]));
            if (gap < best_gap) {
                best_gap = gap;
                best = j2;
            }
        }
        if (best == k || best_gap > 1e-6 * p.omega)
            throw UnpairedComplexEigenvalue(
                "detect_pt_breaking: shifted eigenvalue " + std::to_string(j) + " (Im = " +
                std::to_string(shifted[j].imag()) + ") has no conjugate partner within 1e-6 omega");
        used[j] = used[best] = true;

        BrokenPair bp;
        const bool j_fast = shifted[j].imag() < shifted[best].imag();
        bp.fast = j_fast ? j : best;
        bp.slow = j_fast ? best : j;
        bp.im_split = shifted[bp.slow].imag() - shifted[bp.fast].imag();
        bp.mirror_deviation = mirror_deviation(s.eigenvectors[bp.fast], s.eigenvectors[bp.slow]);
        bp.centroid_fast = moments_of(s.eigenvectors[bp.fast], s.grid).centroid;
        bp.centroid_slow = moments_of(s.eigenvectors[bp.slow], s.grid).centroid;
        if (bp.mirror_deviation > 1e-3)
            throw std::runtime_error("detect_pt_breaking: broken pair (" + std::to_string(bp.fast) +
                                     ", " + std::to_string(bp.slow) +
                                     ") violates the mirror relation: deviation " +
                                     std::to_string(bp.mirror_deviation));
        rep.broken.push_back(bp);
    }
    return rep;
}

ClassifiedSpectrum classify_spectrum(fd::SpectrumResult s, const ModelParams& p) {
    const std::size_t k = s.size();
    ClassifiedSpectrum out;
    out.reports.resize(k);

    std::vector<std::optional<std::size_t>> partner(k);
    std::vector<bool> broken_flag(k, false);

    if (s.mode == SolveMode::full) {
        const auto pt = detect_pt_breaking(s, p, default_pt_tolerance(p));
        for (const auto& bp : pt.broken) {
            partner[bp.fast] = bp.slow;
            partner[bp.slow] = bp.fast;
            broken_flag[bp.fast] = broken_flag[bp.slow] = true;
        }
    }

    for (std::size_t j = 0; j < k; ++j) {
        if (partner[j]) continue;
        std::size_t best = k;
        double best_gap = 0.1 * p.omega;
        for (std::size_t j2 = j + 1; j2 < k; ++j2) {
            if (partner[j2]) continue;
            const double gap = std::abs(s.eigenvalues[j2].real() - s.eigenvalues[j].real());
            if (gap < best_gap) {
                best_gap = gap;
                best = j2;
            }
        }
        if (best == k) continue;

        if (s.mode == SolveMode::hermitian) {
            auto [u, v] = localize_rotation(s.eigenvectors[j], s.eigenvectors[best], s.grid);
            const double before = std::max(std::abs(moments_of(s.eigenvectors[j], s.grid).centroid),
                                           std::abs(moments_of(s.eigenvectors[best], s.grid).centroid));
            const double after = std::max(std::abs(moments_of(u, s.grid).centroid),
                                          std::abs(moments_of(v, s.grid).centroid));
            const bool rotate = after > before + 0.3;
            const auto& left = rotate ? u : s.eigenvectors[j];
            const auto& right = rotate ? v : s.eigenvectors[best];
            if (mirror_deviation(left, right) < 0.05 * max_amplitude(left)) {
                partner[j] = best;
                partner[best] = j;
                if (rotate) {
                    s.eigenvectors[j] = std::move(u);
                    s.eigenvectors[best] = std::move(v);
                }
            }
        } else {
            if (mirror_deviation(s.eigenvectors[j], s.eigenvectors[best]) <
                0.05 * max_amplitude(s.eigenvectors[j])) {
                partner[j] = best;
                partner[best] = j;
            }
        }
    }

    for (std::size_t j = 0; j < k; ++j) {
        auto& r = out.reports[j];
        r.index = j;
        r.energy = s.eigenvalues[j];
        const auto m = moments_of(s.eigenvectors[j], s.grid);
        r.centroid = m.centroid;
        r.spread = m.spread;
        r.participation_ratio = m.pr;
        r.peak = m.peak;
        r.pair_id = partner[j];
        r.pt_broken = broken_flag[j];
        r.localized = is_localized(m.pr, s.eigenvalues[j].real(), p);
    }
    out.spectrum = std::move(s);
    return out;
}

ClassifiedSpectrum classify_window(const fd::HamiltonianMatrix& h, std::size_t k,
                                   const ModelParams& p) {
    std::size_t padded = std::min(h.dimension(), k + 2);
    if (h.mode == SolveMode::full && padded < h.dimension()) {
        // conjugate-pair members are index-adjacent, so ending the solve on an
        // unbroken (real-shifted) eigenvalue guarantees no pair straddles it
        const auto all = fd::solve_eigenvalues(h);
        const double tol = default_pt_tolerance(p);
        while (padded < h.dimension() && padded < k + 32 &&
               std::abs(all[padded - 1].imag() + p.gamma0) > tol)
            ++padded;
    }
    auto cls = classify_spectrum(fd::solve_spectrum(h, padded), p);
    cls.spectrum.eigenvalues.resize(k);
    cls.spectrum.eigenvectors.resize(k);
    cls.reports.resize(k);
    for (auto& r : cls.reports)
        if (r.pair_id && *r.pair_id >= k) r.pair_id.reset();
    return cls;
}

namespace {

struct TrackCandidate {
    int well;
    double e_mean, gap, c_abs, peak_abs;
    std::size_t a, b;
};

// Doublets a sweep can follow: adjacent levels pinched below the gate whose
// localized rotation is mirror-clean, off-centre and bound.
std::vector<TrackCandidate> find_track_pairs(const fd::SpectrumResult& s,
                                             const std::vector<ModeReport>& reports,
                                             const ModelParams& p) {
    std::vector<TrackCandidate> found;
    const double gate = track_pinch_gate(p);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double gap = s.eigenvalues[i + 1].real() - s.eigenvalues[i].real();
        if (gap >= gate) continue;

        double c_abs, peak_abs, pr;
        if (s.mode == SolveMode::hermitian) {
            auto [u, v] = localize_rotation(s.eigenvectors[i], s.eigenvectors[i + 1], s.grid);
            if (mirror_deviation(u, v) > 0.05 * max_amplitude(u)) continue;
            const auto m = moments_of(v, s.grid);
            c_abs = std::abs(m.centroid);
            peak_abs = std::abs(m.peak);
            pr = m.pr;
        } else {
            // broken pairs come localized as solved; skip unbroken pinches
            if (!reports[i].pt_broken || reports[i].pair_id != i + 1) continue;
            c_abs = 0.5 * (std::abs(reports[i].centroid) + std::abs(reports[i + 1].centroid));
            peak_abs = 0.5 * (std::abs(reports[i].peak) + std::abs(reports[i + 1].peak));
            pr = 0.5 * (reports[i].participation_ratio + reports[i + 1].participation_ratio);
        }
        if (c_abs < 0.5) continue; // centred pinch, not a side-well doublet
        const double e_mean = 0.5 * (s.eigenvalues[i].real() + s.eigenvalues[i + 1].real());
        if (!is_localized(pr, e_mean, p)) continue;

        TrackCandidate tc;
        tc.well = well_index(p.eta, peak_abs);
        tc.e_mean = e_mean;
        tc.gap = gap;
        tc.c_abs = c_abs;
        tc.peak_abs = peak_abs;
        tc.a = i;
        tc.b = i + 1;
        found.push_back(tc);
    }
    return found;
}

} // namespace

SweepResult sweep_eta(const std::vector<double>& eta_list, const ModelParams& p, const Grid& grid,
                      SolveMode mode, std::size_t k) {
    if (!std::is_sorted(eta_list.begin(), eta_list.end()))
        throw std::invalid_argument("sweep_eta: eta_list must be sorted ascending");

    SweepResult sweep;
    sweep.base = p;
    sweep.grid = grid;
    sweep.mode = mode;
    sweep.k = k;
    if (p.gamma0 > 0.0) sweep.threshold_reference = qc::thresholds(p, 6);

    std::size_t next_track = 0;
    for (const double eta : eta_list) {
        SweepPoint point;
        point.eta = eta;
        ModelParams pe = p;
        pe.eta = eta;

        std::vector<TrackCandidate> found;
        try {
            const auto h = fd::build_hamiltonian(grid, pe, mode);
            auto cls = classify_window(h, std::min(k, h.dimension()), pe);
            found = find_track_pairs(cls.spectrum, cls.reports, pe);
            point.energies = cls.spectrum.eigenvalues;
            point.reports = std::move(cls.reports);
        } catch (const std::exception& e) {
            point.failed = true;
            point.error = e.what();
            sweep.points.push_back(std::move(point));
            continue;
        }

        std::sort(found.begin(), found.end(), [](const TrackCandidate& x, const TrackCandidate& y) {
            if (x.well != y.well) return x.well < y.well;
            return x.e_mean < y.e_mean;
        });
        int cur_well = -1, slot = 0;
        for (const auto& f : found) {
            slot = (f.well == cur_well) ? slot + 1 : 0;
            cur_well = f.well;
            PairTrack* track = nullptr;
            for (auto& t : sweep.tracks)
                if (t.well == f.well && t.slot == slot) track = &t;
            if (track == nullptr) {
                PairTrack t;
                t.id = next_track++;
                t.well = f.well;
                t.slot = slot;
                t.first_eta = eta;
                if (const auto& rows = sweep.threshold_reference.rows;
                    f.well >= 0 && static_cast<std::size_t>(f.well) < rows.size())
                    t.threshold_eta = rows[static_cast<std::size_t>(f.well)].eta_n;
                sweep.tracks.push_back(std::move(t));
                track = &sweep.tracks.back();
            }
            track->samples.push_back({eta, f.e_mean, f.gap, f.c_abs, f.peak_abs, f.a, f.b});
        }
        sweep.points.push_back(std::move(point));
    }
    std::sort(sweep.tracks.begin(), sweep.tracks.end(),
              [](const PairTrack& a, const PairTrack& b) { return a.id < b.id; });
    return sweep;
}

TrackFit fit_track(const SweepResult& sweep, std::size_t track_id, double eta_min, double eta_max) {
    const PairTrack* track = nullptr;
    for (const auto& t : sweep.tracks)
        if (t.id == track_id) track = &t;
    if (track == nullptr) throw std::invalid_argument("fit_track: unknown track id");

    std::vector<PairSample> samples;
    for (const auto& s : track->samples)
        if (s.eta >= eta_min && s.eta <= eta_max) samples.push_back(s);
    if (samples.size() < 5)
        throw InsufficientTrack("fit_track: track " + std::to_string(track_id) + " has only " +
                                std::to_string(samples.size()) + " sweep points (need 5)");

    // least squares for E = a / eta^2 + b
    double suu = 0.0, su = 0.0, sue = 0.0, se = 0.0;
    const auto n = static_cast<double>(samples.size());
    for (const auto& s : samples) {
        const double u = 1.0 / (s.eta * s.eta);
        suu += u * u;
        su += u;
        sue += u * s.re_energy;
        se += s.re_energy;
    }
    const double det = suu * n - su * su;
    const double a = (sue * n - su * se) / det;
    const double b = (suu * se - su * sue) / det;

    TrackFit fit;
    fit.track_id = track_id;
    fit.well = track->well;
    fit.coeff_inv_eta2 = a;
    fit.offset = b;
    fit.points = samples.size();

    double ss = 0.0, dev = 0.0;
    std::size_t compared = 0;
    for (const auto& s : samples) {
        const double model = a / (s.eta * s.eta) + b;
        ss += (s.re_energy - model) * (s.re_energy - model);
        fit.mean_energy += s.re_energy;
        try {
            dev += std::abs(s.re_energy -
                            qc::localized_energy(static_cast<std::size_t>(track->well), s.eta, sweep.base));
            ++compared;
        } catch (const BelowThreshold&) {
            // sample below the analytic threshold, nothing to compare against
        }
    }
    fit.mean_energy /= n;
    fit.rms_residual = std::sqrt(ss / n);
    fit.mean_abs_dev_vs_estimate = compared > 0 ? dev / static_cast<double>(compared) : 0.0;
    return fit;
}

std::vector<TrackFit> localized_energy_track(const SweepResult& sweep) {
    std::vector<TrackFit> fits;
    for (const auto& t : sweep.tracks)
        if (t.samples.size() >= 5) fits.push_back(fit_track(sweep, t.id));
    return fits;
}

} // namespace ovib::analysis
