#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ovib/fd_solver.hpp"
#include "ovib/quasiclassics.hpp"

namespace ovib::analysis {

struct ModeReport {
    std::size_t index = 0;
    ComplexEnergy energy{};
    double centroid = 0.0;             // <x>, length units of sqrt(2) u0
    double spread = 0.0;               // sigma_x
    double participation_ratio = 0.0;  // 1 / (h sum |psi|^4)
    double peak = 0.0;                 // density maximum location
    bool localized = false;
    std::optional<std::size_t> pair_id; // partner mode index
    bool pt_broken = false;
};

struct ClassifiedSpectrum {
    std::vector<ModeReport> reports;
    // In hermitian mode, near-degenerate mirror pairs are rotated into the
    // maximally localized basis here (the solver itself returns parity-pure
    // states whose centroids vanish); full-mode vectors pass through.
    fd::SpectrumResult spectrum;
};

ClassifiedSpectrum classify_spectrum(fd::SpectrumResult s, const ModelParams& p);

inline std::vector<ModeReport> classify_modes(const fd::SpectrumResult& s, const ModelParams& p) {
    return classify_spectrum(s, p).reports;
}

// Classify the k lowest modes of the assembled matrix. The solve is padded by
// a few extra eigenpairs so a conjugate pair straddling the window boundary
// is still paired, then the result is trimmed back to k.
ClassifiedSpectrum classify_window(const fd::HamiltonianMatrix& h, std::size_t k,
                                   const ModelParams& p);

// ------------------------------------------------------------- PT breaking

struct BrokenPair {
    std::size_t fast = 0; // member with the more negative Im E
    std::size_t slow = 0;
    double im_split = 0.0;         // Im(E_slow + i gamma0) - Im(E_fast + i gamma0) >= 0
    double mirror_deviation = 0.0; // max_i | |psi_fast(x_i)| - |psi_slow(-x_i)| |
    double centroid_fast = 0.0;
    double centroid_slow = 0.0;
};

struct PtReport {
    double tol_im = 0.0;
    std::vector<BrokenPair> broken;
    double worst_unbroken_im = 0.0;   // max |Im(E + i gamma0)| among unbroken states
    double worst_unbroken_asym = 0.0; // max | |psi(x)| - |psi(-x)| | among unbroken states
};

// Default tol_im = 1e-4 gamma0 separates truncation noise from genuine breaking
// at desk-scale grids.
double default_pt_tolerance(const ModelParams& p);

// Removes the uniform loss (shift +i gamma0), pairs conjugate eigenvalues, and
// checks the mirror relation of every broken pair. Throws
// UnpairedComplexEigenvalue when a complex-shifted eigenvalue has no conjugate
// partner within 1e-6 omega, and runtime_error when a broken pair violates the
// mirror relation beyond 1e-3.
PtReport detect_pt_breaking(const fd::SpectrumResult& s, const ModelParams& p, double tol_im);

// ------------------------------------------------------------------- sweeps

struct SweepPoint {
    double eta = 0.0;
    bool failed = false;
    std::string error;
    std::vector<ComplexEnergy> energies;
    std::vector<ModeReport> reports;
};

struct PairSample {
    double eta = 0.0;
    double re_energy = 0.0;    // pair mean
    double gap = 0.0;          // |Re E_b - Re E_a|
    double abs_centroid = 0.0; // |<x>| of the localized rotation
    double abs_peak = 0.0;     // density maximum of the localized rotation
    std::size_t mode_a = 0, mode_b = 0;
};

struct PairTrack {
    std::size_t id = 0;
    int well = 0; // index n of the hosting minima pair
    int slot = 0; // rank by energy among the well's pairs
    double first_eta = 0.0;
    double threshold_eta = 0.0; // analytic appearance threshold eta_n of the well
    std::vector<PairSample> samples;
};

struct SweepResult {
    ModelParams base;
    Grid grid;
    SolveMode mode = SolveMode::hermitian;
    std::size_t k = 0;
    std::vector<SweepPoint> points;
    std::vector<PairTrack> tracks;          // localized pairs, continued across eta
    qc::ThresholdTable threshold_reference; // quasiclassical annotations
};

// Pinch gate for pair tracking across a sweep. Mode reports keep the strict
// 0.1 omega pairing; a descending doublet is trackable well before its
// tunneling splitting shrinks to that level, so tracks form once the gap
// drops below half the ladder spacing and the rotated pair is localized.
inline double track_pinch_gate(const ModelParams& p) { return 0.5 * p.omega; }

// Solves and classifies per eta (sorted list required); per-eta failures are
// recorded and skipped, not fatal.
SweepResult sweep_eta(const std::vector<double>& eta_list, const ModelParams& p, const Grid& grid,
                      SolveMode mode, std::size_t k);

// -------------------------------------------------------------- track law

struct TrackFit {
    std::size_t track_id = 0;
    int well = 0;
    double coeff_inv_eta2 = 0.0; // a in E = a / eta^2 + b
    double offset = 0.0;         // b
    double rms_residual = 0.0;
    double mean_energy = 0.0;
    double mean_abs_dev_vs_estimate = 0.0; // vs localized_energy(well, eta)
    std::size_t points = 0;
};

// Fit one track, optionally restricted to an eta window; throws
// InsufficientTrack when fewer than 5 samples are available.
TrackFit fit_track(const SweepResult& sweep, std::size_t track_id,
                   double eta_min = -std::numeric_limits<double>::infinity(),
                   double eta_max = std::numeric_limits<double>::infinity());

// Fits for every track long enough to be fit.
std::vector<TrackFit> localized_energy_track(const SweepResult& sweep);

} // namespace ovib::analysis
