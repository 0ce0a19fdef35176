#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ovib/model.hpp"

namespace ovib::qc {

// All positive roots of Re V(x) = E, ascending. Simple-root finder: sign-change
// scan with step min(0.01, pi/(50 eta)) refined by bisection to 1e-12.
std::vector<double> turning_point_roots(double energy, const ModelParams& p);

// The classical turning point with the smallest absolute value (the selection
// rule the phase map is built on); by parity the negative turning point is -x. Throws
// NoClassicalRegion for E below the potential minimum. For E at the minimum
// (within rounding) returns the minimum location.
double turning_point(double energy, const ModelParams& p);

// Outermost positive turning point: half-width of the convex hull of the
// classically allowed set.
double outermost_turning_point(double energy, const ModelParams& p);

// Quasiclassical phase n(E) = (1/pi) int sqrt(2 [E - ReV] / omega) dx - 1/2
// between -x and x, with the integrand clipped to zero where ReV > E.
// Adaptive quadrature on a sin-substituted integrand handles the square-root
// endpoints; absolute accuracy 1e-6.
double bs_phase(double energy, const ModelParams& p);

// ------------------------------------------------------------------ phase map

struct PhaseMapOptions {
    // An adjacent-cell wrapped jump of {n} above this flags a discontinuity
    // that is not a plain 1->0 wrap. Coarse survey maps want ~0.25; endpoint
    // hunting on fine lattices wants ~0.04.
    double ridge_threshold = 0.25;
};

struct RidgePoint {
    double eta = 0.0;
    double energy = 0.0;
    double jump = 0.0;  // wrapped jump magnitude across the edge
    int component = -1; // connected discontinuity line
};

struct PhaseMap {
    std::vector<double> eta_axis;
    std::vector<double> energy_axis;
    std::vector<double> values;     // frac(n), row-major [i_eta * n_energy + j]
    std::vector<std::uint8_t> mask; // 1 where no classical region exists
    std::vector<RidgePoint> ridges;

    double value(std::size_t i_eta, std::size_t j_energy) const noexcept {
        return values[i_eta * energy_axis.size() + j_energy];
    }
    bool masked(std::size_t i_eta, std::size_t j_energy) const noexcept {
        return mask[i_eta * energy_axis.size() + j_energy] != 0;
    }
};

// Fractional Bohr-Sommerfeld phase over an (eta, E) lattice; p supplies all
// parameters except eta, which is swept along eta_axis.
PhaseMap phase_map(std::vector<double> eta_axis, std::vector<double> energy_axis,
                   const ModelParams& p, const PhaseMapOptions& opt = {});

struct CutEndpoint {
    double eta = 0.0;
    double energy = 0.0;
    int component = -1;
    std::size_t points = 0; // size of the discontinuity line
};

// Smallest-eta end of each discontinuity line of the map; localized-state
// branches grow from these points. Detection is trend-corrected: an edge is a
// discontinuity when its wrapped step exceeds the median step of its
// neighbourhood by `excess_threshold`, which separates genuine branch cuts
// from steep smooth phase gradients.
std::vector<CutEndpoint> branch_cut_endpoints(const PhaseMap& map, double excess_threshold = 0.05);

// ------------------------------------------------------- analytic thresholds

// Non-negative solutions of tan A = A with cos A > 0, ascending; A_0 = 0.
std::vector<double> tan_roots(std::size_t count);

// Seed/approximation 2 pi n + pi/2 - 1/(2 pi n + pi/2), n >= 1.
double tan_root_approx(std::size_t n);

struct ThresholdRow {
    std::size_t n = 0;
    double a_n = 0.0;
    double eta_n = 0.0;
    double e_n = 0.0;
    double approx_eta_n = 0.0; // sqrt(2 pi omega (n + 1/4) / gamma0), n >= 1
    double approx_e_n = 0.0;   // pi gamma0 (n + 1/4), n >= 1
};

struct ThresholdTable {
    ModelParams params;
    std::vector<ThresholdRow> rows;
};

// Appearance thresholds eta_n and energies E_n of the localized branches,
// rows n = 0..n_max. Requires gamma0 > 0.
ThresholdTable thresholds(const ModelParams& p, std::size_t n_max);

// Inflection-point estimate of the n-th localized branch energy,
//   (omega / 2 eta^2) [(2 pi n + arccos(omega / (gamma0 eta^2)))^2 + 2],
// valid for eta >= eta_n (throws BelowThreshold otherwise).
double localized_energy(std::size_t n, double eta, const ModelParams& p);

// ------------------------------------------------------ potential morphology

enum class StationaryKind { minimum, maximum, inflection };

struct StationaryPoint {
    double x = 0.0;
    double value = 0.0; // Re V at x
    StationaryKind kind = StationaryKind::minimum;
};

// All stationary points of Re V with x >= 0, ascending, classified by the
// sign of d2(Re V)/dx2.
std::vector<StationaryPoint> minima_structure(const ModelParams& p);

// ------------------------------------------------- quantization predictions

struct IntegerCrossing {
    double energy = 0.0;
    int n = 0;
    bool at_cut = false; // assigned to a branch-cut jump rather than a smooth crossing
};

// Energies in (e_min, e_max] where bs_phase passes integer values. Integers
// swallowed by a branch-cut jump are reported at the cut energy with
// at_cut = true.
std::vector<IntegerCrossing> integer_crossings(const ModelParams& p, double e_min, double e_max);

} // namespace ovib::qc
