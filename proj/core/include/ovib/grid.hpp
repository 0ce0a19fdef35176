#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ovib/errors.hpp"
#include "ovib/model.hpp"

namespace ovib {

// Uniform symmetric discretization of the relative coordinate, x in [-x_max, x_max].
struct Grid {
    double x_max = 15.0;
    std::size_t n_points = 3001;

    Grid() = default;
    Grid(double xmax, std::size_t n) : x_max(xmax), n_points(n) {
        if (!(xmax > 0.0) || n < 3)
            throw std::invalid_argument("Grid: need x_max > 0 and n_points >= 3");
    }

    double x_min() const noexcept { return -x_max; }
    double spacing() const noexcept { return 2.0 * x_max / static_cast<double>(n_points - 1); }
    double x(std::size_t i) const noexcept { return -x_max + spacing() * static_cast<double>(i); }

    std::vector<double> points() const {
        std::vector<double> xs(n_points);
        for (std::size_t i = 0; i < n_points; ++i) xs[i] = x(i);
        return xs;
    }

    // Default grid for the gamma0/omega = 4 studies: resolves the coupling
    // oscillation up to eta ~ 30 and contains eigenstates up to ~107 omega.
    static Grid reference() { return Grid(15.0, 3001); }

    // Same extent, halved spacing (n-1 doubling), for refinement studies.
    Grid refined() const { return Grid(x_max, 2 * (n_points - 1) + 1); }

    Grid enlarged(double extra) const {
        // keep the spacing, extend the walls
        const double h = spacing();
        const auto add = static_cast<std::size_t>(std::ceil(extra / h));
        return Grid(x_max + static_cast<double>(add) * h, n_points + 2 * add);
    }
};

// At least 20 points per period of the coupling oscillation cos(eta x).
inline void check_resolution(const Grid& g, const ModelParams& p) {
    const double bound = 2.0 * std::numbers::pi / (std::max(p.eta, 1.0) * 20.0);
    if (g.spacing() > bound)
        throw GridTooCoarse("grid spacing " + std::to_string(g.spacing()) +
                            " exceeds the oscillation-resolution bound " + std::to_string(bound) +
                            " at eta = " + std::to_string(p.eta));
}

// Soft-wall containment: the parabolic wall at x_max must exceed the largest
// requested eigenvalue by at least 5 omega.
inline void check_containment(const Grid& g, const ModelParams& p, double e_max_requested) {
    const double wall = 0.5 * p.omega * g.x_max * g.x_max;
    if (wall < e_max_requested + 5.0 * p.omega)
        throw DomainTooSmall("potential wall " + std::to_string(wall) +
                             " omega does not contain the requested window up to " +
                             std::to_string(e_max_requested) + " omega (need >= 5 omega headroom)");
}

} // namespace ovib
