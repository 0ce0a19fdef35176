#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "ovib/model.hpp"

namespace ovib {

// Degeneracy-matched deviation between two complex spectra: greedy nearest
// pairing of the first `count` entries of a against a pool from b. Plain
// index-wise comparison is wrong for conjugate pairs whose real parts tie
// only up to rounding; a pool slightly larger than `count` absorbs ordering
// ambiguity at the comparison boundary.
inline double matched_deviation(const std::vector<ComplexEnergy>& a,
                                const std::vector<ComplexEnergy>& b, std::size_t count,
                                std::size_t pool = 0) {
    if (pool < count) pool = count;
    pool = std::min(pool, b.size());
    std::vector<bool> used(pool, false);
    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t at = pool;
        for (std::size_t j = 0; j < pool; ++j) {
            if (used[j]) continue;
            const double d = std::abs(a[i] - b[j]);
            if (d < best) {
                best = d;
                at = j;
            }
        }
        used[at] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

// Deviation of a spectrum from closure under complex conjugation.
inline double conjugation_closure_defect(const std::vector<ComplexEnergy>& a) {
    std::vector<ComplexEnergy> conj(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) conj[i] = std::conj(a[i]);
    return matched_deviation(a, conj, a.size());
}

} // namespace ovib
