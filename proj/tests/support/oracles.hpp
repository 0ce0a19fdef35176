#pragma once

// Brute-force reference routines for test assertions. These deliberately take
// different code paths from the library: fixed-order panel quadrature instead
// of adaptive, plain bisection instead of Newton, direct O(n^2)/O(n^3) sums.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Composite 7-point Gauss-Legendre over `panels` equal panels.
inline double gauss_panels(const std::function<double(double)>& f, double a, double b,
                           int panels) {
    static const double node[7] = {-0.949107912342758524526189684047851,
                                   -0.741531185599394439863864773280788,
                                   -0.405845151377397166906606412076961,
                                   0.0,
                                   0.405845151377397166906606412076961,
                                   0.741531185599394439863864773280788,
                                   0.949107912342758524526189684047851};
    static const double weight[7] = {0.129484966168869693270611432679082,
                                     0.279705391489276667901467771423780,
                                     0.381830050505118944950369775488975,
                                     0.417959183673469387755102040816327,
                                     0.381830050505118944950369775488975,
                                     0.279705391489276667901467771423780,
                                     0.129484966168869693270611432679082};
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        double acc = 0.0;
        for (int i = 0; i < 7; ++i) acc += weight[i] * f(c + 0.5 * h * node[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

// Bisection to absolute tolerance `tol`; requires a sign change on [a, b].
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-13) {
    double fa = f(a);
    double fb = f(b);
    if (fa * fb > 0.0) throw std::runtime_error("oracle::bisect: no sign change");
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Smallest positive root of f on (0, hi] by scanning then bisecting.
inline double smallest_positive_root(const std::function<double(double)>& f, double hi,
                                     double step) {
    double x_prev = step * 1e-6;
    double f_prev = f(x_prev);
    for (double x = step; x <= hi; x += step) {
        const double fx = f(x);
        if ((f_prev <= 0.0 && fx > 0.0) || (f_prev > 0.0 && fx <= 0.0))
            return bisect(f, x_prev, x);
        x_prev = x;
        f_prev = fx;
    }
    throw std::runtime_error("oracle::smallest_positive_root: no root found");
}

// Dense symmetric-tridiagonal matrix-vector product.
inline std::vector<std::complex<double>> tridiag_apply(
    const std::vector<std::complex<double>>& diag, const std::vector<std::complex<double>>& sub,
    const std::vector<std::complex<double>>& v) {
    const std::size_t n = diag.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = diag[i] * v[i];
        if (i > 0) out[i] += sub[i - 1] * v[i - 1];
        if (i + 1 < n) out[i] += sub[i] * v[i + 1];
    }
    return out;
}

} // namespace oracle
