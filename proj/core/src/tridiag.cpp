#include "ovib/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ovib/errors.hpp"

namespace ovib::tridiag {

namespace {

constexpr int kSweepCap = 80;

double mag(double x) { return std::abs(x); }
double mag(const Complex& z) { return std::abs(z); }

double pythag(double a, double b) { return std::hypot(a, b); }
Complex pythag(const Complex& a, const Complex& b) { return std::sqrt(a * a + b * b); }

// Orient r so that g + r does not cancel (Wilkinson shift denominator).
double orient(double r, double g) { return g >= 0.0 ? std::abs(r) : -std::abs(r); }
Complex orient(const Complex& r, const Complex& g) {
    return std::real(std::conj(g) * r) < 0.0 ? -r : r;
}

// Implicit-shift QL on (d, e); e[i] couples rows i and i+1. Eigenvalues are
// left in d, unsorted. Follows the classic EISPACK recurrence; the complex
// instantiation replaces Givens rotations by complex-orthogonal ones.
template <class T>
void ql_implicit(std::vector<T>& d, std::vector<T>& e) {
    const std::size_t n = d.size();
    if (n == 0) return;
    e.resize(n, T{});
    const double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t l = 0; l < n; ++l) {
        int sweeps = 0;
        for (;;) {
            std::size_t m = l;
            while (m + 1 < n && mag(e[m]) > eps * (mag(d[m]) + mag(d[m + 1]))) ++m;
            if (m == l) break;
            if (++sweeps > kSweepCap)
                throw ConvergenceFailure(l, "symql_eigenvalues: eigenvalue " + std::to_string(l) +
                                                " did not deflate within " + std::to_string(kSweepCap) +
                                                " sweeps");
            T g = (d[l + 1] - d[l]) / (e[l] * 2.0);
            T r = pythag(g, T(1.0));
            g = d[m] - d[l] + e[l] / (g + orient(r, g));
            T s = T(1.0), c = T(1.0), p = T{};
            bool bailed = false;
            for (std::size_t i = m; i-- > l;) {
                T f = s * e[i];
                T b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if (mag(r) == 0.0) {
                    // off-diagonal underflowed away; drop it and rescan
                    d[i + 1] -= p;
                    e[m] = T{};
                    bailed = true;
                    break;
                }
                if (mag(r) < 1e-13 * (mag(f) + mag(g))) {
                    // complex-orthogonal breakdown (f^2 + g^2 ~ 0); nudge the
                    // rotation away from the singular direction
                    r = T(1e-13 * (mag(f) + mag(g)));
                    e[i + 1] = r;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + c * b * 2.0;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (bailed) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = T{};
        }
    }
}

// splitmix64: deterministic start vectors for inverse iteration
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform_pm1(std::uint64_t& state) {
    return 2.0 * (static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53) - 1.0;
}

void fill_random(std::vector<double>& v, std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& x : v) x = uniform_pm1(s);
}
void fill_random(std::vector<Complex>& v, std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& z : v) {
        const double re = uniform_pm1(s);
        const double im = uniform_pm1(s);
        z = Complex(re, im);
    }
}

template <class T>
double norm2(const std::vector<T>& v) {
    double acc = 0.0;
    for (const auto& x : v) acc += std::norm(Complex(x));
    return std::sqrt(acc);
}

double dot_for_gs(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}
// unconjugated bilinear form: eigenvectors of a complex-symmetric matrix for
// distinct eigenvalues satisfy v^T w = 0
Complex dot_for_gs(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    Complex acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

template <class T>
void project_out(std::vector<T>& v, const std::vector<std::vector<T>>& basis) {
    for (const auto& w : basis) {
        const T ww = dot_for_gs(w, w);
        if (mag(ww) < 0.01) continue; // quasi-null direction, leave it alone
        const T coef = dot_for_gs(w, v) / ww;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= coef * w[i];
    }
}

// LU factorization of (A - lambda I) with partial pivoting, LAPACK gttrf
// layout: dl holds multipliers, d the pivots, du/du2 the two upper bands.
template <class T>
struct ShiftedLU {
    std::vector<T> dl, d, du, du2;
    std::vector<bool> swapped;

    ShiftedLU(const std::vector<T>& diag, const std::vector<T>& sub, T lambda, double pivot_floor) {
        const std::size_t n = diag.size();
        d.resize(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - lambda;
        dl.assign(sub.begin(), sub.end());
        du.assign(sub.begin(), sub.end());
        du2.assign(n >= 2 ? n - 2 : 0, T{});
        swapped.assign(n >= 1 ? n - 1 : 0, false);

        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (mag(d[i]) >= mag(dl[i])) {
                if (mag(d[i]) == 0.0) d[i] = T(pivot_floor);
                const T fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
                if (i + 2 < n) du2[i] = T{};
            } else {
                const T fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                const T tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - fact * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if (n > 0 && mag(d[n - 1]) == 0.0) d[n - 1] = T(pivot_floor);
    }

    void solve(std::vector<T>& b) const {
        const std::size_t n = d.size();
        if (n == 0) return;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const T tmp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tmp - dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if (n == 1) return;
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (std::size_t i = n - 2; i-- > 0;)
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
};

template <class T>
double residual_inf(const std::vector<T>& diag, const std::vector<T>& sub, T lambda,
                    const std::vector<T>& v) {
    const std::size_t n = diag.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        T r = (diag[i] - lambda) * v[i];
        if (i > 0) r += sub[i - 1] * v[i - 1];
        if (i + 1 < n) r += sub[i] * v[i + 1];
        worst = std::max(worst, mag(r));
    }
    return worst;
}

template <class T>
std::vector<T> inverse_iteration_impl(const std::vector<T>& diag, const std::vector<T>& sub,
                                      T lambda, std::uint64_t seed,
                                      const std::vector<std::vector<T>>& cluster,
                                      std::size_t index_label) {
    const std::size_t n = diag.size();
    double scale = 0.0;
    for (const auto& x : diag) scale = std::max(scale, mag(x));
    for (const auto& x : sub) scale = std::max(scale, mag(x));
    const double eps = std::numeric_limits<double>::epsilon();
    const double pivot_floor = eps * std::max(scale, 1.0);
    const double accept = 1e-10 * std::max(scale, 1.0) * std::sqrt(static_cast<double>(n));

    const ShiftedLU<T> lu(diag, sub, lambda, pivot_floor);

    std::vector<T> v(n);
    for (int attempt = 0; attempt < 3; ++attempt) {
        fill_random(v, seed + 0x517cc1b727220a95ULL * static_cast<std::uint64_t>(attempt));
        project_out(v, cluster);
        double nv = norm2(v);
        if (nv == 0.0) continue;
        for (auto& x : v) x /= nv;

        for (int sweep = 0; sweep < 5; ++sweep) {
            lu.solve(v);
            project_out(v, cluster);
            nv = norm2(v);
            if (!(nv > 0.0) || !std::isfinite(nv)) break;
            for (auto& x : v) x /= nv;
            if (sweep >= 1 && residual_inf(diag, sub, lambda, v) <= accept) return v;
        }
        if (std::isfinite(norm2(v)) && residual_inf(diag, sub, lambda, v) <= 10.0 * accept)
            return v;
    }
    throw ConvergenceFailure(index_label,
                             "inverse_eigenvector: residual did not settle for eigenvalue index " +
                                 std::to_string(index_label));
}

} // namespace

std::vector<double> symql_eigenvalues(std::vector<double> diag, std::vector<double> sub) {
    ql_implicit(diag, sub);
    std::sort(diag.begin(), diag.end());
    return diag;
}

std::vector<Complex> symql_eigenvalues(std::vector<Complex> diag, std::vector<Complex> sub) {
    ql_implicit(diag, sub);
    std::sort(diag.begin(), diag.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return diag;
}

std::vector<double> inverse_eigenvector(const std::vector<double>& diag,
                                        const std::vector<double>& sub,
                                        double lambda, std::uint64_t seed,
                                        const std::vector<std::vector<double>>& cluster,
                                        std::size_t index_label) {
    return inverse_iteration_impl(diag, sub, lambda, seed, cluster, index_label);
}

std::vector<Complex> inverse_eigenvector(const std::vector<Complex>& diag,
                                         const std::vector<Complex>& sub,
                                         Complex lambda, std::uint64_t seed,
                                         const std::vector<std::vector<Complex>>& cluster,
                                         std::size_t index_label) {
    return inverse_iteration_impl(diag, sub, lambda, seed, cluster, index_label);
}

} // namespace ovib::tridiag
