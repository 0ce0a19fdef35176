#include "ovib/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ovib/errors.hpp"
#include "ovib/tridiag.hpp"

namespace ovib::fd {

namespace {

double matrix_scale(const HamiltonianMatrix& h) {
    double s = 2.0 * std::abs(h.off_diagonal);
    for (const auto& d : h.diagonal) s = std::max(s, std::abs(d));
    return s;
}

std::vector<double> real_diagonal(const HamiltonianMatrix& h) {
    std::vector<double> d(h.dimension());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = h.diagonal[i].real();
    return d;
}

// Reorder `vals` so vals[i] is the nearest available match of ref[i]. Sorted
// complex spectra can swap conjugate-pair members between grids when their
// real parts tie only up to rounding; Richardson chains need a stable
// identification.
std::vector<ComplexEnergy> aligned_to(const std::vector<ComplexEnergy>& ref,
                                      const std::vector<ComplexEnergy>& vals, std::size_t count) {
    std::vector<ComplexEnergy> out(count);
    std::vector<bool> used(vals.size(), false);
    for (std::size_t i = 0; i < count; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t at = vals.size();
        const std::size_t lo = i > 6 ? i - 6 : 0;
        const std::size_t hi = std::min(vals.size(), i + 7);
        for (std::size_t j = lo; j < hi; ++j) {
            if (used[j]) continue;
            const double d = std::abs(vals[j] - ref[i]);
            if (d < best) {
                best = d;
                at = j;
            }
        }
        used[at] = true;
        out[i] = vals[at];
    }
    return out;
}

double centroid_of(const std::vector<Complex>& v, const Grid& g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += g.x(i) * std::norm(v[i]);
    return acc * g.spacing();
}

void fix_phase(std::vector<Complex>& v) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best <= 0.0) return;
    const Complex rot = std::conj(v[imax]) / best;
    for (auto& z : v) z *= rot;
    v[imax] = Complex(std::abs(v[imax]), 0.0);
}

} // namespace

HamiltonianMatrix build_hamiltonian(const Grid& grid, const ModelParams& p, SolveMode mode,
                                    std::optional<double> e_max_requested) {
    p.validate();
    check_resolution(grid, p);
    if (e_max_requested) check_containment(grid, p, *e_max_requested);

    const double h = grid.spacing();
    const double kinetic = p.omega / (h * h);

    HamiltonianMatrix out;
    out.grid = grid;
    out.params = p;
    out.mode = mode;
    out.off_diagonal = -0.5 * p.omega / (h * h);
    out.diagonal.resize(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        if (mode == SolveMode::hermitian) {
            out.diagonal[i] = Complex(kinetic - 0.5 * p.omega + potential_hermitian(x, p), 0.0);
        } else {
            out.diagonal[i] = kinetic - 0.5 * p.omega + potential_full(x, p) + Complex(0.0, -p.gamma0);
        }
    }
    return out;
}

std::vector<ComplexEnergy> solve_eigenvalues(const HamiltonianMatrix& h) {
    const std::size_t n = h.dimension();
    const std::vector<Complex> sub(n - 1, Complex(h.off_diagonal, 0.0));
    if (h.is_hermitian()) {
        const std::vector<double> rsub(n - 1, h.off_diagonal);
        const auto ev = tridiag::symql_eigenvalues(real_diagonal(h), rsub);
        std::vector<ComplexEnergy> out(ev.size());
        for (std::size_t i = 0; i < ev.size(); ++i) out[i] = Complex(ev[i], 0.0);
        return out;
    }
    return tridiag::symql_eigenvalues(h.diagonal, sub);
}

SpectrumResult solve_spectrum(const HamiltonianMatrix& h, std::size_t k) {
    const std::size_t n = h.dimension();
    if (k > n)
        throw std::invalid_argument("solve_spectrum: requested " + std::to_string(k) +
                                    " eigenpairs from a dimension-" + std::to_string(n) + " matrix");

    auto all = solve_eigenvalues(h);
    all.resize(k);

    SpectrumResult res;
    res.params = h.params;
    res.grid = h.grid;
    res.mode = h.mode;
    res.eigenvalues = std::move(all);
    res.eigenvectors.resize(k);

    const double cluster_tol = 1e-12 * matrix_scale(h) + 1e-14;
    const double root_h = std::sqrt(h.grid.spacing());

    if (h.is_hermitian()) {
        const auto diag = real_diagonal(h);
        const std::vector<double> sub(n - 1, h.off_diagonal);
        std::vector<std::vector<double>> cluster;
        for (std::size_t j = 0; j < k; ++j) {
            if (j > 0 && std::abs(res.eigenvalues[j] - res.eigenvalues[j - 1]) > cluster_tol)
                cluster.clear();
            auto v = tridiag::inverse_eigenvector(diag, sub, res.eigenvalues[j].real(),
                                                  0x9e3779b9ULL * (j + 1), cluster, j);
            cluster.push_back(v);
            auto& out = res.eigenvectors[j];
            out.resize(n);
            for (std::size_t i = 0; i < n; ++i) out[i] = Complex(v[i] / root_h, 0.0);
            fix_phase(out);
        }
    } else {
        const std::vector<Complex> sub(n - 1, Complex(h.off_diagonal, 0.0));
        std::vector<std::vector<Complex>> cluster;
        for (std::size_t j = 0; j < k; ++j) {
            if (j > 0 && std::abs(res.eigenvalues[j] - res.eigenvalues[j - 1]) > cluster_tol)
                cluster.clear();
            auto v = tridiag::inverse_eigenvector(h.diagonal, sub, res.eigenvalues[j],
                                                  0x9e3779b9ULL * (j + 1), cluster, j);
            cluster.push_back(v);
            auto& out = res.eigenvectors[j];
            out = std::move(v);
            for (auto& z : out) z /= root_h;
            fix_phase(out);
        }
    }

    // coincident eigenvalues: order by Im ascending, then by centroid ascending
    for (std::size_t a = 0; a < k;) {
        std::size_t b = a + 1;
        while (b < k && std::abs(res.eigenvalues[b] - res.eigenvalues[b - 1]) <= cluster_tol) ++b;
        if (b - a > 1) {
            std::vector<std::size_t> perm(b - a);
            std::iota(perm.begin(), perm.end(), a);
            std::vector<double> cent(b - a);
            for (std::size_t j = a; j < b; ++j) cent[j - a] = centroid_of(res.eigenvectors[j], h.grid);
            std::stable_sort(perm.begin(), perm.end(), [&](std::size_t u, std::size_t v) {
                const double du = res.eigenvalues[u].imag(), dv = res.eigenvalues[v].imag();
                if (du != dv) return du < dv;
                return cent[u - a] < cent[v - a];
            });
            std::vector<ComplexEnergy> ev(b - a);
            std::vector<std::vector<Complex>> vecs(b - a);
            for (std::size_t j = 0; j < b - a; ++j) {
                ev[j] = res.eigenvalues[perm[j]];
                vecs[j] = std::move(res.eigenvectors[perm[j]]);
            }
            for (std::size_t j = 0; j < b - a; ++j) {
                res.eigenvalues[a + j] = ev[j];
                res.eigenvectors[a + j] = std::move(vecs[j]);
            }
        }
        a = b;
    }
    return res;
}

ConvergenceReport convergence_study(const ModelParams& p, SolveMode mode, std::size_t k,
                                    const Grid& base) {
    const Grid medium = base.refined();
    const Grid fine = medium.refined();
    const Grid wide = base.enlarged(2.0);

    const auto ev_c = solve_eigenvalues(build_hamiltonian(base, p, mode));
    const std::size_t count = std::min<std::size_t>(k, ev_c.size());
    const auto ev_m = aligned_to(ev_c, solve_eigenvalues(build_hamiltonian(medium, p, mode)), count);
    const auto ev_f = aligned_to(ev_m, solve_eigenvalues(build_hamiltonian(fine, p, mode)), count);
    const auto ev_w = aligned_to(ev_c, solve_eigenvalues(build_hamiltonian(wide, p, mode)), count);

    ConvergenceReport rep;
    rep.params = p;
    rep.base = base;
    rep.mode = mode;
    rep.rows.resize(count);

    const double wall = 0.5 * p.omega * base.x_max * base.x_max;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        auto& r = rep.rows[i];
        r.index = i;
        r.coarse = ev_c[i];
        r.medium = ev_m[i];
        r.fine = ev_f[i];
        r.extrapolated = ev_f[i] + (ev_f[i] - ev_m[i]) / 3.0;
        // the h^2 correction just applied is |fine - medium|/3; the residual of
        // the extrapolated value is that correction suppressed by another
        // factor (h_f/h_m)^2 = 1/4
        r.richardson_error = std::abs(ev_f[i] - ev_m[i]) / 12.0;
        const double step = std::abs(ev_f[i] - ev_m[i]);
        r.order_ratio = step > 0.0 ? std::abs(ev_m[i] - ev_c[i]) / step : 0.0;
        r.domain_shift = std::abs(ev_w[i] - ev_c[i]);
        r.converged = r.richardson_error < 1e-4 * p.omega;
        r.domain_ok = r.domain_shift < 1e-8 * p.omega;
        r.wall_contained = wall >= ev_c[i].real() + 5.0 * p.omega;
    }
    return rep;
}

std::vector<ComplexEnergy> refined_eigenvalues(const ModelParams& p, SolveMode mode, std::size_t k,
                                               const Grid& base) {
    const auto coarse = solve_eigenvalues(build_hamiltonian(base, p, mode));
    const std::size_t m = std::min<std::size_t>(k, coarse.size());
    const auto fine =
        aligned_to(coarse, solve_eigenvalues(build_hamiltonian(base.refined(), p, mode)), m);
    std::vector<ComplexEnergy> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = fine[i] + (fine[i] - coarse[i]) / 3.0;
    return out;
}

} // namespace ovib::fd
