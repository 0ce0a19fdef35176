#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ovib/errors.hpp"
#include "ovib/tridiag.hpp"

#include "support/oracles.hpp"

using namespace ovib;
using std::numbers::pi;

namespace {

// Toeplitz symmetric tridiagonal (a on the diagonal, b off): eigenvalues are
// a + 2 b cos(k pi / (n+1))
std::vector<double> toeplitz_eigenvalues(double a, double b, std::size_t n) {
    std::vector<double> ev(n);
    for (std::size_t k = 1; k <= n; ++k)
        ev[k - 1] = a + 2.0 * b * std::cos(static_cast<double>(k) * pi / static_cast<double>(n + 1));
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace

TEST_CASE("real QL reproduces the Toeplitz spectrum") {
    const std::size_t n = 400;
    const std::vector<double> diag(n, 2.0), sub(n - 1, -1.0);
    const auto got = tridiag::symql_eigenvalues(diag, sub);
    const auto want = toeplitz_eigenvalues(2.0, -1.0, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("real QL matches the dense solver on random matrices") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(rng() % 60);
        std::vector<double> diag(n), sub(n - 1);
        for (auto& d : diag) d = u(rng);
        for (auto& s : sub) s = u(rng);

        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
        for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = sub[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);

        const auto got = tridiag::symql_eigenvalues(diag, sub);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(got[i] == doctest::Approx(solver.eigenvalues()(static_cast<long>(i))).epsilon(1e-11));
    }
}

TEST_CASE("complex QL matches the dense solver on physics-like matrices") {
    std::mt19937_64 rng(321);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 20 + static_cast<std::size_t>(rng() % 40);
        // real symmetric base plus a bounded anti-Hermitian diagonal, the same
        // structure the discretized Hamiltonian has
        std::vector<Complex> diag(n), sub(n - 1);
        for (auto& d : diag) d = Complex(5.0 * u(rng), 2.0 * u(rng));
        for (auto& s : sub) s = Complex(2.0 * u(rng), 0.0);

        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
        for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = sub[i];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);

        std::vector<Complex> want(n);
        for (std::size_t i = 0; i < n; ++i) want[i] = solver.eigenvalues()(static_cast<long>(i));
        std::sort(want.begin(), want.end(), [](const Complex& a, const Complex& b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });

        const auto got = tridiag::symql_eigenvalues(diag, sub);
        // pair by nearest match; ordering conventions may differ for close Re
        std::vector<bool> used(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            double best = 1e18;
            std::size_t at = n;
            for (std::size_t j = 0; j < n; ++j) {
                if (used[j]) continue;
                const double d = std::abs(got[i] - want[j]);
                if (d < best) {
                    best = d;
                    at = j;
                }
            }
            used[at] = true;
            CHECK(best < 1e-10 * 10.0);
        }
    }
}

TEST_CASE("fully real input through the complex path stays real") {
    const std::size_t n = 60;
    std::vector<Complex> diag(n), sub(n - 1, Complex(-1.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) diag[i] = Complex(2.0 + 0.01 * static_cast<double>(i), 0.0);
    for (const auto& ev : tridiag::symql_eigenvalues(diag, sub)) CHECK(std::abs(ev.imag()) < 1e-12);
}

TEST_CASE("inverse iteration returns small-residual unit vectors") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 120;
    std::vector<Complex> diag(n), sub(n - 1);
    for (auto& d : diag) d = Complex(4.0 * u(rng), u(rng));
    for (auto& s : sub) s = Complex(1.5 * u(rng), 0.0);

    const auto ev = tridiag::symql_eigenvalues(diag, sub);
    std::vector<std::vector<Complex>> cluster;
    for (std::size_t j = 0; j < 10; ++j) {
        const auto v = tridiag::inverse_eigenvector(diag, sub, ev[j], 1000 + j, cluster, j);
        double norm = 0.0;
        for (const auto& z : v) norm += std::norm(z);
        CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));

        const auto av = oracle::tridiag_apply(diag, sub, v);
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(av[i] - ev[j] * v[i]));
        CHECK(resid < 1e-9 * 6.0);
    }
}

TEST_CASE("clustered eigenvalues get independent vectors") {
    // two decoupled identical blocks: every eigenvalue is doubly degenerate
    const std::size_t nb = 30;
    const std::size_t n = 2 * nb;
    std::vector<double> diag(n), sub(n - 1, 0.0);
    for (std::size_t i = 0; i < nb; ++i) diag[i] = diag[nb + i] = 0.1 * static_cast<double>(i);
    for (std::size_t i = 0; i + 1 < nb; ++i) sub[i] = sub[nb + i] = -0.7;
    sub[nb - 1] = 0.0; // decouple the blocks

    const auto ev = tridiag::symql_eigenvalues(diag, sub);
    std::vector<std::vector<double>> cluster;
    const auto v1 = tridiag::inverse_eigenvector(diag, sub, ev[0], 1, cluster, 0);
    cluster.push_back(v1);
    const auto v2 = tridiag::inverse_eigenvector(diag, sub, ev[1], 2, cluster, 1);
    double overlap = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        overlap += v1[i] * v2[i];
        norm2 += v2[i] * v2[i];
    }
    CHECK(std::abs(overlap) < 1e-8);
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
}
