#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "ovib/model.hpp"

using namespace ovib;
using std::numbers::pi;

namespace {
ModelParams reference() {
    ModelParams p;
    p.gamma0 = 4.0;
    return p;
}
} // namespace

TEST_CASE("potential at the origin is gamma0, purely real") {
    ModelParams p = reference();
    for (const double eta : {0.0, 0.7, 2.0, 5.3}) {
        p.eta = eta;
        const Complex v = potential_full(0.0, p);
        CHECK(v.real() == doctest::Approx(4.0).epsilon(1e-15));
        CHECK(std::abs(v.imag()) < 1e-15);
    }
}

TEST_CASE("eta = 0 reduces to a shifted parabola") {
    ModelParams p = reference();
    p.eta = 0.0;
    for (const double x : {-7.0, -0.4, 0.0, 1.3, 9.9}) {
        const Complex v = potential_full(x, p);
        CHECK(v.real() == doctest::Approx(0.5 * x * x + 4.0).epsilon(1e-14));
        CHECK(std::abs(v.imag()) < 1e-14);
    }
}

TEST_CASE("half-period point flips the coupling sign") {
    ModelParams p = reference();
    p.eta = 2.0;
    const double x = pi / p.eta;
    const Complex v = potential_full(x, p);
    CHECK(v.real() == doctest::Approx(pi * pi / 8.0 - 4.0).epsilon(1e-14));
    CHECK(std::abs(v.imag()) < 1e-13);
}

TEST_CASE("hermitian potential scalar value") {
    ModelParams p = reference();
    p.eta = 2.0;
    // 2 + 4 cos(4), checked against an independent high-precision evaluation
    CHECK(potential_hermitian(2.0, p) == doctest::Approx(-0.6145744834544478).epsilon(1e-15));
}

TEST_CASE("hermitian potential is exactly the real part") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ux(-12.0, 12.0);
    std::uniform_real_distribution<double> ue(0.0, 6.0);
    std::uniform_real_distribution<double> uphi(0.0, 2.0 * pi - 1e-12);
    for (int it = 0; it < 500; ++it) {
        ModelParams p = reference();
        p.eta = ue(rng);
        p.phi = uphi(rng);
        p.branch = (it % 2 == 0) ? Branch::symmetric : Branch::antisymmetric;
        const double x = ux(rng);
        CHECK(potential_hermitian(x, p) == potential_full(x, p).real());
    }
}

TEST_CASE("PT property at phi = pi/2") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(0.0, 14.0);
    for (const double eta : {0.0, 0.5, 2.0, 4.4}) {
        ModelParams p = reference();
        p.eta = eta;
        for (int it = 0; it < 200; ++it) {
            const double x = ux(rng);
            const double defect = std::abs(potential_full(-x, p) - std::conj(potential_full(x, p)));
            CHECK(defect < 1e-14 * (p.omega + p.gamma0));
        }
    }
}

TEST_CASE("branch - at phi equals branch + at phi + pi") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-10.0, 10.0);
    std::uniform_real_distribution<double> uphi(0.0, pi); // keep phi + pi in range
    for (int it = 0; it < 300; ++it) {
        ModelParams minus = reference();
        minus.eta = 1.7;
        minus.phi = uphi(rng);
        minus.branch = Branch::antisymmetric;
        ModelParams plus = minus;
        plus.branch = Branch::symmetric;
        plus.phi = minus.phi + pi;
        const double x = ux(rng);
        CHECK(std::abs(potential_full(x, minus) - potential_full(x, plus)) < 1e-14 * 5.0);
    }
}

TEST_CASE("parameter validation") {
    ModelParams p = reference();
    CHECK_NOTHROW(p.validate());
    p.omega = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = reference();
    p.gamma0 = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = reference();
    p.eta = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = reference();
    p.phi = 2.0 * pi;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
