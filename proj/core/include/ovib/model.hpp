#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ovib {

using Complex = std::complex<double>;

// Complex eigenenergy in units of the vibration quantum omega.
using ComplexEnergy = std::complex<double>;

// Parity of the retained atomic excitation superposition.
enum class Branch { symmetric, antisymmetric };

// Whether to solve the full non-Hermitian problem or its Hermitian truncation
// (Re V, uniform loss dropped).
enum class SolveMode { hermitian, full };

inline const char* mode_name(SolveMode m) noexcept {
    return m == SolveMode::hermitian ? "hermitian" : "full";
}

inline int branch_sign(Branch b) noexcept {
    return b == Branch::symmetric ? +1 : -1;
}

inline const char* branch_name(Branch b) noexcept {
    return b == Branch::symmetric ? "+" : "-";
}

// Physical parameters of the single-excitation optomechanical model.
// All energies are expressed in units of omega; the relative coordinate
// x_d is dimensionless (units of sqrt(2) u0).
struct ModelParams {
    double omega = 1.0;                  // vibration quantum, energy unit
    double gamma0 = 4.0;                 // radiative decay rate of one qubit
    double phi = std::numbers::pi / 2;   // propagation phase q|z1 - z2|
    double eta = 0.0;                    // optomechanical coupling 2 q u0
    Branch branch = Branch::symmetric;

    void validate() const {
        if (!(omega > 0.0))
            throw std::invalid_argument("ModelParams: omega must be > 0, got " + std::to_string(omega));
        if (!(gamma0 >= 0.0))
            throw std::invalid_argument("ModelParams: gamma0 must be >= 0, got " + std::to_string(gamma0));
        if (!(eta >= 0.0))
            throw std::invalid_argument("ModelParams: eta must be >= 0, got " + std::to_string(eta));
        if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
            throw std::invalid_argument("ModelParams: phi must lie in [0, 2*pi), got " + std::to_string(phi));
    }
};

// Complex optomechanical potential
//
//   V(x) = omega x^2 / 2 - i gamma0 s e^{i phi} e^{-i eta x},   s = +-1 per branch.
//
// At phi = pi/2, branch +, this is omega x^2/2 + gamma0 cos(eta x) - i gamma0 sin(eta x),
// which satisfies the PT property V(-x)* = V(x). The orientation of the imaginary
// part is fixed so that states trapped at positive x acquire the larger decay rate.
// The constant terms -omega/2 and -i gamma0 of the full Hamiltonian are not part
// of V; they are added during matrix assembly.
// Hermitian truncation: Re V(x). At phi = pi/2, branch +, equals
// omega x^2/2 + gamma0 cos(eta x).
inline double potential_hermitian(double x, const ModelParams& p) noexcept {
    const int s = branch_sign(p.branch);
    return 0.5 * p.omega * x * x + p.gamma0 * s * std::sin(p.phi - p.eta * x);
}

inline Complex potential_full(double x, const ModelParams& p) noexcept {
    const int s = branch_sign(p.branch);
    return Complex(potential_hermitian(x, p),
                   -p.gamma0 * s * std::cos(p.phi - p.eta * x));
}

} // namespace ovib
