#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ovib {

// Grid resolution does not resolve the coupling oscillation period.
class GridTooCoarse : public std::runtime_error {
public:
    explicit GridTooCoarse(const std::string& what) : std::runtime_error(what) {}
};

// Soft-wall containment fails for the requested spectral window.
class DomainTooSmall : public std::runtime_error {
public:
    explicit DomainTooSmall(const std::string& what) : std::runtime_error(what) {}
};

// Eigensolver iteration cap exceeded; carries the failing index.
class ConvergenceFailure : public std::runtime_error {
public:
    ConvergenceFailure(std::size_t index, const std::string& what)
        : std::runtime_error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// Requested energy lies below the minimum of the real potential.
class NoClassicalRegion : public std::runtime_error {
public:
    explicit NoClassicalRegion(const std::string& what) : std::runtime_error(what) {}
};

// Coupling below the appearance threshold of the requested localized branch.
class BelowThreshold : public std::runtime_error {
public:
    explicit BelowThreshold(const std::string& what) : std::runtime_error(what) {}
};

// Two-mode tensor spectrum is not a sum of single-mode spectra.
class DecouplingViolation : public std::runtime_error {
public:
    DecouplingViolation(double max_deviation, const std::string& what)
        : std::runtime_error(what), max_deviation_(max_deviation) {}
    double max_deviation() const noexcept { return max_deviation_; }

private:
    double max_deviation_;
};

// A complex-shifted eigenvalue has no conjugate partner (grid/convergence failure).
class UnpairedComplexEigenvalue : public std::runtime_error {
public:
    explicit UnpairedComplexEigenvalue(const std::string& what) : std::runtime_error(what) {}
};

// A localized pair exists for too few sweep points to fit its energy law.
class InsufficientTrack : public std::runtime_error {
public:
    explicit InsufficientTrack(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ovib
