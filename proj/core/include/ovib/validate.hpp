#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ovib/fd_solver.hpp"
#include "ovib/fock_solver.hpp"

namespace ovib::validate {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_pass() const noexcept {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct ValidationOptions {
    Grid grid = Grid::reference();
    std::size_t fock_n_max = 200;
    double omega = 1.0;
    double gamma0 = 4.0; // reference coupling for the battery
};

// Cross-oracle, decoupling, convergence, and module-invariant battery at desk
// scale. Every check is caught-and-reported; nothing throws out of here.
ValidationReport run_validation(const ValidationOptions& opt = {});

} // namespace ovib::validate
