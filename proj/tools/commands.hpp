#pragma once

#include <stdexcept>
#include <string>

#include "run_config.hpp"

namespace ovib::cli {

// Raised when a solve stage fails after the config was accepted; the message
// names the stage. Maps to exit code 3.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

int cmd_spectrum(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_phasemap(const RunConfig& cfg);
int cmd_thresholds(const RunConfig& cfg);
int cmd_validate(const RunConfig& cfg);

} // namespace ovib::cli
