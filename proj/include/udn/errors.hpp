#pragma once

#include <stdexcept>
#include <string>

namespace udn {

// Invalid or infeasible configuration (bad domain, impossible topology, ...).
// CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Explicit time step too far beyond the advection/diffusion stability limit
// to repair by substepping.
struct CflError : std::runtime_error {
    double ratio;
    explicit CflError(double r)
        : std::runtime_error("CFL violation: stability ratio dt*(|drift|/dq + 2*eps/dq^2) = " +
                             std::to_string(r) + " exceeds the substep budget"),
          ratio(r) {}
};

} // namespace udn
