#pragma once

#include <cmath>

#include "udn/grid.hpp"

namespace udn {

// Equal-weight Gaussian mixture evaluated on the q nodes, truncated to the
// grid interval and renormalized to unit trapezoidal mass.
inline Vec mixture_density(const SolverGrid& g, double mean_a, double mean_b, double variance) {
    const double sd = std::sqrt(variance);
    Vec f(g.n_q);
    const double dq = g.dq();
    for (int i = 0; i < g.n_q; ++i) {
        const double q = i * dq;
        const double za = (q - mean_a) / sd;
        const double zb = (q - mean_b) / sd;
        f[i] = 0.5 * std::exp(-0.5 * za * za) + 0.5 * std::exp(-0.5 * zb * zb);
    }
    const double mass = trapezoid(f, dq);
    for (double& x : f) x /= mass;
    return f;
}

// Bimodal start-of-horizon queue distribution: modes 0.4 and 0.75, variance 0.1.
inline Vec default_initial_density(const SolverGrid& g) {
    return mixture_density(g, 0.4, 0.75, 0.1);
}

} // namespace udn
