#pragma once

#include <algorithm>
#include <cmath>

#include "udn/errors.hpp"
#include "udn/grid.hpp"
#include "udn/hjb.hpp"
#include "udn/params.hpp"
#include "udn/rate.hpp"

namespace udn {

// Forward transport of the density under drift D(t,q) = a_bar - r(p*(t,q))
// plus artificial diffusion. Conservative finite-volume upwind form on the
// trapezoid cells: interior faces carry drift (averaged from the adjacent
// nodes) times the upwind node value minus a diffusive difference; both walls
// are zero-flux, so drained mass accumulates in the first cell. Roundoff
// negatives are clipped and the mass renormalized every substep.
inline Surface fpk_forward_sweep(const Surface& policy, const Vec& interference,
                                 const Vec& rho0, const SolverGrid& grid,
                                 const MfgParams& prm) {
    const int nq = grid.n_q, nt = grid.n_t;
    const double dq = grid.dq(), dt = grid.dt();
    const int m = transport_substeps(dt, dq, prm);
    const double ds = dt / m;

    const Vec w = trapezoid_weights(nq, dq);
    Surface rho(nt, nq);
    for (int i = 0; i < nq; ++i) rho.at(0, i) = rho0[i];

    Vec cur(nq), face_drift(nq - 1), flux(nq - 1), mass(nq);
    for (int j = 0; j < nt - 1; ++j) {
        const double I = interference[j];
        for (int i = 0; i < nq - 1; ++i) {
            const double d0 = prm.a_bar - mean_rate(policy.at(j, i), I, prm);
            const double d1 = prm.a_bar - mean_rate(policy.at(j, i + 1), I, prm);
            face_drift[i] = 0.5 * (d0 + d1);
        }
        for (int i = 0; i < nq; ++i) cur[i] = rho.at(j, i);
        for (int step = 0; step < m; ++step) {
            for (int i = 0; i < nq - 1; ++i) {
                const double up = face_drift[i] > 0.0 ? cur[i] : cur[i + 1];
                flux[i] = face_drift[i] * up - prm.viscosity_eps * (cur[i + 1] - cur[i]) / dq;
            }
            for (int i = 0; i < nq; ++i) mass[i] = w[i] * cur[i];
            for (int i = 0; i < nq - 1; ++i) {
                mass[i] -= ds * flux[i];
                mass[i + 1] += ds * flux[i];
            }
            double total = 0.0;
            for (int i = 0; i < nq; ++i) {
                cur[i] = std::max(mass[i] / w[i], 0.0);
                total += w[i] * cur[i];
            }
            for (int i = 0; i < nq; ++i) cur[i] /= total;
        }
        for (int i = 0; i < nq; ++i) rho.at(j + 1, i) = cur[i];
    }
    return rho;
}

} // namespace udn
