#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "udn/errors.hpp"
#include "udn/grid.hpp"
#include "udn/hamiltonian.hpp"
#include "udn/params.hpp"

namespace udn {

// A-priori drift magnitude bound: |a_bar - r(p)| over p in [0, p_max] and any
// nonnegative interference is largest at zero interference and the extremes of p.
inline double drift_bound(const MfgParams& prm) {
    const double r_top = mean_rate(prm.p_max, 0.0, prm);
    return std::max(prm.a_bar, std::abs(prm.a_bar - r_top));
}

// Internal Euler substeps per stored level so that both the advective and the
// explicit-diffusion stability limits hold with margin. Configurations that
// would need more substeps than the budget are rejected outright.
inline constexpr int kMaxTransportSubsteps = 100000;

inline int transport_substeps(double dt, double dq, const MfgParams& prm,
                              double cfl_target = 0.45) {
    const double speed = drift_bound(prm) / dq + 2.0 * prm.viscosity_eps / (dq * dq);
    const double ratio = dt * speed;
    const int m = std::max(1, (int)std::ceil(ratio / cfl_target));
    if (m > kMaxTransportSubsteps) throw CflError(ratio);
    return m;
}

// Backward value sweep. Level j is advanced from level j+1 with the
// interference frozen at I[j+1]; each node maximizes the Hamiltonian over the
// upwind one-sided gradient (forward difference when the optimal drift is
// positive, backward when negative, stationary-drift fallback when neither is
// self-consistent). Wall nodes use the available one-sided gradient with the
// drift restricted to the inward direction, and a one-sided second difference
// for the viscosity term. Terminal row is -terminal_coeff*exp(q) exactly.
inline std::pair<Surface, Surface> hjb_backward_sweep(const Vec& interference,
                                                      const SolverGrid& grid,
                                                      const MfgParams& prm) {
    const int nq = grid.n_q, nt = grid.n_t;
    const double dq = grid.dq(), dt = grid.dt();
    const int m = transport_substeps(dt, dq, prm);
    const double ds = dt / m;

    Surface gamma(nt, nq), policy(nt, nq);
    for (int i = 0; i < nq; ++i)
        gamma.at(nt - 1, i) = -prm.terminal_coeff * std::exp(i * dq);

    Vec level(nq), next(nq), grad(nq - 1), pol(nq), ham(nq), lap(nq), cdrift(nq - 1);
    std::vector<HamOpt> cand(nq - 1);
    for (int j = nt - 2; j >= 0; --j) {
        const double I = interference[j + 1];
        const HamTable table = make_ham_table(I, prm);
        // self-consistent zero-drift candidate: r(p_s) = a_bar
        const double p_s = std::clamp(
            (std::exp2(prm.a_bar / prm.omega) - 1.0) * (I + prm.sigma2) / prm.mean_gain, 0.0,
            prm.p_max);
        const double h_s = mean_rate(p_s, I, prm) / (p_s + prm.p0);

        for (int i = 0; i < nq; ++i) level[i] = gamma.at(j + 1, i);
        for (int step = 0; step < m; ++step) {
            for (int i = 0; i < nq - 1; ++i) grad[i] = (level[i + 1] - level[i]) / dq;
            // unclipped maximizer per one-sided gradient: node i's forward
            // candidate doubles as node i+1's backward candidate
            for (int i = 0; i < nq - 1; ++i) {
                cand[i] = maximize_hamiltonian(table, grad[i], DriftClip::none);
                cdrift[i] = prm.a_bar - mean_rate(cand[i].p, I, prm);
            }

            { // lower wall: forward difference, only nonnegative drift admissible
                const HamOpt o = maximize_hamiltonian(table, grad[0], DriftClip::non_negative);
                pol[0] = o.p;
                ham[0] = o.h;
            }
            for (int i = 1; i < nq - 1; ++i) {
                const HamOpt& of = cand[i];
                const HamOpt& ob = cand[i - 1];
                const bool f_ok = cdrift[i] > 0.0;
                const bool b_ok = cdrift[i - 1] < 0.0;
                if (f_ok && b_ok) {
                    pol[i] = of.h >= ob.h ? of.p : ob.p;
                    ham[i] = of.h >= ob.h ? of.h : ob.h;
                } else if (f_ok) {
                    pol[i] = of.p;
                    ham[i] = of.h;
                } else if (b_ok) {
                    pol[i] = ob.p;
                    ham[i] = ob.h;
                } else {
                    pol[i] = p_s;
                    ham[i] = h_s;
                }
            }
            { // upper wall: backward difference, only nonpositive drift admissible
                const HamOpt o =
                    maximize_hamiltonian(table, grad[nq - 2], DriftClip::non_positive);
                pol[nq - 1] = o.p;
                ham[nq - 1] = o.h;
            }

            for (int i = 1; i < nq - 1; ++i)
                lap[i] = (level[i + 1] - 2.0 * level[i] + level[i - 1]) / (dq * dq);
            lap[0] = (level[2] - 2.0 * level[1] + level[0]) / (dq * dq);
            lap[nq - 1] = (level[nq - 3] - 2.0 * level[nq - 2] + level[nq - 1]) / (dq * dq);

            for (int i = 0; i < nq; ++i)
                next[i] = level[i] + ds * ham[i] + ds * prm.viscosity_eps * lap[i];
            level.swap(next);
        }
        for (int i = 0; i < nq; ++i) {
            gamma.at(j, i) = level[i];
            policy.at(j, i) = pol[i];
        }
    }
    for (int i = 0; i < nq; ++i) policy.at(nt - 1, i) = policy.at(nt - 2, i);
    return {std::move(gamma), std::move(policy)};
}

} // namespace udn
