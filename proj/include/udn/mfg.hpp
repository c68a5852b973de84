#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "udn/density.hpp"
#include "udn/fpk.hpp"
#include "udn/grid.hpp"
#include "udn/hjb.hpp"
#include "udn/params.hpp"
#include "udn/rate.hpp"

namespace udn {

// Coupled equilibrium triple plus the interference trajectory that produced it.
struct MfgSolution {
    SolverGrid grid;
    MfgParams params;
    Surface gamma;   // value
    Surface rho;     // density
    Surface policy;  // transmit power
    Vec interference;
    Vec residual_history; // damped density residual after each iteration
    int iterations_used = 0;
    double final_residual = 0.0;
};

namespace detail {

// The maximized Hamiltonian is nearly flat in p over wide bands, so the
// argmax can hop between distant powers on successive fixed-point iterates
// and the density residual stalls in a limit cycle. Once the macroscopic
// fields have settled (iteration threshold below), a node keeps its previous
// power whenever that power is within a small slack of the freshly maximized
// Hamiltonian value, evaluated at the current upwind gradient.
inline constexpr int kPolicyHoldStart = 30;
inline constexpr double kPolicyHoldSlack = 1e-3;

inline void hold_previous_policy(Surface& policy, const Surface& prev, const Surface& gamma,
                                 const Vec& interference, const SolverGrid& grid,
                                 const MfgParams& prm) {
    const int nq = grid.n_q, nt = grid.n_t;
    const double dq = grid.dq();
    Vec d(nq - 1);
    for (int j = 0; j < nt - 1; ++j) {
        const double I = interference[j + 1];
        for (int i = 0; i < nq - 1; ++i) d[i] = (gamma.at(j, i + 1) - gamma.at(j, i)) / dq;
        for (int i = 0; i < nq; ++i) {
            DriftClip clip = DriftClip::none;
            double g;
            if (i == 0) {
                clip = DriftClip::non_negative;
                g = d[0];
            } else if (i == nq - 1) {
                clip = DriftClip::non_positive;
                g = d[nq - 2];
            } else {
                const double drift_new = prm.a_bar - mean_rate(policy.at(j, i), I, prm);
                g = drift_new > 0.0 ? d[i] : d[i - 1];
            }
            const double h_prev = hamiltonian_value(prev.at(j, i), g, I, prm, clip);
            const double h_new = hamiltonian_value(policy.at(j, i), g, I, prm, clip);
            if (h_prev >= h_new - kPolicyHoldSlack) policy.at(j, i) = prev.at(j, i);
        }
    }
    for (int i = 0; i < nq; ++i) policy.at(nt - 1, i) = policy.at(nt - 2, i);
}

} // namespace detail

// Damped fixed-point loop: interference from the current (policy, rho) pair,
// backward value sweep, forward density sweep, relaxation on the density.
// The interference fed to the sweeps is itself relaxed with the same damping
// weight, which is what makes the coupled loop contract on this problem.
inline MfgSolution solve_mfg(const SolverGrid& grid, const MfgParams& prm,
                             const PicardConfig& picard, const Vec& rho0) {
    if (!grid.valid()) throw std::invalid_argument("solve_mfg: bad grid");
    if (!prm.valid()) throw std::invalid_argument("solve_mfg: bad params");
    if (!picard.valid()) throw std::invalid_argument("solve_mfg: bad fixed-point config");
    if ((int)rho0.size() != grid.n_q) throw std::invalid_argument("solve_mfg: rho0 size");
    const double mass0 = trapezoid(rho0, grid.dq());
    if (std::abs(mass0 - 1.0) > 1e-6) throw std::invalid_argument("solve_mfg: rho0 mass != 1");

    const int nq = grid.n_q, nt = grid.n_t;
    const double dq = grid.dq();
    const double beta = picard.damping;

    Surface rho(nt, nq), policy(nt, nq, prm.p_max / 2.0), gamma, prev_policy;
    for (int j = 0; j < nt; ++j)
        for (int i = 0; i < nq; ++i) rho.at(j, i) = rho0[i];

    Vec interference(nt, 0.0);
    Vec residual_history;
    bool have_interference = false;
    bool have_prev = false;
    int iters = 0;
    double residual = 0.0;

    for (int it = 0; it < picard.max_iter; ++it) {
        for (int j = 0; j < nt; ++j) {
            const double raw = mf_interference(rho.row(j), policy.row(j), nq, dq, prm);
            interference[j] = have_interference
                                  ? (1.0 - beta) * interference[j] + beta * raw
                                  : raw;
        }
        have_interference = true;

        auto gp = hjb_backward_sweep(interference, grid, prm);
        gamma = std::move(gp.first);
        policy = std::move(gp.second);
        if (have_prev && it >= detail::kPolicyHoldStart)
            detail::hold_previous_policy(policy, prev_policy, gamma, interference, grid, prm);
        prev_policy = policy;
        have_prev = true;

        const Surface rho_cand = fpk_forward_sweep(policy, interference, rho0, grid, prm);
        double res = 0.0;
        for (size_t n = 0; n < rho.v.size(); ++n) {
            const double diff = std::abs(rho_cand.v[n] - rho.v[n]);
            if (diff > res) res = diff;
            rho.v[n] = (1.0 - beta) * rho.v[n] + beta * rho_cand.v[n];
        }
        iters = it + 1;
        residual = beta * res;
        residual_history.push_back(residual);
        if (residual <= picard.tol) break;
    }

    MfgSolution sol;
    sol.grid = grid;
    sol.params = prm;
    sol.gamma = std::move(gamma);
    sol.rho = std::move(rho);
    sol.policy = std::move(policy);
    sol.interference = std::move(interference);
    sol.residual_history = std::move(residual_history);
    sol.iterations_used = iters;
    sol.final_residual = residual;
    return sol;
}

inline MfgSolution solve_mfg(const SolverGrid& grid, const MfgParams& prm,
                             const PicardConfig& picard) {
    return solve_mfg(grid, prm, picard, default_initial_density(grid));
}

} // namespace udn
