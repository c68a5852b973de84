#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "udn/grid.hpp"
#include "udn/mfg.hpp"
#include "udn/params.hpp"
#include "udn/rate.hpp"

namespace udn {

// One user's traffic queue in normalized bits.
struct UeQueueState {
    double q = 0.0;
    double capacity = 1.0;
    double dropped_total = 0.0;
    double arrived_total = 0.0;
};

// Per-cell scheduler state: virtual queues tracking the auxiliary-variable
// equality constraint, running scheduling averages, and the tradeoff weight.
struct SchedulerState {
    Vec upsilon;
    Vec lambda_avg;
    double V = -1.0;
    long slot_index = 0;

    explicit SchedulerState(int n_ue = 0, double v = -1.0)
        : upsilon(n_ue, 0.0), lambda_avg(n_ue, 0.0), V(v) {}
};

struct ScheduleDecision {
    Vec lambda;         // 0/1, exactly one entry set
    Vec upsilon_chosen; // simplex vertex minimizing the virtual-queue inner product
    Vec scores;
    int ue = 0;
};

// Rate available to whichever user a cell schedules, read off the solved
// surfaces at the supplied time index (callers pass the previous slot's
// index; the first slot passes 0). The mean transmit power over the density
// plays the serving-signal role against the equilibrium interference.
inline double estimate_rate(const MfgSolution& sol, int slot_t) {
    const int idx = std::clamp(slot_t, 0, sol.grid.n_t - 1);
    const int nq = sol.grid.n_q;
    const double dq = sol.grid.dq();
    const double* p = sol.policy.row(idx);
    const double* r = sol.rho.row(idx);
    double s = 0.5 * (p[0] * r[0] + p[nq - 1] * r[nq - 1]);
    for (int i = 1; i < nq - 1; ++i) s += p[i] * r[i];
    const double p_bar = s * dq;
    return sol.params.omega * log2_1p(p_bar / (sol.interference[idx] + sol.params.sigma2));
}

inline UeQueueState queue_update(UeQueueState s, double arrivals, double served) {
    const double after = std::max(0.0, s.q + arrivals - served);
    s.dropped_total += std::max(0.0, after - s.capacity);
    s.arrived_total += arrivals;
    s.q = std::min(s.capacity, after);
    return s;
}

inline double virtual_queue_update(double upsilon, double upsilon_chosen, double lambda) {
    return upsilon + upsilon_chosen - lambda;
}

// Unit vector minimizing upsilon'v over the simplex; ties toward lowest index.
inline Vec choose_auxiliary(const Vec& upsilon) {
    if (upsilon.empty()) throw std::invalid_argument("choose_auxiliary: empty input");
    int k = 0;
    for (int i = 1; i < (int)upsilon.size(); ++i)
        if (upsilon[i] < upsilon[k]) k = i;
    Vec v(upsilon.size(), 0.0);
    v[k] = 1.0;
    return v;
}

// Gradient of the proportional-fair utility sum(log lambda_avg), floored.
inline Vec pf_gradient(const Vec& lambda_avg, double floor_eps = 1e-3) {
    Vec g(lambda_avg.size());
    for (size_t i = 0; i < g.size(); ++i) g[i] = 1.0 / std::max(lambda_avg[i], floor_eps);
    return g;
}

// Per-slot decision: score each user by backlog-weighted rate plus the
// virtual queue minus V times the fairness gradient, schedule the argmax.
inline ScheduleDecision schedule(const Vec& queues, const Vec& upsilon, double r_hat,
                                 const Vec& lambda_avg, double V,
                                 double floor_eps = 1e-3) {
    const int n = (int)queues.size();
    if (n == 0 || (int)upsilon.size() != n || (int)lambda_avg.size() != n)
        throw std::invalid_argument("schedule: inconsistent vector lengths");
    ScheduleDecision d;
    d.scores.resize(n);
    const Vec g = pf_gradient(lambda_avg, floor_eps);
    int best = 0;
    for (int i = 0; i < n; ++i) {
        d.scores[i] = queues[i] * r_hat + upsilon[i] - V * g[i];
        if (d.scores[i] > d.scores[best]) best = i;
    }
    d.ue = best;
    d.lambda.assign(n, 0.0);
    d.lambda[best] = 1.0;
    d.upsilon_chosen = choose_auxiliary(upsilon);
    return d;
}

inline Vec update_averages(const Vec& lambda_avg, const Vec& lambda, long slot_index) {
    Vec out(lambda_avg.size());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = (slot_index * lambda_avg[i] + lambda[i]) / (slot_index + 1);
    return out;
}

// One full scheduling slot against the given backlogs: decide, then advance
// the virtual queues and running averages.
inline ScheduleDecision scheduler_step(SchedulerState& st, const Vec& queues, double r_hat) {
    ScheduleDecision d = schedule(queues, st.upsilon, r_hat, st.lambda_avg, st.V);
    for (size_t i = 0; i < st.upsilon.size(); ++i)
        st.upsilon[i] = virtual_queue_update(st.upsilon[i], d.upsilon_chosen[i], d.lambda[i]);
    st.lambda_avg = update_averages(st.lambda_avg, d.lambda, st.slot_index);
    st.slot_index += 1;
    return d;
}

} // namespace udn
