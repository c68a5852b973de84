#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "udn/grid.hpp"
#include "udn/mfg.hpp"
#include "udn/params.hpp"
#include "udn/rate.hpp"
#include "udn/rng.hpp"
#include "udn/scheduler.hpp"
#include "udn/topology.hpp"

namespace udn {

enum class PolicyKind { proposed, baseline };

inline const char* policy_name(PolicyKind p) {
    return p == PolicyKind::proposed ? "proposed" : "baseline";
}

// Episode controls on top of the physical parameters.
struct SimParams {
    int n_slots = 200;
    int updates_per_slot = 100;
    int warmup_slots = 20; // excluded from the metric window
    double slot_T = 1.0;   // slot duration; the policy surface spans one slot
    double fixed_power = 10.0;
    double queue_capacity = 1.0;
    double sched_V = -1.0;
    double floor_eps = 1e-3;
    double pf_ema = 0.1;

    bool valid() const {
        return n_slots >= 1 && updates_per_slot >= 1 && warmup_slots >= 0 &&
               warmup_slots < n_slots && slot_T > 0 && fixed_power >= 0 &&
               queue_capacity > 0 && floor_eps > 0 && pf_ema > 0 && pf_ema <= 1;
    }
};

// Window accumulators (post-warm-up). Conservation holds as
// backlog_window_start + bits_arrived = bits_transmitted + bits_dropped + backlog_end.
struct EpisodeMetrics {
    double bits_transmitted = 0.0;
    double energy_consumed = 0.0;
    double bits_arrived = 0.0;
    double bits_dropped = 0.0;
    double backlog_window_start = 0.0;
    double backlog_end = 0.0;
    double mean_interference_per_ue = 0.0;
    double ue_drop_fraction = 0.0;
    Vec per_sbs_bits;
    Vec per_sbs_energy;

    double ee() const { return energy_consumed > 0.0 ? bits_transmitted / energy_consumed : 0.0; }
    double outage() const { return bits_arrived > 0.0 ? bits_dropped / bits_arrived : 0.0; }
    double per_sbs_ee(int b) const {
        return per_sbs_energy[b] > 0.0 ? per_sbs_bits[b] / per_sbs_energy[b] : 0.0;
    }
};

struct DecisionLogRow {
    int slot;
    int sbs_id;
    int ue_id;
    double score;
    double q;
    double upsilon;
    double r_hat;
};

// PF baseline pick: best current-rate-to-average ratio, ties toward index 0.
inline int pf_schedule(const Vec& rate_history_avg, const Vec& r_hat, double floor_eps = 1e-3) {
    int best = 0;
    double best_v = r_hat[0] / std::max(rate_history_avg[0], floor_eps);
    for (int i = 1; i < (int)r_hat.size(); ++i) {
        const double v = r_hat[i] / std::max(rate_history_avg[i], floor_eps);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    return best;
}

// Time-scale-separated episode: one scheduling decision per SBS per slot,
// then updates_per_slot fast power/transmission steps. All arrival draws come
// from a dedicated stream in a schedule-independent order, so runs with the
// same seed see identical traffic no matter the policy.
//
// mfg may be null for the baseline policy.
inline EpisodeMetrics run_episode(const Topology& topo, const ChannelGains& gains,
                                  PolicyKind policy, const MfgSolution* mfg,
                                  const SimParams& sim, const MfgParams& prm,
                                  uint64_t arrival_seed,
                                  std::vector<DecisionLogRow>* decision_log = nullptr) {
    if (policy == PolicyKind::proposed && mfg == nullptr)
        throw std::invalid_argument("run_episode: proposed policy needs a solved surface");
    if (!sim.valid()) throw ConfigError("run_episode: invalid episode controls");

    const int n_sbs = topo.n_sbs;
    const int k = topo.load_k;
    const int n_ue = topo.n_ue();
    const double dt = sim.slot_T / sim.updates_per_slot;

    Rng arrivals(arrival_seed);
    Vec q(n_ue, 0.0);
    std::vector<bool> had_drop(n_ue, false);

    std::vector<SchedulerState> dpp;
    Vec pf_avg, pf_rhat;
    if (policy == PolicyKind::proposed) {
        dpp.assign(n_sbs, SchedulerState(k, sim.sched_V));
    } else {
        pf_avg.assign(n_ue, 0.0);
        pf_rhat.assign(n_ue, 0.0);
        // static achievable-rate estimate with every cell at the fixed power
        for (int m = 0; m < n_ue; ++m) {
            const int b = topo.serving_sbs(m);
            double recv = 0.0;
            for (int bb = 0; bb < n_sbs; ++bb) recv += sim.fixed_power * gains.at(bb, m);
            const double inter = recv - sim.fixed_power * gains.at(b, m);
            pf_rhat[m] = data_rate(sim.fixed_power, gains.at(b, m), inter, 1.0, prm);
        }
    }

    EpisodeMetrics met;
    met.per_sbs_bits.assign(n_sbs, 0.0);
    met.per_sbs_energy.assign(n_sbs, 0.0);
    double interf_sum = 0.0;
    long interf_steps = 0;

    std::vector<int> sched(n_sbs, 0); // scheduled UE (global index) per SBS
    Vec p(n_sbs, 0.0), recv(n_ue, 0.0), slot_bits(n_ue, 0.0);

    for (int s = 0; s < sim.n_slots; ++s) {
        const bool in_window = s >= sim.warmup_slots;
        if (s == sim.warmup_slots)
            for (int m = 0; m < n_ue; ++m) met.backlog_window_start += q[m];

        if (policy == PolicyKind::proposed) {
            const double r_hat = estimate_rate(*mfg, std::max(s - 1, 0));
            Vec cell_q(k);
            for (int b = 0; b < n_sbs; ++b) {
                for (int j = 0; j < k; ++j) cell_q[j] = q[topo.association[b][j]];
                const ScheduleDecision d = scheduler_step(dpp[b], cell_q, r_hat);
                sched[b] = topo.association[b][d.ue];
                if (decision_log)
                    decision_log->push_back({s, b, sched[b], d.scores[d.ue], cell_q[d.ue],
                                             dpp[b].upsilon[d.ue], r_hat});
            }
        } else {
            Vec cell_avg(k), cell_rhat(k);
            for (int b = 0; b < n_sbs; ++b) {
                for (int j = 0; j < k; ++j) {
                    cell_avg[j] = pf_avg[topo.association[b][j]];
                    cell_rhat[j] = pf_rhat[topo.association[b][j]];
                }
                sched[b] = topo.association[b][pf_schedule(cell_avg, cell_rhat, sim.floor_eps)];
            }
        }

        std::fill(slot_bits.begin(), slot_bits.end(), 0.0);
        for (int u = 0; u < sim.updates_per_slot; ++u) {
            const double t_in = u * dt;
            for (int b = 0; b < n_sbs; ++b) {
                if (policy == PolicyKind::proposed) {
                    const double qs = q[sched[b]];
                    p[b] = std::clamp(bilinear(mfg->policy, mfg->grid, t_in, qs), 0.0, prm.p_max);
                } else {
                    p[b] = sim.fixed_power;
                }
            }
            for (int m = 0; m < n_ue; ++m) recv[m] = 0.0;
            for (int b = 0; b < n_sbs; ++b) {
                const double pb = p[b];
                for (int m = 0; m < n_ue; ++m) recv[m] += pb * gains.at(b, m);
            }

            double step_interf = 0.0;
            for (int m = 0; m < n_ue; ++m)
                step_interf += recv[m] - p[topo.serving_sbs(m)] * gains.at(topo.serving_sbs(m), m);
            if (in_window) {
                interf_sum += step_interf / n_ue;
                ++interf_steps;
            }

            Vec served(n_ue, 0.0);
            for (int b = 0; b < n_sbs; ++b) {
                const int m = sched[b];
                const double inter = recv[m] - p[b] * gains.at(b, m);
                served[m] = data_rate(p[b], gains.at(b, m), inter, 1.0, prm) * dt;
            }

            for (int m = 0; m < n_ue; ++m) {
                const double a = (double)arrivals.poisson(prm.a_bar * dt);
                const double avail = q[m] + a;
                const double drained = std::min(avail, served[m]);
                const double after = avail - drained;
                const double qn = std::min(sim.queue_capacity, after);
                const double drop = after - qn;
                q[m] = qn;
                slot_bits[m] += drained;
                if (in_window) {
                    met.bits_arrived += a;
                    met.bits_transmitted += drained;
                    met.bits_dropped += drop;
                    met.per_sbs_bits[topo.serving_sbs(m)] += drained;
                    if (drop > 0.0) had_drop[m] = true;
                }
            }
            if (in_window)
                for (int b = 0; b < n_sbs; ++b) {
                    const double e = (p[b] + prm.p0) * dt;
                    met.energy_consumed += e;
                    met.per_sbs_energy[b] += e;
                }
        }

        if (policy == PolicyKind::baseline)
            for (int m = 0; m < n_ue; ++m)
                pf_avg[m] = (1.0 - sim.pf_ema) * pf_avg[m] + sim.pf_ema * slot_bits[m] / sim.slot_T;
    }

    for (int m = 0; m < n_ue; ++m) {
        met.backlog_end += q[m];
        if (had_drop[m]) met.ue_drop_fraction += 1.0;
    }
    met.ue_drop_fraction /= n_ue;
    met.mean_interference_per_ue = interf_steps > 0 ? interf_sum / interf_steps : 0.0;
    return met;
}

} // namespace udn
