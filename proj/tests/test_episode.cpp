#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "udn/episode.hpp"

using namespace udn;

namespace {
Topology small_topo() { return generate_topology(4, 3.0, 2, 21); }
ChannelGains small_gains(const Topology& t) { return compute_gains(t, MfgParams{}, 3.0, 4.0, 22); }

// hand-built surfaces: constant power, uniform density, fixed interference
MfgSolution flat_solution(double policy_val) {
    MfgSolution sol;
    sol.grid = SolverGrid{21, 21};
    sol.params = MfgParams{};
    sol.gamma = Surface(21, 21, 0.0);
    sol.policy = Surface(21, 21, policy_val);
    sol.rho = Surface(21, 21, 1.0);
    sol.interference.assign(21, 2.0);
    return sol;
}

SimParams short_sim(int n_slots, int warmup) {
    SimParams sim;
    sim.n_slots = n_slots;
    sim.warmup_slots = warmup;
    sim.updates_per_slot = 20;
    return sim;
}

bool same_metrics(const EpisodeMetrics& a, const EpisodeMetrics& b) {
    return a.bits_transmitted == b.bits_transmitted && a.energy_consumed == b.energy_consumed &&
           a.bits_arrived == b.bits_arrived && a.bits_dropped == b.bits_dropped &&
           a.backlog_window_start == b.backlog_window_start && a.backlog_end == b.backlog_end &&
           a.mean_interference_per_ue == b.mean_interference_per_ue &&
           a.ue_drop_fraction == b.ue_drop_fraction && a.per_sbs_bits == b.per_sbs_bits &&
           a.per_sbs_energy == b.per_sbs_energy;
}
}

TEST_CASE("bit conservation with the window open from the start") {
    const Topology t = small_topo();
    const ChannelGains cg = small_gains(t);
    const MfgSolution sol = flat_solution(5.0);
    const MfgParams prm;
    for (PolicyKind pk : {PolicyKind::proposed, PolicyKind::baseline}) {
        const EpisodeMetrics m =
            run_episode(t, cg, pk, &sol, short_sim(50, 0), prm, 314);
        CHECK(m.backlog_window_start == 0.0);
        const double lhs = m.bits_arrived;
        const double rhs = m.bits_transmitted + m.bits_dropped + m.backlog_end;
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-9));
        CHECK(m.bits_arrived > 0.0);
    }
}

TEST_CASE("bit conservation across a warm-up boundary") {
    const Topology t = small_topo();
    const ChannelGains cg = small_gains(t);
    const MfgSolution sol = flat_solution(5.0);
    const MfgParams prm;
    for (PolicyKind pk : {PolicyKind::proposed, PolicyKind::baseline}) {
        const EpisodeMetrics m =
            run_episode(t, cg, pk, &sol, short_sim(60, 20), prm, 315);
        const double lhs = m.backlog_window_start + m.bits_arrived;
        const double rhs = m.bits_transmitted + m.bits_dropped + m.backlog_end;
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("arrivals are policy-independent for a common seed") {
    const Topology t = small_topo();
    const ChannelGains cg = small_gains(t);
    const MfgSolution sol = flat_solution(5.0);
    const MfgParams prm;
    const SimParams sim = short_sim(30, 0);
    const EpisodeMetrics a = run_episode(t, cg, PolicyKind::proposed, &sol, sim, prm, 42);
    const EpisodeMetrics b = run_episode(t, cg, PolicyKind::baseline, nullptr, sim, prm, 42);
    CHECK(a.bits_arrived == b.bits_arrived);
}

TEST_CASE("fixed-power energy matches the closed-form replay") {
    const Topology t = small_topo();
    const ChannelGains cg = small_gains(t);
    const MfgParams prm;
    const SimParams sim = short_sim(25, 5);
    const EpisodeMetrics m = run_episode(t, cg, PolicyKind::baseline, nullptr, sim, prm, 7);

    const double dt = sim.slot_T / sim.updates_per_slot;
    double replay = 0.0;
    for (int s = sim.warmup_slots; s < sim.n_slots; ++s)
        for (int u = 0; u < sim.updates_per_slot; ++u)
            for (int b = 0; b < t.n_sbs; ++b) replay += (sim.fixed_power + prm.p0) * dt;
    CHECK(m.energy_consumed == replay);
}

TEST_CASE("episodes are deterministic in every reported field") {
    const Topology t = small_topo();
    const ChannelGains cg = small_gains(t);
    const MfgSolution sol = flat_solution(7.5);
    const MfgParams prm;
    const SimParams sim = short_sim(40, 10);
    const EpisodeMetrics a = run_episode(t, cg, PolicyKind::proposed, &sol, sim, prm, 99);
    const EpisodeMetrics b = run_episode(t, cg, PolicyKind::proposed, &sol, sim, prm, 99);
    CHECK(same_metrics(a, b));
    const EpisodeMetrics c = run_episode(t, cg, PolicyKind::baseline, nullptr, sim, prm, 99);
    const EpisodeMetrics d = run_episode(t, cg, PolicyKind::baseline, nullptr, sim, prm, 99);
    CHECK(same_metrics(c, d));
}

TEST_CASE("energy stays inside the per-step circuit and peak-power bounds") {
    const Topology t = small_topo();
    const ChannelGains cg = small_gains(t);
    const MfgSolution sol = flat_solution(7.5);
    const MfgParams prm;
    const SimParams sim = short_sim(40, 10);
    const EpisodeMetrics m = run_episode(t, cg, PolicyKind::proposed, &sol, sim, prm, 99);
    const double dt = sim.slot_T / sim.updates_per_slot;
    const double steps = (sim.n_slots - sim.warmup_slots) * (double)sim.updates_per_slot * t.n_sbs;
    CHECK(m.energy_consumed >= prm.p0 * steps * dt - 1e-9);
    CHECK(m.energy_consumed <= (prm.p_max + prm.p0) * steps * dt + 1e-9);
}

TEST_CASE("isolated saturated link transmits at the clean-channel rate") {
    // one cell, one user, unit gain, fixed power 10: every window step should
    // drain exactly log2(1 + 10) * dt once the queue never runs empty.
    Topology t;
    t.n_sbs = 1;
    t.load_k = 1;
    t.isd = 4.0;
    t.side = 4.0;
    t.sbs_positions = {{0.0, 0.0}};
    t.ue_positions = {{1.0, 0.0}};
    t.association = {{0}};
    ChannelGains cg;
    cg.n_sbs = 1;
    cg.n_ue = 1;
    cg.g = {1.0};

    MfgParams prm;
    prm.a_bar = 100.0; // heavy offered load keeps the queue backlogged
    SimParams sim = short_sim(10, 5);
    sim.queue_capacity = 50.0;

    const EpisodeMetrics m = run_episode(t, cg, PolicyKind::baseline, nullptr, sim, prm, 77);
    const double dt = sim.slot_T / sim.updates_per_slot;
    const int window_steps = (sim.n_slots - sim.warmup_slots) * sim.updates_per_slot;
    const double expect = std::log2(11.0) * dt * window_steps;
    CHECK(m.bits_transmitted == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("no traffic means no service and a clean outage ratio") {
    const Topology t = small_topo();
    const ChannelGains cg = small_gains(t);
    const MfgSolution sol = flat_solution(5.0);
    MfgParams prm;
    prm.a_bar = 0.0;
    const EpisodeMetrics m =
        run_episode(t, cg, PolicyKind::proposed, &sol, short_sim(10, 0), prm, 1);
    CHECK(m.bits_arrived == 0.0);
    CHECK(m.bits_transmitted == 0.0);
    CHECK(m.bits_dropped == 0.0);
    CHECK(m.outage() == 0.0);
    CHECK(m.ue_drop_fraction == 0.0);
}

TEST_CASE("mirror-symmetric two-cell layout reports the symmetric interference") {
    Topology t;
    t.n_sbs = 2;
    t.load_k = 1;
    t.isd = 4.0;
    t.side = 8.0;
    t.sbs_positions = {{0.0, 0.0}, {4.0, 0.0}};
    t.ue_positions = {{1.0, 0.0}, {3.0, 0.0}};
    t.association = {{0}, {1}};
    ChannelGains cg;
    cg.n_sbs = 2;
    cg.n_ue = 2;
    const double cross = 1.0 / 27.0; // distance 3, cubic decay
    cg.g = {1.0, cross, cross, 1.0};

    const MfgParams prm;
    const SimParams sim = short_sim(4, 0);
    const EpisodeMetrics m = run_episode(t, cg, PolicyKind::baseline, nullptr, sim, prm, 5);
    // both users see exactly fixed_power * cross at every step
    CHECK(m.mean_interference_per_ue == Catch::Approx(sim.fixed_power * cross).epsilon(1e-12));
}

TEST_CASE("wider site spacing weakens the received interference") {
    const std::vector<double> isds = {2.5, 3.5, 4.5, 5.75};
    const MfgParams prm;
    SimParams sim;
    sim.n_slots = 2;
    sim.warmup_slots = 0;
    sim.updates_per_slot = 10;
    Vec mean_i;
    for (double isd : isds) {
        double acc = 0.0;
        for (int r = 0; r < 20; ++r) {
            const Topology t = generate_topology(16, isd, 2, 1000 + r);
            const ChannelGains cg = compute_gains(t, prm, 3.0, 4.0, 2000 + r);
            acc += run_episode(t, cg, PolicyKind::baseline, nullptr, sim, prm, 3000 + r)
                       .mean_interference_per_ue;
        }
        mean_i.push_back(acc / 20.0);
    }
    for (size_t i = 0; i + 1 < mean_i.size(); ++i) CHECK(mean_i[i] > mean_i[i + 1]);
}

TEST_CASE("ratio-based pick examples") {
    CHECK(pf_schedule({1.0, 1.0}, {2.0, 1.0}) == 0);
    CHECK(pf_schedule({2.0, 1.0}, {2.0, 2.0}) == 1);
    CHECK(pf_schedule({0.0, 0.0}, {1.0, 1.0}) == 0); // floored tie goes low
}

TEST_CASE("decision log covers every cell every slot") {
    const Topology t = small_topo();
    const ChannelGains cg = small_gains(t);
    const MfgSolution sol = flat_solution(5.0);
    const MfgParams prm;
    const SimParams sim = short_sim(12, 3);
    std::vector<DecisionLogRow> log;
    run_episode(t, cg, PolicyKind::proposed, &sol, sim, prm, 8, &log);
    REQUIRE((int)log.size() == sim.n_slots * t.n_sbs);
    for (const auto& row : log) {
        CHECK(row.slot >= 0);
        CHECK(row.slot < sim.n_slots);
        CHECK(row.sbs_id >= 0);
        CHECK(row.sbs_id < t.n_sbs);
        CHECK(t.serving_sbs(row.ue_id) == row.sbs_id);
        CHECK(row.q >= 0.0);
        CHECK(row.q <= sim.queue_capacity);
        CHECK(row.r_hat >= 0.0);
    }
    // slots appear in order, all cells within each slot
    for (size_t i = 0; i < log.size(); ++i) {
        CHECK(log[i].slot == (int)(i / t.n_sbs));
        CHECK(log[i].sbs_id == (int)(i % t.n_sbs));
    }
}

TEST_CASE("episode preconditions") {
    const Topology t = small_topo();
    const ChannelGains cg = small_gains(t);
    const MfgParams prm;
    CHECK_THROWS_AS(run_episode(t, cg, PolicyKind::proposed, nullptr, short_sim(10, 0), prm, 1),
                    std::invalid_argument);
    SimParams bad = short_sim(10, 10); // warm-up swallows the whole episode
    CHECK_THROWS_AS(run_episode(t, cg, PolicyKind::baseline, nullptr, bad, prm, 1), ConfigError);
}
