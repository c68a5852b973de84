#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "udn/config.hpp"
#include "udn/csv.hpp"
#include "udn/episode.hpp"
#include "udn/metrics.hpp"
#include "udn/mfg.hpp"
#include "udn/topology.hpp"

namespace udn {

// Per-seed stream labels so topology, fading, and traffic draws never alias.
enum : uint64_t { kStreamTopology = 0, kStreamGains = 1, kStreamArrivals = 2 };

inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 1469598103934665603ull) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

// Stable digest of a generated layout; identical inputs give identical hashes,
// which is how paired runs prove they shared a topology.
inline uint64_t topology_hash(const Topology& t, const ChannelGains& g) {
    uint64_t h = fnv1a64(t.sbs_positions.data(),
                         t.sbs_positions.size() * sizeof(std::array<double, 2>));
    h = fnv1a64(t.ue_positions.data(), t.ue_positions.size() * sizeof(std::array<double, 2>), h);
    h = fnv1a64(g.g.data(), g.g.size() * sizeof(double), h);
    return h;
}

struct CommandResult {
    bool solver_converged = true;
    int solver_iterations = 0;
    double solver_residual = 0.0;
    std::string out_dir;
};

namespace detail_run {

struct ManifestBuilder {
    nlohmann::json j;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit ManifestBuilder(const std::string& command, const ExperimentConfig& cfg) {
        j["command"] = command;
        j["config"] = serialize_config(cfg);
        j["artifacts"] = nlohmann::json::array();
    }
    void artifact(const std::string& name) { j["artifacts"].push_back(name); }
    void convergence(const MfgSolution& sol, const PicardConfig& pc) {
        j["convergence"] = {{"converged", sol.final_residual <= pc.tol},
                            {"iterations", sol.iterations_used},
                            {"final_residual", sol.final_residual}};
    }
    void finish(const std::string& dir) {
        const auto dt = std::chrono::steady_clock::now() - t0;
        j["duration_seconds"] = std::chrono::duration<double>(dt).count();
        artifact("manifest.json"); // the manifest accounts for itself too
        csv::write_file(dir + "/manifest.json", j.dump(2) + "\n");
    }
};

inline void write_artifact(ManifestBuilder& mb, const std::string& dir, const std::string& name,
                           const std::string& body) {
    csv::write_file(dir + "/" + name, body);
    mb.artifact(name);
}

inline std::string hex64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", (unsigned long long)v);
    return buf;
}

struct Cell {
    double isd;
    int k;
};

struct CellRunOutput {
    std::vector<csv::RunRow> rows;          // proposed row then baseline row per seed
    std::vector<EpisodeMetrics> proposed;
    std::vector<EpisodeMetrics> baseline;
    std::vector<uint64_t> hashes;           // one per seed
};

// Runs both policies for every seed of one (isd, k) cell; both share the
// topology, the channel draw, and the arrival stream.
inline CellRunOutput run_cell(const ExperimentConfig& cfg, const MfgSolution& sol,
                              const Cell& cell, int jobs) {
    CellRunOutput out;
    const int n = cfg.n_seeds;
    out.rows.resize(2 * n);
    out.proposed.resize(n);
    out.baseline.resize(n);
    out.hashes.resize(n);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int r = next.fetch_add(1); r < n; r = next.fetch_add(1)) {
            const uint64_t seed_r = cfg.base_seed + (uint64_t)r;
            const Topology topo = generate_topology(cfg.n_sbs, cell.isd, cell.k,
                                                    derive_seed(seed_r, kStreamTopology));
            const ChannelGains gains =
                compute_gains(topo, cfg.mfg, cfg.pathloss_exponent, cfg.shadowing_db,
                              derive_seed(seed_r, kStreamGains));
            const uint64_t arr = derive_seed(seed_r, kStreamArrivals);
            out.hashes[r] = topology_hash(topo, gains);
            out.proposed[r] =
                run_episode(topo, gains, PolicyKind::proposed, &sol, cfg.sim, cfg.mfg, arr);
            out.baseline[r] =
                run_episode(topo, gains, PolicyKind::baseline, nullptr, cfg.sim, cfg.mfg, arr);
            out.rows[2 * r] = {seed_r, "proposed", cell.isd, cell.k, out.proposed[r]};
            out.rows[2 * r + 1] = {seed_r, "baseline", cell.isd, cell.k, out.baseline[r]};
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

inline void append_cell_summary(std::ostringstream& summary, const Cell& cell,
                                const CellRunOutput& cr) {
    const MetricSummary sp = aggregate_metrics(cr.proposed);
    const MetricSummary sb = aggregate_metrics(cr.baseline);
    const double ee_gain = relative_ee_gain(sb.ee.mean, sp.ee.mean);
    const double out_red = relative_outage_reduction(sb.outage.mean, sp.outage.mean);
    csv::append_summary_row(summary, {"proposed", cell.isd, cell.k, sp, ee_gain, out_red});
    csv::append_summary_row(summary, {"baseline", cell.isd, cell.k, sb, ee_gain, out_red});
}

inline CommandResult run_cells(const ExperimentConfig& cfg, const std::string& command,
                               const std::vector<Cell>& cells, int jobs) {
    std::filesystem::create_directories(cfg.output_dir);
    ManifestBuilder mb(command, cfg);

    MfgSolution sol = solve_mfg(cfg.grid, cfg.mfg, cfg.picard);
    mb.convergence(sol, cfg.picard);

    std::ostringstream runs, summary;
    runs << csv::run_header();
    summary << csv::summary_header();
    nlohmann::json hashes = nlohmann::json::array();

    for (const Cell& cell : cells) {
        const CellRunOutput cr = run_cell(cfg, sol, cell, jobs);
        for (const auto& row : cr.rows) csv::append_run_row(runs, row);
        append_cell_summary(summary, cell, cr);
        for (int r = 0; r < cfg.n_seeds; ++r)
            hashes.push_back({{"isd", cell.isd},
                              {"k", cell.k},
                              {"seed", cfg.base_seed + (uint64_t)r},
                              {"hash", hex64(cr.hashes[r])}});
    }
    mb.j["topology_hashes"] = hashes;

    write_artifact(mb, cfg.output_dir, "config.txt", serialize_config(cfg));
    write_artifact(mb, cfg.output_dir, "convergence.csv", csv::convergence_csv(sol.residual_history));
    write_artifact(mb, cfg.output_dir, "runs.csv", runs.str());
    write_artifact(mb, cfg.output_dir, "summary.csv", summary.str());
    mb.finish(cfg.output_dir);

    CommandResult res;
    res.solver_converged = sol.final_residual <= cfg.picard.tol;
    res.solver_iterations = sol.iterations_used;
    res.solver_residual = sol.final_residual;
    res.out_dir = cfg.output_dir;
    return res;
}

} // namespace detail_run

// Solves the mean-field system and dumps the three surfaces plus the
// convergence trace. Non-convergence still writes everything; the manifest
// records the residual so callers can decide how strict to be.
inline CommandResult cmd_solve_mfg(const ExperimentConfig& cfg) {
    using namespace detail_run;
    std::filesystem::create_directories(cfg.output_dir);
    ManifestBuilder mb("solve-mfg", cfg);

    MfgSolution sol = solve_mfg(cfg.grid, cfg.mfg, cfg.picard);
    mb.convergence(sol, cfg.picard);

    write_artifact(mb, cfg.output_dir, "config.txt", serialize_config(cfg));
    write_artifact(mb, cfg.output_dir, "gamma.csv", csv::surface_csv(sol.gamma, cfg.grid, "gamma"));
    write_artifact(mb, cfg.output_dir, "rho.csv", csv::surface_csv(sol.rho, cfg.grid, "rho"));
    write_artifact(mb, cfg.output_dir, "policy.csv",
                   csv::surface_csv(sol.policy, cfg.grid, "policy"));
    write_artifact(mb, cfg.output_dir, "convergence.csv",
                   csv::convergence_csv(sol.residual_history));
    mb.finish(cfg.output_dir);

    CommandResult res;
    res.solver_converged = sol.final_residual <= cfg.picard.tol;
    res.solver_iterations = sol.iterations_used;
    res.solver_residual = sol.final_residual;
    res.out_dir = cfg.output_dir;
    return res;
}

// Both policies across the full (isd, k) grid from the config, paired per seed.
inline CommandResult cmd_compare(const ExperimentConfig& cfg, int jobs = 1) {
    using namespace detail_run;
    std::vector<Cell> cells;
    for (double isd : cfg.isd_values)
        for (int k : cfg.k_values) cells.push_back({isd, k});
    return run_cells(cfg, "compare", cells, jobs);
}

// One-dimensional sweep along "isd" or "k"; the other axis is pinned to its
// first configured value. Cells are emitted in ascending axis order.
inline CommandResult cmd_sweep(const ExperimentConfig& cfg, const std::string& axis,
                               int jobs = 1) {
    using namespace detail_run;
    std::vector<Cell> cells;
    if (axis == "isd") {
        if (cfg.isd_values.size() < 2)
            throw ConfigError("sweep axis 'isd' needs at least 2 values in sim.isd");
        std::vector<double> vals = cfg.isd_values;
        std::sort(vals.begin(), vals.end());
        for (double isd : vals) cells.push_back({isd, cfg.k_values.front()});
    } else if (axis == "k") {
        if (cfg.k_values.size() < 2)
            throw ConfigError("sweep axis 'k' needs at least 2 values in sim.k");
        std::vector<int> vals = cfg.k_values;
        std::sort(vals.begin(), vals.end());
        for (int k : vals) cells.push_back({cfg.isd_values.front(), k});
    } else {
        throw ConfigError("unknown sweep axis '" + axis + "' (expected 'isd' or 'k')");
    }
    return run_cells(cfg, "sweep", cells, jobs);
}

} // namespace udn
