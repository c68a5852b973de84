#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "udn/errors.hpp"
#include "udn/params.hpp"
#include "udn/rng.hpp"

namespace udn {

inline constexpr double kMinIsd = 2.0;          // hard minimum site separation
inline constexpr double kCellRadius = kMinIsd / 2.0; // UE placement disk radius
inline constexpr double kDistanceFloor = 0.1;

struct Topology {
    int n_sbs = 0;
    int load_k = 0;
    double isd = 0.0;
    double side = 0.0;
    std::vector<std::array<double, 2>> sbs_positions;
    std::vector<std::array<double, 2>> ue_positions;
    std::vector<std::vector<int>> association; // per-SBS served UE indices

    int n_ue() const { return n_sbs * load_k; }
    int serving_sbs(int ue) const { return ue / load_k; }
};

// Static channel power gains, including the density normalization eta/|B|.
struct ChannelGains {
    int n_sbs = 0, n_ue = 0;
    std::vector<double> g; // row-major [sbs][ue]

    double at(int b, int m) const { return g[(size_t)b * n_ue + m]; }
    double& at(int b, int m) { return g[(size_t)b * n_ue + m]; }
};

// Uniform SBS layout in a square of side isd*sqrt(n_sbs) by rejection
// sampling with hard minimum pairwise distance 2; a long run of consecutive
// rejections restarts the layout, and the total attempt budget bounds the
// search. Each SBS then gets load_k UEs uniform in its placement disk.
inline Topology generate_topology(int n_sbs, double isd, int load_k, uint64_t seed) {
    if (n_sbs < 1) throw ConfigError("generate_topology: n_sbs must be >= 1");
    if (isd < kMinIsd) throw ConfigError("generate_topology: isd must be >= 2");
    if (load_k < 1) throw ConfigError("generate_topology: load_k must be >= 1");

    Topology topo;
    topo.n_sbs = n_sbs;
    topo.load_k = load_k;
    topo.isd = isd;
    topo.side = isd * std::sqrt((double)n_sbs);

    Rng rng(seed);
    const double min_d2 = kMinIsd * kMinIsd;
    constexpr long kMaxAttempts = 100000;
    constexpr int kRestartAfter = 2000;
    long attempts = 0;
    int consecutive_failures = 0;
    std::vector<std::array<double, 2>>& pts = topo.sbs_positions;
    while ((int)pts.size() < n_sbs) {
        if (++attempts > kMaxAttempts)
            throw ConfigError("generate_topology: placement infeasible for isd=" +
                              std::to_string(isd) + ", n_sbs=" + std::to_string(n_sbs));
        const std::array<double, 2> cand = {rng.uniform(0.0, topo.side),
                                            rng.uniform(0.0, topo.side)};
        bool ok = true;
        for (const auto& p : pts) {
            const double dx = cand[0] - p[0], dy = cand[1] - p[1];
            if (dx * dx + dy * dy < min_d2) {
                ok = false;
                break;
            }
        }
        if (ok) {
            pts.push_back(cand);
            consecutive_failures = 0;
        } else if (++consecutive_failures >= kRestartAfter) {
            pts.clear();
            consecutive_failures = 0;
        }
    }

    topo.association.resize(n_sbs);
    for (int b = 0; b < n_sbs; ++b) {
        for (int j = 0; j < load_k; ++j) {
            const double r = kCellRadius * std::sqrt(rng.uniform());
            const double a = rng.uniform(0.0, 6.283185307179586476925286766559);
            topo.ue_positions.push_back(
                {pts[b][0] + r * std::cos(a), pts[b][1] + r * std::sin(a)});
            topo.association[b].push_back((int)topo.ue_positions.size() - 1);
        }
    }
    return topo;
}

// gain[b][m] = (eta/|B|) * d^(-alpha) * s with log-normal shadowing of the
// given dB standard deviation, drawn once per link in (b, m) row-major order.
inline ChannelGains compute_gains(const Topology& topo, const MfgParams& prm,
                                  double pathloss_exponent, double shadowing_db,
                                  uint64_t seed) {
    if (pathloss_exponent <= 0) throw ConfigError("compute_gains: pathloss exponent must be > 0");
    ChannelGains cg;
    cg.n_sbs = topo.n_sbs;
    cg.n_ue = topo.n_ue();
    cg.g.resize((size_t)cg.n_sbs * cg.n_ue);
    Rng rng(seed);
    const double norm = prm.eta / topo.n_sbs;
    for (int b = 0; b < cg.n_sbs; ++b) {
        for (int m = 0; m < cg.n_ue; ++m) {
            const double dx = topo.sbs_positions[b][0] - topo.ue_positions[m][0];
            const double dy = topo.sbs_positions[b][1] - topo.ue_positions[m][1];
            const double d = std::max(std::sqrt(dx * dx + dy * dy), kDistanceFloor);
            const double shadow = std::pow(10.0, shadowing_db * rng.normal() / 10.0);
            cg.at(b, m) = norm * std::pow(d, -pathloss_exponent) * shadow;
        }
    }
    return cg;
}

} // namespace udn
