#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "udn/episode.hpp"
#include "udn/errors.hpp"
#include "udn/grid.hpp"
#include "udn/metrics.hpp"

namespace udn {

// All files are comma-separated with a header row; numbers use '.' decimals
// at full double precision so re-reads are lossless.
namespace csv {

inline std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << body;
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

// Long-form surface dump, one row per (t, q) node.
inline std::string surface_csv(const Surface& s, const SolverGrid& g,
                               const std::string& value_name) {
    const Vec ts = g.t_nodes(), qs = g.q_nodes();
    std::ostringstream o;
    o << "t,q," << value_name << "\n";
    for (int j = 0; j < g.n_t; ++j)
        for (int i = 0; i < g.n_q; ++i)
            o << num(ts[j]) << ',' << num(qs[i]) << ',' << num(s.at(j, i)) << "\n";
    return o.str();
}

inline std::string convergence_csv(const Vec& residuals) {
    std::ostringstream o;
    o << "iteration,residual\n";
    for (size_t i = 0; i < residuals.size(); ++i)
        o << (i + 1) << ',' << num(residuals[i]) << "\n";
    return o.str();
}

struct RunRow {
    uint64_t seed;
    std::string policy;
    double isd;
    int k;
    EpisodeMetrics m;
};

inline std::string run_header() {
    return "seed,policy,isd,k,ee,outage,bits_tx,energy,bits_arrived,bits_dropped\n";
}

inline void append_run_row(std::ostringstream& o, const RunRow& r) {
    o << r.seed << ',' << r.policy << ',' << num(r.isd) << ',' << r.k << ',' << num(r.m.ee())
      << ',' << num(r.m.outage()) << ',' << num(r.m.bits_transmitted) << ','
      << num(r.m.energy_consumed) << ',' << num(r.m.bits_arrived) << ','
      << num(r.m.bits_dropped) << "\n";
}

struct SummaryRow {
    std::string policy;
    double isd;
    int k;
    MetricSummary s;
    double ee_gain_rel;           // proposed vs baseline for this (isd, k) cell
    double outage_reduction_rel;  // same value on both policy rows of a cell
};

inline std::string summary_header() {
    return "policy,isd,k,n_runs,ee_mean,ee_std,outage_mean,outage_std,"
           "bits_tx_mean,bits_tx_std,energy_mean,energy_std,"
           "ee_gain_rel,outage_reduction_rel\n";
}

inline void append_summary_row(std::ostringstream& o, const SummaryRow& r) {
    o << r.policy << ',' << num(r.isd) << ',' << r.k << ',' << r.s.n_runs << ','
      << num(r.s.ee.mean) << ',' << num(r.s.ee.stddev) << ',' << num(r.s.outage.mean) << ','
      << num(r.s.outage.stddev) << ',' << num(r.s.bits_transmitted.mean) << ','
      << num(r.s.bits_transmitted.stddev) << ',' << num(r.s.energy_consumed.mean) << ','
      << num(r.s.energy_consumed.stddev) << ',' << num(r.ee_gain_rel) << ','
      << num(r.outage_reduction_rel) << "\n";
}

inline std::string decision_log_csv(const std::vector<DecisionLogRow>& rows) {
    std::ostringstream o;
    o << "slot,sbs_id,ue_id,score,q,upsilon,r_hat\n";
    for (const auto& r : rows)
        o << r.slot << ',' << r.sbs_id << ',' << r.ue_id << ',' << num(r.score) << ','
          << num(r.q) << ',' << num(r.upsilon) << ',' << num(r.r_hat) << "\n";
    return o.str();
}

} // namespace csv
} // namespace udn
