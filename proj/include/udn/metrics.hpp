#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "udn/episode.hpp"

namespace udn {

// Mean and sample standard deviation (n-1 denominator; 0 for a single run).
struct Stat {
    double mean = 0.0;
    double stddev = 0.0;
};

inline Stat stat_of(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("stat_of: empty sample");
    Stat s;
    for (double x : xs) s.mean += x;
    s.mean /= xs.size();
    if (xs.size() > 1) {
        double acc = 0.0;
        for (double x : xs) acc += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(acc / (xs.size() - 1));
    }
    return s;
}

struct MetricSummary {
    int n_runs = 0;
    Stat ee;
    Stat outage;
    Stat ue_drop_fraction;
    Stat bits_transmitted;
    Stat energy_consumed;
};

inline MetricSummary aggregate_metrics(const std::vector<EpisodeMetrics>& runs) {
    if (runs.empty()) throw std::invalid_argument("aggregate_metrics: no runs");
    std::vector<double> ee, outage, dropf, bits, energy;
    for (const auto& r : runs) {
        ee.push_back(r.ee());
        outage.push_back(r.outage());
        dropf.push_back(r.ue_drop_fraction);
        bits.push_back(r.bits_transmitted);
        energy.push_back(r.energy_consumed);
    }
    MetricSummary s;
    s.n_runs = (int)runs.size();
    s.ee = stat_of(ee);
    s.outage = stat_of(outage);
    s.ue_drop_fraction = stat_of(dropf);
    s.bits_transmitted = stat_of(bits);
    s.energy_consumed = stat_of(energy);
    return s;
}

// (proposed - baseline) / baseline
inline double relative_ee_gain(double baseline_ee, double proposed_ee) {
    return (proposed_ee - baseline_ee) / baseline_ee;
}

// (baseline - proposed) / baseline
inline double relative_outage_reduction(double baseline_outage, double proposed_outage) {
    return (baseline_outage - proposed_outage) / baseline_outage;
}

// Exact one-sided binomial tail P(W >= wins | n, 1/2). Safe for n <= ~1000.
inline double binomial_tail_pvalue(int wins, int n) {
    if (n < 0 || wins < 0 || wins > n) throw std::invalid_argument("binomial_tail_pvalue: bad args");
    if (n == 0) return 1.0;
    double coef = 1.0; // C(n, k) built up incrementally
    double sum = 0.0;
    for (int kk = 0; kk <= n; ++kk) {
        if (kk >= wins) sum += coef;
        coef = coef * (n - kk) / (kk + 1);
    }
    return sum * std::pow(0.5, n);
}

struct SignTestResult {
    int n_pairs = 0;  // ties dropped
    int wins = 0;     // pairs where the first sample is strictly smaller
    double p_value = 1.0;
};

// Paired one-sided sign test for "a < b": counts pairs with a[i] < b[i],
// drops exact ties, and reports the exact binomial tail p-value.
inline SignTestResult sign_test_less(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sign_test_less: length mismatch");
    SignTestResult r;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) continue;
        ++r.n_pairs;
        if (a[i] < b[i]) ++r.wins;
    }
    r.p_value = binomial_tail_pvalue(r.wins, r.n_pairs);
    return r;
}

} // namespace udn
