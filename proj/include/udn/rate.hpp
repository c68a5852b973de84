#pragma once

#include <cmath>

#include "udn/grid.hpp"
#include "udn/params.hpp"

namespace udn {

inline double log2_1p(double x) { return std::log1p(x) * 1.4426950408889634; }

// Shannon rate of a scheduled link: omega * log2(1 + p*gain / (I + sigma2)).
// lambda is the 0/1 scheduling indicator.
inline double data_rate(double p, double gain, double interference, double lambda,
                        const MfgParams& prm) {
    if (lambda == 0.0 || p == 0.0) return 0.0;
    return prm.omega * lambda * log2_1p(p * gain / (interference + prm.sigma2));
}

// Rate achieved by the generic transmitter against the mean field.
inline double mean_rate(double p, double interference, const MfgParams& prm) {
    return prm.omega * log2_1p(p * prm.mean_gain / (interference + prm.sigma2));
}

// Energy efficiency: bits per unit total power.
inline double ee_utility(double rate, double p, const MfgParams& prm) {
    return rate / (p + prm.p0);
}

// Mean-field interference eta * integral of p(q)*mean_gain*rho(q) dq.
inline double mf_interference(const double* rho_row, const double* policy_row, int n_q,
                              double dq, const MfgParams& prm) {
    double s = 0.5 * (rho_row[0] * policy_row[0] + rho_row[n_q - 1] * policy_row[n_q - 1]);
    for (int i = 1; i < n_q - 1; ++i) s += rho_row[i] * policy_row[i];
    return prm.eta * prm.mean_gain * s * dq;
}

inline double mf_interference(const Vec& rho_row, const Vec& policy_row, double dq,
                              const MfgParams& prm) {
    return mf_interference(rho_row.data(), policy_row.data(), (int)rho_row.size(), dq, prm);
}

} // namespace udn
