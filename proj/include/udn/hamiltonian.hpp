#pragma once

#include <array>
#include <cmath>

#include "udn/params.hpp"
#include "udn/rate.hpp"

namespace udn {

// Admissible-drift restriction at the state-space walls: trajectories cannot
// leave [0, q_max], so the wall Hamiltonians only see the inward drift part.
enum class DriftClip { none, non_negative, non_positive };

inline double clip_drift(double d, DriftClip c) {
    switch (c) {
        case DriftClip::non_negative: return d > 0.0 ? d : 0.0;
        case DriftClip::non_positive: return d < 0.0 ? d : 0.0;
        default: return d;
    }
}

// H(p) = clip(a_bar - r(p)) * g + r(p)/(p + p0) with r the mean-field rate.
inline double hamiltonian_value(double p, double g, double interference,
                                const MfgParams& prm, DriftClip c = DriftClip::none) {
    const double r = mean_rate(p, interference, prm);
    return clip_drift(prm.a_bar - r, c) * g + r / (p + prm.p0);
}

struct HamOpt {
    double p;
    double h;
};

inline constexpr int kHamScan = 64;
inline constexpr int kHamGolden = 18;
inline constexpr double kGoldenRatio = 0.6180339887498949;

// Per-interference cache of the scan grid: drift and efficiency terms are
// node-independent, so a sweep reuses one table across all space nodes.
struct HamTable {
    double interference;
    const MfgParams* prm;
    std::array<double, kHamScan> p, drift, eff;
};

inline HamTable make_ham_table(double interference, const MfgParams& prm) {
    HamTable t;
    t.interference = interference;
    t.prm = &prm;
    const double step = prm.p_max / (kHamScan - 1);
    for (int k = 0; k < kHamScan; ++k) {
        const double p = (k == kHamScan - 1) ? prm.p_max : k * step;
        const double r = mean_rate(p, interference, prm);
        t.p[k] = p;
        t.drift[k] = prm.a_bar - r;
        t.eff[k] = r / (p + prm.p0);
    }
    return t;
}

// Coarse 64-point scan followed by golden-section refinement of the bracket
// around the scan argmax; ties resolve toward smaller p.
inline HamOpt maximize_hamiltonian(const HamTable& t, double g, DriftClip c) {
    int k = 0;
    double hk = clip_drift(t.drift[0], c) * g + t.eff[0];
    for (int i = 1; i < kHamScan; ++i) {
        const double h = clip_drift(t.drift[i], c) * g + t.eff[i];
        if (h > hk) { hk = h; k = i; }
    }
    const MfgParams& prm = *t.prm;
    const double I = t.interference;
    auto H = [&](double p) { return hamiltonian_value(p, g, I, prm, c); };

    double a = t.p[k > 0 ? k - 1 : 0];
    double b = t.p[k < kHamScan - 1 ? k + 1 : kHamScan - 1];
    double x1 = b - kGoldenRatio * (b - a);
    double x2 = a + kGoldenRatio * (b - a);
    double f1 = H(x1), f2 = H(x2);
    for (int it = 0; it < kHamGolden; ++it) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGoldenRatio * (b - a);
            f1 = H(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGoldenRatio * (b - a);
            f2 = H(x2);
        }
    }
    double pm = f1 >= f2 ? x1 : x2;
    double hm = f1 >= f2 ? f1 : f2;
    if (hm > hk) return {pm, hm};
    return {t.p[k], hk};
}

// One-off maximization over p in [0, p_max].
inline HamOpt hamiltonian_maximize(double dgamma_dq, double interference,
                                   const MfgParams& prm, DriftClip c = DriftClip::none) {
    const HamTable t = make_ham_table(interference, prm);
    return maximize_hamiltonian(t, dgamma_dq, c);
}

} // namespace udn
