#pragma once

namespace udn {

// Physical and model constants of the power-control game.
struct MfgParams {
    double omega = 1.0;          // bandwidth scale on log2 rates
    double sigma2 = 1.0;         // noise power
    double eta = 1.0;            // interferer density factor
    double p_max = 20.0;         // transmit power ceiling
    double p0 = 1.0;             // circuit power
    double a_bar = 0.2;          // mean arrival rate (bits per unit time)
    double terminal_coeff = 4.0; // weight of the -coeff*exp(q) terminal value
    double mean_gain = 1.0;      // mean serving-channel power gain
    double viscosity_eps = 1e-3; // artificial diffusion

    bool valid() const {
        return omega > 0 && sigma2 > 0 && eta > 0 && p_max >= 0 && p0 > 0 &&
               a_bar >= 0 && mean_gain > 0 && viscosity_eps >= 0;
    }
};

// Damped fixed-point iteration controls.
struct PicardConfig {
    double tol = 1e-5;
    int max_iter = 200;
    double damping = 0.5; // relaxation weight on the density update

    bool valid() const { return tol > 0 && max_iter >= 1 && damping > 0 && damping <= 1; }
};

} // namespace udn
