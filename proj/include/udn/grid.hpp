#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <vector>

namespace udn {

using Vec = std::vector<double>;

// Uniform space-time discretization: q_i = i*dq on [0, q_max],
// t_j = j*dt on [0, horizon_T].
struct SolverGrid {
    int n_q = 101;
    int n_t = 101;
    double q_max = 1.0;
    double horizon_T = 1.0;

    double dq() const { return q_max / (n_q - 1); }
    double dt() const { return horizon_T / (n_t - 1); }

    Vec q_nodes() const {
        Vec q(n_q);
        for (int i = 0; i < n_q; ++i) q[i] = i * dq();
        q[n_q - 1] = q_max;
        return q;
    }
    Vec t_nodes() const {
        Vec t(n_t);
        for (int j = 0; j < n_t; ++j) t[j] = j * dt();
        t[n_t - 1] = horizon_T;
        return t;
    }
    bool valid() const { return n_q >= 3 && n_t >= 3 && q_max > 0 && horizon_T > 0; }
};

// Dense row-major (t-major) surface: value(j, i) for time node j, space node i.
struct Surface {
    int nt = 0, nq = 0;
    Vec v;

    Surface() = default;
    Surface(int nt_, int nq_, double fill = 0.0) : nt(nt_), nq(nq_), v((size_t)nt_ * nq_, fill) {}

    double& at(int j, int i) { return v[(size_t)j * nq + i]; }
    double at(int j, int i) const { return v[(size_t)j * nq + i]; }
    double* row(int j) { return v.data() + (size_t)j * nq; }
    const double* row(int j) const { return v.data() + (size_t)j * nq; }
};

// Trapezoid weights on a uniform grid: dq/2 at the walls, dq inside.
inline Vec trapezoid_weights(int n, double dq) {
    Vec w(n, dq);
    w.front() = w.back() = dq / 2.0;
    return w;
}

inline double trapezoid(const double* f, int n, double dq) {
    double s = 0.5 * (f[0] + f[n - 1]);
    for (int i = 1; i < n - 1; ++i) s += f[i];
    return s * dq;
}

inline double trapezoid(const Vec& f, double dq) {
    return trapezoid(f.data(), (int)f.size(), dq);
}

// Bilinear lookup on a surface defined over [0,T] x [0,q_max]; arguments are
// clamped onto the rectangle.
inline double bilinear(const Surface& s, const SolverGrid& g, double t, double q) {
    const double tx = std::clamp(t / g.dt(), 0.0, double(g.n_t - 1));
    const double qx = std::clamp(q / g.dq(), 0.0, double(g.n_q - 1));
    const int j0 = std::min((int)tx, g.n_t - 2);
    const int i0 = std::min((int)qx, g.n_q - 2);
    const double ft = tx - j0, fq = qx - i0;
    return (1 - ft) * ((1 - fq) * s.at(j0, i0) + fq * s.at(j0, i0 + 1)) +
           ft * ((1 - fq) * s.at(j0 + 1, i0) + fq * s.at(j0 + 1, i0 + 1));
}

} // namespace udn
