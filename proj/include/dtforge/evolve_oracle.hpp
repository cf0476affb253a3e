// Method-of-lines RK4 integrator (spectral, filtered) and the Cole-Hopf Burgers oracle.
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "dww_system.hpp"
#include "jm_system.hpp"
#include "seeds.hpp"

namespace dtforge {

/// Static profile (with exact derivatives) subtracted from each component before evolution,
/// so fronts with different limits at the two ends can live on a periodic window.
struct Background {
    std::array<Field, 4> c1, c2;  // value, d/dx, d2/dx2, d3/dx3

    static Background zero(const Grid& g) {
        const Field z = Field::constant(g, 0.0);
        return {{z, z, z, z}, {z, z, z, z}};
    }
};

namespace detail {
inline std::array<Field, 4> tanh_profile(const Grid& g, double left, double right, double center, double width) {
    const double A = 0.5 * (right - left);
    std::vector<double> f(g.n), f1(g.n), f2(g.n), f3(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double s = (g.x(i) - center) / width;
        const double th = std::tanh(s), sh2 = 1.0 - th * th;
        f[i] = left + A * (1.0 + th);
        f1[i] = A * sh2 / width;
        f2[i] = A * (-2.0 * th * sh2) / (width * width);
        f3[i] = A * (-2.0 * sh2 * sh2 + 4.0 * th * th * sh2) / (width * width * width);
    }
    return {Field(g, f), Field(g, f1), Field(g, f2), Field(g, f3)};
}
}  // namespace detail

inline Background tanh_background(const Grid& g, double left1, double right1, double left2, double right2,
                                  double center = 0.0, double width = 1.0) {
    return {detail::tanh_profile(g, left1, right1, center, width), detail::tanh_profile(g, left2, right2, center, width)};
}

struct Trajectory {
    std::vector<double> t;
    std::vector<Field> c1, c2;  // full fields (deviation + background)
};

struct IntegrateOptions {
    double filter = 2.0 / 3.0;
    int sample_every = 1;     // steps between stored samples
    double tail_tol = 1e-10;  // max |deviation| allowed at the window edges initially
    int tail_points = 0;      // > 0 enables the embedding check (decaying data on a periodic window)
};

/// Largest stable RK4 step for the filtered semidiscrete system (linear part plus advection bound).
inline double rk4_stable_dt(System sys, const Grid& g, double filter, double max_speed) {
    const double kc = filter * (g.n / 2) * 2.0 * M_PI / g.length();
    const double rate = sys == System::DWW ? 0.5 * kc * kc + max_speed * kc : 0.25 * kc * kc * kc + max_speed * kc;
    return 2.5 / rate;
}

namespace detail {

// spectral derivatives 1..3 from a single transform
inline std::array<Field, 3> spectral_derivs(const Field& f) {
    const Grid& g = f.grid();
    const auto s = forward(f.values());
    std::array<Field, 3> out;
    for (int m = 1; m <= 3; ++m) {
        Spectrum d = s;
        for (int k = 0; k <= g.n / 2; ++k) d.c[k] *= std::pow(std::complex<double>(0.0, wavenumber(g, k)), m);
        if (m % 2 == 1) d.c[g.n / 2] = 0.0;
        out[m - 1] = Field(g, inverse(d));
    }
    return out;
}

inline std::array<Field, 2> semidiscrete_rhs(System sys, const Field& d1, const Field& d2, const Background& bg) {
    const auto D1 = spectral_derivs(d1);
    const auto D2 = spectral_derivs(d2);
    const Field a = d1 + bg.c1[0], ax = D1[0] + bg.c1[1], axx = D1[1] + bg.c1[2];
    const Field b = d2 + bg.c2[0], bx = D2[0] + bg.c2[1], bxx = D2[1] + bg.c2[2], bxxx = D2[2] + bg.c2[3];
    if (sys == System::DWW) {
        // q_t = (q r)_x - q_xx/2, r_t = r_xx/2 + r r_x + q_x
        return {ax * b + a * bx - 0.5 * axx, 0.5 * bxx + b * bx + ax};
    }
    // u0_t = u1_xxx/4 + u0 u1_x + u0_x u1/2, u1_t = u0_x + 3/2 u1 u1_x
    return {0.25 * bxxx + a * bx + 0.5 * ax * b, ax + 1.5 * b * bx};
}

}  // namespace detail

/// Classical RK4 with a sharp spectral filter each step. Returns samples at t = 0, k*sample_every*dt, ...
inline Trajectory integrate(System sys, const Field& init1, const Field& init2, double t_end, double dt,
                            const Background& bg, const IntegrateOptions& opt = {}) {
    const Grid& g = init1.grid();
    if (!g.periodic) throw Error(ErrorKind::Precondition, "integrate: periodic grid required");
    require_same_grid(init1, init2, "integrate");
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw Error(ErrorKind::Precondition, "integrate: need dt > 0, t_end >= 0");
    Field d1 = init1 - bg.c1[0], d2 = init2 - bg.c2[0];
    for (int k = 0; k < opt.tail_points; ++k) {
        const double tail = std::max({std::fabs(d1[k]), std::fabs(d1[g.n - 1 - k]), std::fabs(d2[k]),
                                      std::fabs(d2[g.n - 1 - k])});
        if (tail > opt.tail_tol)
            throw Error(ErrorKind::Precondition, "integrate: tails " + std::to_string(tail) +
                                                     " exceed the embedding tolerance");
    }
    const double speed = std::max(norm_inf(init1), norm_inf(init2));
    const double dt_max = rk4_stable_dt(sys, g, opt.filter, speed);
    if (dt > dt_max)
        throw Error(ErrorKind::Precondition, "integrate: dt = " + std::to_string(dt) + " exceeds stability bound " +
                                                 std::to_string(dt_max));
    d1 = spectral_filter(d1, opt.filter);
    d2 = spectral_filter(d2, opt.filter);
    const long steps = std::lround(t_end / dt);
    Trajectory tr;
    auto store = [&](double t) {
        tr.t.push_back(t);
        tr.c1.push_back(d1 + bg.c1[0]);
        tr.c2.push_back(d2 + bg.c2[0]);
    };
    store(0.0);
    for (long s = 1; s <= steps; ++s) {
        try {
            const auto k1 = detail::semidiscrete_rhs(sys, d1, d2, bg);
            const auto k2 = detail::semidiscrete_rhs(sys, d1 + 0.5 * dt * k1[0], d2 + 0.5 * dt * k1[1], bg);
            const auto k3 = detail::semidiscrete_rhs(sys, d1 + 0.5 * dt * k2[0], d2 + 0.5 * dt * k2[1], bg);
            const auto k4 = detail::semidiscrete_rhs(sys, d1 + dt * k3[0], d2 + dt * k3[1], bg);
            d1 = spectral_filter(d1 + (dt / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]), opt.filter);
            d2 = spectral_filter(d2 + (dt / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]), opt.filter);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NonFinite) throw;
            throw Error(ErrorKind::BlowUp, "integrate: non-finite values at step " + std::to_string(s) +
                                               " (t = " + std::to_string(s * dt) + ")");
        }
        if (s % opt.sample_every == 0) store(s * dt);
    }
    return tr;
}

/// Exact periodic solution of r_t = r_xx/2 + r r_x: with m = mean(r0), r = m + (ln phi)_x evaluated
/// at x + m t, where phi solves phi_t = phi_xx/2 and phi(0) = exp(D^{-1}(r0 - m)).
inline Field burgers_cole_hopf(const Field& r0, double t) {
    const Grid& g = r0.grid();
    if (!g.periodic) throw Error(ErrorKind::Precondition, "burgers_cole_hopf: periodic grid required");
    double m = 0.0;
    for (double v : r0.values()) m += v;
    m /= g.n;
    const Field phi0 = antiderivative(r0 - m, 0.0, true).map([](double x) { return std::exp(x); });
    auto s = detail::forward(phi0.values());
    auto sx = s;
    for (int k = 0; k <= g.n / 2; ++k) {
        const double kk = detail::wavenumber(g, k);
        const auto f = std::exp(-0.5 * kk * kk * t) * std::exp(std::complex<double>(0.0, kk * m * t));
        s.c[k] *= f;
        sx.c[k] = s.c[k] * std::complex<double>(0.0, kk);
    }
    s.c[g.n / 2] = 0.0;
    sx.c[g.n / 2] = 0.0;
    const Field phi(g, detail::inverse(s));
    const Field phix(g, detail::inverse(sx));
    for (int i = 0; i < g.n; ++i)
        if (!(phi[i] > 0.0))
            throw Error(ErrorKind::Precondition, "burgers_cole_hopf: transformed variable non-positive");
    return m + phix / phi;
}

}  // namespace dtforge
