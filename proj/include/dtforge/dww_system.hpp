// Dispersive water wave system: flow K, linearization K_v, recursion operator Phi, residuals.
#pragma once

#include <vector>

#include "grid_calculus.hpp"

namespace dtforge {

struct DwwState {
    Field q, r;
};

struct DwwTangent {
    Field s1, s2;
};

/// w-form eigenobject: sigma = (w1_x, w2_x) solves Phi sigma = lambda sigma.
/// sigma is stored next to w so transformed potentials keep their analytic derivative.
struct EigenPotential {
    Field w1, w2, s1, s2;
    double lambda = 0.0;

    static EigenPotential from_w(const Field& w1, const Field& w2, double lambda) {
        return {w1, w2, diff(w1), diff(w2), lambda};
    }
    const Field& sigma1() const { return s1; }
    const Field& sigma2() const { return s2; }
    DwwTangent sigma() const { return {s1, s2}; }
    const Grid& grid() const { return w1.grid(); }
    EigenPotential scaled(double k) const { return {w1 * k, w2 * k, s1 * k, s2 * k, lambda}; }
};

using DwwSeries = std::vector<DwwState>;

inline DwwTangent dww_rhs(const DwwState& v) {
    const auto& [q, r] = v;
    return {0.5 * diff(2.0 * q * r - diff(q)), 0.5 * diff(diff(r) + r * r + 2.0 * q)};
}

inline DwwTangent dww_linearized_rhs(const DwwState& v, const DwwTangent& s) {
    const auto& [q, r] = v;
    return {0.5 * diff(2.0 * s.s1 * r + 2.0 * q * s.s2 - diff(s.s1)),
            0.5 * diff(diff(s.s2) + 2.0 * r * s.s2 + 2.0 * s.s1)};
}

/// Phi(v) sigma with D^{-1} sigma2 supplied as the field P2.
inline DwwTangent apply_phi_with(const DwwState& v, const DwwTangent& s, const Field& P2) {
    const auto& [q, r] = v;
    return {-diff(s.s1) + r * s.s1 + 2.0 * q * s.s2 + diff(q) * P2, 2.0 * s.s1 + diff(s.s2) + diff(r * P2)};
}

inline DwwTangent apply_phi(const DwwState& v, const DwwTangent& s, double c_inv) {
    return apply_phi_with(v, s, antiderivative(s.s2, c_inv));
}

inline double dww_eigen_residual(const DwwState& v, const DwwTangent& s, double lambda, double c_inv) {
    const auto p = apply_phi(v, s, c_inv);
    return pair_rel(p.s1 - lambda * s.s1, p.s2 - lambda * s.s2, s.s1, s.s2);
}

/// Stationary w-system residual (Phi sigma = lambda sigma with D^{-1} sigma2 = w2).
inline double dww_eigen_residual_w(const DwwState& v, const EigenPotential& e) {
    const auto p = apply_phi_with(v, e.sigma(), e.w2);
    return pair_rel(p.s1 - e.lambda * e.s1, p.s2 - e.lambda * e.s2, e.s1, e.s2);
}

/// Right-hand side of the w-form time system:
/// w1_t = r w1_x + q w2_x - w1_xx/2, w2_t = w2_xx/2 + r w2_x + w1_x.
inline DwwTangent dww_w_time_rhs(const DwwState& v, const EigenPotential& e) {
    const auto& [q, r] = v;
    return {r * e.s1 + q * e.s2 - 0.5 * diff(e.s1), 0.5 * diff(e.s2) + r * e.s2 + e.s1};
}

inline void require_series(std::size_t count, const char* where) {
    if (count < 5) throw Error(ErrorKind::Precondition, std::string(where) + ": need at least 5 time samples");
}

/// max over interior times of the relative mismatch between the 5-point time derivative and K(v).
inline double dww_pde_residual(const DwwSeries& series, double dt) {
    require_series(series.size(), "dww_pde_residual");
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < series.size(); ++i) {
        const auto qt = time_derivative5(series[i - 2].q, series[i - 1].q, series[i + 1].q, series[i + 2].q, dt);
        const auto rt = time_derivative5(series[i - 2].r, series[i - 1].r, series[i + 1].r, series[i + 2].r, dt);
        const auto K = dww_rhs(series[i]);
        worst = std::max(worst, pair_rel(qt - K.s1, rt - K.s2, K.s1, K.s2));
    }
    return worst;
}

/// w-form time residual of an eigenpotential series attached to a state series.
inline double dww_eigen_time_residual(const DwwSeries& states, const std::vector<EigenPotential>& eigs, double dt) {
    require_series(states.size(), "dww_eigen_time_residual");
    if (eigs.size() != states.size()) throw Error(ErrorKind::Precondition, "dww_eigen_time_residual: length mismatch");
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < states.size(); ++i) {
        const auto w1t = time_derivative5(eigs[i - 2].w1, eigs[i - 1].w1, eigs[i + 1].w1, eigs[i + 2].w1, dt);
        const auto w2t = time_derivative5(eigs[i - 2].w2, eigs[i - 1].w2, eigs[i + 1].w2, eigs[i + 2].w2, dt);
        const auto R = dww_w_time_rhs(states[i], eigs[i]);
        worst = std::max(worst, pair_rel(w1t - R.s1, w2t - R.s2, R.s1, R.s2));
    }
    return worst;
}

/// sigma-form time residual sigma_t = K_v sigma.
inline double dww_sigma_time_residual(const DwwSeries& states, const std::vector<DwwTangent>& sig, double dt) {
    require_series(states.size(), "dww_sigma_time_residual");
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < states.size(); ++i) {
        const auto s1t = time_derivative5(sig[i - 2].s1, sig[i - 1].s1, sig[i + 1].s1, sig[i + 2].s1, dt);
        const auto s2t = time_derivative5(sig[i - 2].s2, sig[i - 1].s2, sig[i + 1].s2, sig[i + 2].s2, dt);
        const auto R = dww_linearized_rhs(states[i], sig[i]);
        worst = std::max(worst, pair_rel(s1t - R.s1, s2t - R.s2, R.s1, R.s2));
    }
    return worst;
}

inline void require_regular_w2(const EigenPotential& e, const char* where) {
    check_denominator(e.w2, abs(e.w1) + abs(e.s2), 1e-8, where);
}

/// r = lambda - (w2_x + 2 w1)/w2
inline Field reconstruct_r_from_eigen(const EigenPotential& e) {
    require_regular_w2(e, "reconstruct_r_from_eigen");
    return e.lambda - (e.s2 + 2.0 * e.w1) / e.w2;
}

/// q = (w1_x w2 + w1^2)/w2^2
inline Field reconstruct_q_from_eigen(const EigenPotential& e) {
    require_regular_w2(e, "reconstruct_q_from_eigen");
    return (e.s1 * e.w2 + e.w1 * e.w1) / (e.w2 * e.w2);
}

}  // namespace dtforge
