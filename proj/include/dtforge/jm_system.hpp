// Jaulent-Miodek system: local flow H(u), linearization H_u, recursion operator Psi, residuals.
#pragma once

#include <vector>

#include "grid_calculus.hpp"

namespace dtforge {

struct JmState {
    Field u0, u1;
};

struct JmTangent {
    Field p1, p2;
};

using JmSeries = std::vector<JmState>;

/// H(u) = (u1_xxx/4 + u0 u1_x/2 + (u0 u1)_x/2, u0_x + 3/2 u1 u1_x)
inline JmTangent jm_rhs(const JmState& u) {
    const auto& [u0, u1] = u;
    const Field u1x = diff(u1);
    return {0.25 * diff(u1, 3) + 0.5 * u0 * u1x + 0.5 * diff(u0 * u1), diff(u0) + 1.5 * u1 * u1x};
}

inline JmTangent jm_linearized_rhs(const JmState& u, const JmTangent& p) {
    const auto& [u0, u1] = u;
    return {0.25 * diff(p.p2, 3) + 0.5 * (p.p1 * diff(u1) + u0 * diff(p.p2)) + 0.5 * diff(p.p1 * u1 + u0 * p.p2),
            diff(p.p1) + 1.5 * diff(u1 * p.p2)};
}

/// Psi(u) psi with D^{-1} psi2 supplied as P2:
/// ((D^3/4 + u0 D/2 + D u0/2) P2, psi1 + (u1 D/2 + D u1/2) P2)
inline JmTangent apply_psi_with(const JmState& u, const JmTangent& p, const Field& P2) {
    const auto& [u0, u1] = u;
    return {0.25 * diff(p.p2, 2) + 0.5 * u0 * p.p2 + 0.5 * diff(u0 * P2),
            p.p1 + 0.5 * u1 * p.p2 + 0.5 * diff(u1 * P2)};
}

inline JmTangent apply_psi(const JmState& u, const JmTangent& p, double c_inv) {
    return apply_psi_with(u, p, antiderivative(p.p2, c_inv));
}

inline double jm_eigen_residual(const JmState& u, const JmTangent& p, double lambda, double c_inv) {
    const auto r = apply_psi(u, p, c_inv);
    return pair_rel(r.p1 - lambda * p.p1, r.p2 - lambda * p.p2, p.p1, p.p2);
}

inline double jm_pde_residual(const JmSeries& series, double dt) {
    if (series.size() < 5) throw Error(ErrorKind::Precondition, "jm_pde_residual: need at least 5 time samples");
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < series.size(); ++i) {
        const auto a = time_derivative5(series[i - 2].u0, series[i - 1].u0, series[i + 1].u0, series[i + 2].u0, dt);
        const auto b = time_derivative5(series[i - 2].u1, series[i - 1].u1, series[i + 1].u1, series[i + 2].u1, dt);
        const auto H = jm_rhs(series[i]);
        worst = std::max(worst, pair_rel(a - H.p1, b - H.p2, H.p1, H.p2));
    }
    return worst;
}

/// psi_t = H_u psi, 5-sample time differences.
inline double jm_tangent_time_residual(const JmSeries& states, const std::vector<JmTangent>& ps, double dt) {
    if (states.size() < 5 || ps.size() != states.size())
        throw Error(ErrorKind::Precondition, "jm_tangent_time_residual: need >= 5 matching samples");
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < states.size(); ++i) {
        const auto a = time_derivative5(ps[i - 2].p1, ps[i - 1].p1, ps[i + 1].p1, ps[i + 2].p1, dt);
        const auto b = time_derivative5(ps[i - 2].p2, ps[i - 1].p2, ps[i + 1].p2, ps[i + 2].p2, dt);
        const auto R = jm_linearized_rhs(states[i], ps[i]);
        worst = std::max(worst, pair_rel(a - R.p1, b - R.p2, R.p1, R.p2));
    }
    return worst;
}

}  // namespace dtforge
