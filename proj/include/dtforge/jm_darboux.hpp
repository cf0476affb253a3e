// Direct Darboux transformation of the JM system, with conversions to and from DWW eigenpotentials.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dww_darboux.hpp"
#include "jm_system.hpp"
#include "miura_bridge.hpp"

namespace dtforge {

/// psi with P2 = D^{-1} psi2 bound at construction.
struct JmEigenPotential {
    Field psi1, psi2, P2;
    double lambda = 0.0;

    JmTangent psi() const { return {psi1, psi2}; }
    const Grid& grid() const { return psi1.grid(); }
    JmEigenPotential scaled(double k) const { return {psi1 * k, psi2 * k, P2 * k, lambda}; }
};

/// Psi psi = lambda psi with D^{-1} psi2 = P2.
inline double jm_eigen_residual_P(const JmState& u, const JmEigenPotential& e) {
    const auto r = apply_psi_with(u, e.psi(), e.P2);
    return pair_rel(r.p1 - e.lambda * e.psi1, r.p2 - e.lambda * e.psi2, e.psi1, e.psi2);
}

/// Checked constructor: diff(P2) = psi2 and D^{-1}sigma1 = (lambda - u1/2) P2 - psi2/2,
/// i.e. D((lambda - u1/2) P2 - psi2/2) equals sigma1 = psi1 - psi2_x/2 + u1 psi2/2.
inline JmEigenPotential make_jm_eigen(const JmState& u, Field psi1, Field psi2, Field P2, double lambda,
                                      double tol = 1e-6) {
    JmEigenPotential e{std::move(psi1), std::move(psi2), std::move(P2), lambda};
    const double dp = norm_rel_interior(diff(e.P2) - e.psi2, e.psi2, e.grid().margin());
    if (!(dp <= tol))
        throw Error(ErrorKind::Precondition, "make_jm_eigen: diff(P2) != psi2 (" + std::to_string(dp) + ")");
    const Field sigma1 = e.psi1 - 0.5 * diff(e.psi2) + 0.5 * u.u1 * e.psi2;
    const Field w1 = (lambda - 0.5 * u.u1) * e.P2 - 0.5 * e.psi2;
    // scaled by the eigenobject itself: sigma1 may be a small difference of large terms
    const double di = pair_rel(diff(w1) - sigma1, Field::constant(e.grid(), 0.0), e.psi1, e.psi2);
    if (!(di <= tol))
        throw Error(ErrorKind::Precondition, "make_jm_eigen: constant-binding identity fails (" + std::to_string(di) + ")");
    return e;
}

/// DWW eigenpotential at lambda -> JM eigenpotential at lambda/2 (Psi is conjugate to Phi/2).
inline JmEigenPotential jm_from_dww(const EigenPotential& e, const Field& r) {
    const auto p = eigen_map_fwd(e.sigma(), r);
    return {p.p1, p.p2, e.w2, 0.5 * e.lambda};
}

inline EigenPotential dww_from_jm(const JmEigenPotential& e, const Field& u1) {
    const auto s = eigen_map_inv(e.psi(), u1);
    const Field w1 = (e.lambda - 0.5 * u1) * e.P2 - 0.5 * e.psi2;
    return {w1, e.P2, s.s1, s.s2, 2.0 * e.lambda};
}

namespace detail {

// rho = psi2/P2 and its first two x-derivatives by the quotient rule
struct RhoDerivs {
    Field rho, rho_x, rho_xx, psi2_x;
};

// psi2_xx comes from the first row of Psi psi = lambda psi rather than a second difference
inline RhoDerivs rho_derivs(const JmState& u, const JmEigenPotential& e) {
    const Field& p = e.psi2;
    const Field& P = e.P2;
    const Field px = diff(p);
    const Field pxx = 4.0 * e.lambda * e.psi1 - 4.0 * u.u0 * p - 2.0 * diff(u.u0) * P;
    const Field num1 = px * P - p * p;
    return {p / P, num1 / (P * P), ((pxx * P - p * px) * P - 2.0 * p * num1) / (P * P * P), px};
}

struct GDerivs {
    Field G, G_x, G_xx;
};

// G = lambda1 - u1/2 + psi2,1/(2 P2,1)
inline GDerivs g_derivs(const JmState& u, const JmEigenPotential& e1, const RhoDerivs& d, double singular_rel) {
    const Field u1x = diff(u.u1);
    GDerivs g{e1.lambda - 0.5 * u.u1 + 0.5 * d.rho, -0.5 * u1x + 0.5 * d.rho_x, -0.5 * diff(u1x) + 0.5 * d.rho_xx};
    check_denominator(g.G, std::fabs(e1.lambda) + 0.5 * abs(u.u1) + 0.5 * abs(d.rho), singular_rel, "jm_aux_E");
    return g;
}

inline void require_attached_jm(const JmState& u, const JmEigenPotential& e, const DtOptions& o, const char* where) {
    if (!o.check_eigen) return;
    const double res = jm_eigen_residual_P(u, e);
    if (!(res <= o.eigen_tol))
        throw Error(ErrorKind::NotEigen, std::string(where) + ": not an eigenpotential of u (residual " +
                                             std::to_string(res) + ")");
}

}  // namespace detail

/// E = (ln G)_x computed as G_x/G.
inline Field jm_aux_E(const JmState& u, const JmEigenPotential& e1, const DtOptions& o = {}) {
    check_denominator(e1.P2, abs(e1.psi2), o.singular_rel, "jm_aux_E");
    const auto d = detail::rho_derivs(u, e1);
    const auto g = detail::g_derivs(u, e1, d, o.singular_rel);
    return g.G_x / g.G;
}

/// u1[1] = u1 + E, u0[1] = u0 + (u1/2 + psi2,1/(2 P2,1))_x + E_x/2 - E(E + 2u1)/4
inline JmState dt_jm_state(const JmState& u, const JmEigenPotential& e1, const DtOptions& o = {}) {
    detail::require_attached_jm(u, e1, o, "dt_jm_state");
    check_denominator(e1.P2, abs(e1.psi2), o.singular_rel, "dt_jm_state");
    const auto d = detail::rho_derivs(u, e1);
    const auto g = detail::g_derivs(u, e1, d, o.singular_rel);
    const Field E = g.G_x / g.G;
    const Field E_x = g.G_xx / g.G - E * E;
    return {u.u0 + 0.5 * diff(u.u1) + 0.5 * d.rho_x + 0.5 * E_x - 0.25 * E * (E + 2.0 * u.u1), u.u1 + E};
}

/// The D^{-1} term of B in psi variables:
/// B = P2,1 S - D^{-1}(psi2,1 (lambda - u1/2) P2 - psi2 (lambda1 - u1/2) P2,1), S = (lambda - u1/2) P2 - psi2/2
inline Field jm_b_integrand(const JmEigenPotential& e, const JmEigenPotential& e1, const Field& u1) {
    return e1.psi2 * (e.lambda - 0.5 * u1) * e.P2 - e.psi2 * (e1.lambda - 0.5 * u1) * e1.P2;
}

inline Field jm_aux_S(const JmEigenPotential& e, const Field& u1) { return (e.lambda - 0.5 * u1) * e.P2 - 0.5 * e.psi2; }

/// B with cB the value of the D^{-1} term at x0.
inline Field jm_aux_B(const JmEigenPotential& e, const JmEigenPotential& e1, const Field& u1, double cB) {
    return e1.P2 * jm_aux_S(e, u1) - antiderivative(jm_b_integrand(e, e1, u1), cB);
}

namespace detail {

inline JmEigenPotential jm_apply_B(const JmState& u, const JmEigenPotential& e1, const JmEigenPotential& e,
                                   const Field& Dinv, const Field& g, const Field& E) {
    const Field& u1 = u.u1;
    const Field u1x = diff(u1);
    const double mu = e1.lambda, lam = e.lambda;
    const Field psi2x = diff(e.psi2);
    const Field psi21x = diff(e1.psi2);
    const Field S = jm_aux_S(e, u1);
    const Field S_x = -0.5 * u1x * e.P2 + (lam - 0.5 * u1) * e.psi2 - 0.5 * psi2x;
    const Field B = e1.P2 * S - Dinv;
    const Field B_x = e1.psi2 * S + e1.P2 * S_x - g;
    const Field N = B + e.psi2 * e1.P2;
    const Field N_x = B_x + psi2x * e1.P2 + e.psi2 * e1.psi2;
    const Field Den = (mu - 0.5 * u1) * e1.P2 + 0.5 * e1.psi2;
    const Field Den_x = -0.5 * u1x * e1.P2 + (mu - 0.5 * u1) * e1.psi2 + 0.5 * psi21x;
    const Field F = (N_x * Den - N * Den_x) / (Den * Den);
    const Field BP_x = B_x / e1.P2 - B * e1.psi2 / (e1.P2 * e1.P2);
    return {e.psi1 - BP_x - 0.5 * diff(F) - 0.5 * (E * e.psi2 - F * (u1 + E)), e.psi2 - F, e.P2 - N / Den, lam};
}

// second row of Psi psi = lambda psi on the transformed state
inline Field jm_row2(const JmState& u, const JmEigenPotential& e) {
    return e.psi1 + 0.5 * u.u1 * e.psi2 + 0.5 * diff(u.u1 * e.P2) - e.lambda * e.psi2;
}

}  // namespace detail

/// Transformed JM eigenpotential at e.lambda attached to dt_jm_state(u, e1).
/// cB is the value of B's D^{-1} term at x0; when absent it is fixed by requiring the
/// transformed pair to satisfy the eigen equation (the residual is affine in the constant).
inline JmEigenPotential dt_jm_eigen(const JmState& u, const JmEigenPotential& e1, const JmEigenPotential& e,
                                    std::optional<double> cB = std::nullopt, const DtOptions& o = {}) {
    if (std::fabs(e.lambda - e1.lambda) <= 1e-12 * std::max(1.0, std::fabs(e1.lambda)))
        throw Error(ErrorKind::Degenerate, "dt_jm_eigen: degenerate transformation unsupported (lambda = lambda1)");
    detail::require_attached_jm(u, e1, o, "dt_jm_eigen");
    detail::require_attached_jm(u, e, o, "dt_jm_eigen");
    const Field Den = (e1.lambda - 0.5 * u.u1) * e1.P2 + 0.5 * e1.psi2;
    check_denominator(Den, abs(e1.lambda * e1.P2) + abs(u.u1 * e1.P2) + abs(e1.psi2), o.singular_rel, "dt_jm_eigen");
    const Field E = jm_aux_E(u, e1, o);
    const Field g = jm_b_integrand(e, e1, u.u1);
    if (cB) return detail::jm_apply_B(u, e1, e, antiderivative(g, *cB), g, E);

    const Grid& grid = e.grid();
    const Field D0 = antiderivative_anchored(g, grid.n / 2, 0.0);
    const JmState u_new = dt_jm_state(u, e1, o);
    const auto t0 = detail::jm_apply_B(u, e1, e, D0, g, E);
    const auto t1 = detail::jm_apply_B(u, e1, e, D0 + 1.0, g, E);
    const Field R0 = detail::jm_row2(u_new, t0);
    const Field R1 = detail::jm_row2(u_new, t1) - R0;
    const Field scale = abs(t0.psi1) + abs(e.lambda * t0.psi2) + abs(u_new.u1 * t0.psi2) +
                        abs(diff(u_new.u1 * t0.P2));
    double num = 0.0, den = 0.0;
    const int m = grid.margin();
    for (int i = m; i < grid.n - m; ++i) {
        const double w = 1.0 / (scale[i] * scale[i]);
        num += R0[i] * R1[i] * w;
        den += R1[i] * R1[i] * w;
    }
    return detail::jm_apply_B(u, e1, e, D0 + (-num / den), g, E);
}

/// Successive direct JM DTs, mirroring dt_iterate.
inline JmState dt_jm_iterate(const JmState& u0, std::vector<JmEigenPotential> eigs, const DtOptions& o = {}) {
    JmState u = u0;
    std::size_t level = 0;
    while (!eigs.empty()) {
        try {
            std::vector<JmEigenPotential> next;
            for (std::size_t k = 1; k < eigs.size(); ++k) next.push_back(dt_jm_eigen(u, eigs.front(), eigs[k], std::nullopt, o));
            u = dt_jm_state(u, eigs.front(), o);
            eigs = std::move(next);
        } catch (const Error& err) {
            throw Error(err.kind(), "dt_jm_iterate step " + std::to_string(level) + ": " + err.what());
        }
        ++level;
    }
    return u;
}

}  // namespace dtforge
