// Darboux transformation of the DWW system in w-form, with the sigma-form rendering as a cross-check.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dww_system.hpp"

namespace dtforge {

struct DtOptions {
    double eigen_tol = 1e-6;     // max stationary residual for an "attached" eigenpotential
    double singular_rel = 1e-8;  // pointwise |den| >= singular_rel * |numerator scale|
    bool check_eigen = true;
};

struct DtStep {
    DwwState input;
    EigenPotential eig;
    DwwState output;
    double min_abs_w2 = 0.0;
    double min_abs_den = 0.0;
};

namespace detail {

inline void require_attached(const DwwState& v, const EigenPotential& e, const DtOptions& o, const char* where) {
    if (!o.check_eigen) return;
    const double res = dww_eigen_residual_w(v, e);
    if (!(res <= o.eigen_tol))
        throw Error(ErrorKind::NotEigen, std::string(where) + ": not an eigenpotential of v (residual " +
                                             std::to_string(res) + ")");
}

// sigma2_x from the second row of Phi sigma = lambda sigma. Differencing sigma2 itself loses
// digits where w1 and sigma2 are large and cancel in w1 + sigma2; this form is algebraic in e.
inline Field sigma2_x_from_eigen(const DwwState& v, const EigenPotential& e, const Field& P2) {
    return e.lambda * e.s2 - 2.0 * e.s1 - diff(v.r) * P2 - v.r * e.s2;
}

// shared by both renderings; P1, P2 play the role of D^{-1} sigma
inline DtStep transform(const DwwState& v, const EigenPotential& e, const Field& P1, const Field& P2,
                        const DtOptions& o, const char* where) {
    const Field s2x = sigma2_x_from_eigen(v, e, P2);
    const Field den = P1 + e.s2;
    DtStep st{v, e, {}, 0.0, 0.0};
    st.min_abs_w2 = check_denominator(P2, abs(P1) + abs(e.s2), o.singular_rel, where);
    st.min_abs_den = check_denominator(den, abs(e.s1) + abs(s2x), o.singular_rel, where);
    const Field den_x = e.s1 + s2x;
    st.output.q = v.q - (e.s1 * P2 - P1 * e.s2) / (P2 * P2);
    // (ln(den/P2))_x without taking a log
    st.output.r = v.r + den_x / den - e.s2 / P2;
    return st;
}

}  // namespace detail

/// One DT step with diagnostics.
inline DtStep dt_step(const DwwState& v, const EigenPotential& e, const DtOptions& o = {}) {
    detail::require_attached(v, e, o, "dt_state");
    return detail::transform(v, e, e.w1, e.w2, o, "dt_state");
}

/// q[1] = q - (w1/w2)_x, r[1] = r + (ln((w1 + w2_x)/w2))_x
inline DwwState dt_state(const DwwState& v, const EigenPotential& e, const DtOptions& o = {}) {
    return dt_step(v, e, o).output;
}

/// Literal sigma-form: D^{-1} sigma rebuilt by quadrature with constants w(x0).
inline DwwState dt_state_sigma_form(const DwwState& v, const EigenPotential& e, const DtOptions& o = {}) {
    detail::require_attached(v, e, o, "dt_state_sigma_form");
    const Field P1 = antiderivative(e.s1, e.w1.front());
    const Field P2 = antiderivative(e.s2, e.w2.front());
    return detail::transform(v, e, P1, P2, o, "dt_state_sigma_form").output;
}

inline Field b_integrand(const DwwTangent& s, const EigenPotential& e1) { return s.s1 * e1.w2 + s.s2 * e1.w1; }

/// B = D^{-1}(sigma1 w2,1 + sigma2 w1,1) with B(x0) = cB.
inline Field compute_B(const DwwTangent& s, const EigenPotential& e1, double cB) {
    return antiderivative(b_integrand(s, e1), cB);
}

namespace detail {

struct Transformed {
    Field w1, w2, s1, s2;
};

// w[1] and sigma[1] for a given B; sigma[1] by the quotient rule with B_x = integrand
inline Transformed apply_B(const DwwState& v, const EigenPotential& e1, const EigenPotential& e, const Field& B,
                           const Field& f) {
    const Field& W1 = e1.w1;
    const Field& W2 = e1.w2;
    const Field den = W1 + e1.s2;
    const Field den_x = e1.s1 + sigma2_x_from_eigen(v, e1, W2);
    const Field N = B + e.s2 * W2;
    const Field N_x = f + sigma2_x_from_eigen(v, e, e.w2) * W2 + e.s2 * e1.s2;
    return {e.w1 - B / W2, e.w2 - N / den, e.s1 - (f / W2 - B * e1.s2 / (W2 * W2)),
            e.s2 - (N_x * den - N * den_x) / (den * den)};
}

// The first integrated identity 2w1 + w2_x + r w2 - lambda w2 = 0 on the transformed state is
// affine in the B constant with slope (lambda - lambda1)/(w1,1 + w2,1x); weighted least squares.
inline double resolve_shift(const DwwState& v, const DwwState& v1, const EigenPotential& e1, const EigenPotential& e,
                            const Field& B0, const Field& f) {
    const Grid& g = e.grid();
    const auto t = apply_B(v, e1, e, B0, f);
    const double lam = e.lambda;
    const Field R0 = 2.0 * t.w1 + t.s2 + v1.r * t.w2 - lam * t.w2;
    const Field scale = 2.0 * abs(t.w1) + abs(t.s2) + abs(v1.r * t.w2) + std::fabs(lam) * abs(t.w2);
    const Field R1 = (lam - e1.lambda) / (e1.w1 + e1.s2);
    double num = 0.0, den = 0.0;
    const int m = g.margin();
    for (int i = m; i < g.n - m; ++i) {
        const double w = 1.0 / (scale[i] * scale[i]);
        num += R0[i] * R1[i] * w;
        den += R1[i] * R1[i] * w;
    }
    return -num / den;
}

}  // namespace detail

/// Value of B at x0 that makes dt_eigen's output an eigenpotential of dt_state(v, e1).
inline double resolve_cB(const DwwState& v, const EigenPotential& e1, const EigenPotential& e,
                         const DtOptions& o = {}) {
    const auto v1 = detail::transform(v, e1, e1.w1, e1.w2, o, "resolve_cB").output;
    const Field f = b_integrand(e.sigma(), e1);
    const Field B0 = antiderivative_anchored(f, e.grid().n / 2, 0.0);
    return B0.front() + detail::resolve_shift(v, v1, e1, e, B0, f);
}

/// Transformed eigenpotential at e.lambda attached to dt_state(v, e1).
/// cB is B(x0); when absent it is resolved by resolve_cB.
inline EigenPotential dt_eigen(const DwwState& v, const EigenPotential& e1, const EigenPotential& e,
                               std::optional<double> cB = std::nullopt, const DtOptions& o = {}) {
    if (std::fabs(e.lambda - e1.lambda) <= 1e-12 * std::max(1.0, std::fabs(e1.lambda)))
        throw Error(ErrorKind::Degenerate, "dt_eigen: degenerate transformation unsupported (lambda = lambda1)");
    detail::require_attached(v, e1, o, "dt_eigen");
    detail::require_attached(v, e, o, "dt_eigen");
    const auto st = detail::transform(v, e1, e1.w1, e1.w2, o, "dt_eigen");
    const Field f = b_integrand(e.sigma(), e1);
    Field B = f;
    if (cB) {
        B = antiderivative(f, *cB);
    } else {
        // anchored in the middle: the constant is recovered without cancelling against B(x0)
        const Field B0 = antiderivative_anchored(f, e.grid().n / 2, 0.0);
        B = B0 + detail::resolve_shift(v, st.output, e1, e, B0, f);
    }
    const auto t = detail::apply_B(v, e1, e, B, f);
    return {t.w1, t.w2, t.s1, t.s2, e.lambda};
}

struct IterateResult {
    DwwState state;
    std::vector<DtStep> steps;
};

/// Successive DTs: transform with eigs[0], carry the rest forward with dt_eigen, repeat.
/// cB_list[k] (if present) is used for the potentials carried at level k.
inline IterateResult dt_iterate(const DwwState& v0, std::vector<EigenPotential> eigs,
                                const std::vector<std::optional<double>>& cB_list = {}, const DtOptions& o = {}) {
    for (std::size_t i = 0; i < eigs.size(); ++i)
        for (std::size_t j = i + 1; j < eigs.size(); ++j)
            if (eigs[i].lambda == eigs[j].lambda)
                throw Error(ErrorKind::Degenerate, "dt_iterate: eigenvalues must be pairwise distinct");
    IterateResult res{v0, {}};
    std::size_t level = 0;
    while (!eigs.empty()) {
        try {
            auto st = dt_step(res.state, eigs.front(), o);
            std::vector<EigenPotential> next;
            std::optional<double> cB;
            if (level < cB_list.size() && cB_list[level]) cB.emplace(*cB_list[level]);
            for (std::size_t k = 1; k < eigs.size(); ++k)
                next.push_back(dt_eigen(res.state, eigs.front(), eigs[k], cB, o));
            res.state = st.output;
            res.steps.push_back(std::move(st));
            eigs = std::move(next);
        } catch (const Error& err) {
            throw Error(err.kind(), "dt_iterate step " + std::to_string(level) + ": " + err.what());
        }
        ++level;
    }
    return res;
}

}  // namespace dtforge
