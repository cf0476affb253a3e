// Trivial seeds and their closed-form exponential eigenpotentials.
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dww_darboux.hpp"
#include "jm_darboux.hpp"

namespace dtforge {

enum class System { DWW, JM };

struct EigenParams {
    double lambda = 0.8;
    double a = 1.0;
    double b = 1.0;
    std::optional<double> c;  // defaults to +sqrt(lambda a b)
};

struct SeedSpec {
    System system = System::DWW;
    std::string kind = "trivial";
    std::vector<EigenParams> eigen;
};

inline SeedSpec default_seed_spec(System s = System::DWW) {
    // the second potential sits on the a = 0 branch; a = b = 1 there makes the two-step chain singular
    return {s, "trivial", {{0.8, 1.0, 1.0, std::nullopt}, {1.3, 0.0, 1.0, std::nullopt}}};
}

namespace detail {
inline void require_trivial(const SeedSpec& spec) {
    if (spec.kind != "trivial") throw Error(ErrorKind::Precondition, "seed: unknown kind '" + spec.kind + "'");
}
}  // namespace detail

inline DwwState seed_state_dww(const SeedSpec& spec, const Grid& g, double /*t*/) {
    detail::require_trivial(spec);
    return {Field::constant(g, 0.0), Field::constant(g, 0.0)};
}

inline JmState seed_state_jm(const SeedSpec& spec, const Grid& g, double /*t*/) {
    detail::require_trivial(spec);
    return {Field::constant(g, 0.0), Field::constant(g, 0.0)};
}

/// c with c^2 = lambda a b; this is the zero-constant form of q w2^2 = w1_x w2 + w1^2 at q = 0.
inline double seed_offset(const EigenParams& p) {
    const double prod = p.lambda * p.a * p.b;
    if (p.c) {
        const double c = *p.c;
        if (std::fabs(c * c - prod) > 1e-12 * std::max(1.0, std::fabs(prod)))
            throw Error(ErrorKind::Config, "seed: c^2 must equal lambda a b (got c = " + std::to_string(c) + ")");
        return c;
    }
    if (prod < 0) throw Error(ErrorKind::Config, "seed: lambda a b < 0 has no real offset c");
    return std::sqrt(prod);
}

/// At q = r = 0, with theta = lambda x + lambda^2 t/2:
///   w1 = a e^{-theta} + c,  w2 = b e^{theta} + (a/lambda) e^{-theta} + 2c/lambda.
inline EigenPotential seed_eigenpotential(const SeedSpec& spec, const Grid& g, double t, std::size_t index) {
    detail::require_trivial(spec);
    if (index >= spec.eigen.size()) throw Error(ErrorKind::Precondition, "seed_eigenpotential: index out of range");
    const auto& p = spec.eigen[index];
    const double lam = p.lambda, a = p.a, b = p.b;
    if (lam == 0.0) throw Error(ErrorKind::Config, "seed: lambda must be nonzero");
    const double c = seed_offset(p);
    std::vector<double> w1(g.n), w2(g.n), s1(g.n), s2(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double th = lam * g.x(i) + 0.5 * lam * lam * t;
        const double ep = std::exp(th), em = std::exp(-th);
        w1[i] = a * em + c;
        w2[i] = b * ep + (a / lam) * em + 2.0 * c / lam;
        s1[i] = -lam * a * em;
        s2[i] = lam * b * ep - a * em;
    }
    EigenPotential e{Field(g, w1), Field(g, w2), Field(g, s1), Field(g, s2), lam};
    check_denominator(e.w2, abs(e.w1) + abs(e.s2), 1e-8, "seed_eigenpotential (w2 regularity)");
    return e;
}

/// sigma2_x of the seed family, exact.
inline Field seed_sigma2_x(const EigenParams& p, const Grid& g, double t) {
    const double lam = p.lambda;
    return Field::from_function(g, [&](double x) {
        const double th = lam * x + 0.5 * lam * lam * t;
        return lam * lam * p.b * std::exp(th) + lam * p.a * std::exp(-th);
    });
}

/// Conjugated seed: psi2 = sigma2, psi1 = sigma1 + sigma2_x/2 (r = 0), P2 = w2, eigenvalue lambda/2.
inline JmEigenPotential seed_jm_eigenpotential(const SeedSpec& spec, const Grid& g, double t, std::size_t index) {
    const auto e = seed_eigenpotential(spec, g, t, index);
    const JmState u0 = seed_state_jm(spec, g, t);
    return make_jm_eigen(u0, e.s1 + 0.5 * seed_sigma2_x(spec.eigen[index], g, t), e.s2, e.w2, 0.5 * e.lambda);
}

/// One DT step of the trivial seed with a single family member, simplified by hand:
/// with c = sqrt(lambda a b) the w-form formulas collapse to r = lambda/(1 + kappa e^theta), q = -r_x,
/// kappa = sqrt(lambda b/a). Evaluating dt_state on wide windows cancels terms of size e^{lambda|x|};
/// this form has no cancellation and is what the periodic-window oracle compares against.
inline DwwState seed_one_step_closed_form(const EigenParams& p, const Grid& g, double t) {
    const double lam = p.lambda;
    if (!(p.a > 0.0 && p.b > 0.0 && lam > 0.0))
        throw Error(ErrorKind::Precondition, "seed_one_step_closed_form: needs lambda, a, b > 0");
    if (p.c && *p.c < 0.0) throw Error(ErrorKind::Precondition, "seed_one_step_closed_form: needs c >= 0");
    const double kappa = std::sqrt(lam * p.b / p.a);
    std::vector<double> q(g.n), r(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double th = lam * g.x(i) + 0.5 * lam * lam * t;
        const double e = kappa * std::exp(th);
        r[i] = lam / (1.0 + e);
        q[i] = lam * lam * e / ((1.0 + e) * (1.0 + e));
    }
    return {Field(g, q), Field(g, r)};
}

/// Sample Gram determinant of two potentials at two points, normalized by the row norms.
inline double seed_gram_determinant(const EigenPotential& e, const EigenPotential& f, int i, int j) {
    const double a11 = e.w2[i], a12 = f.w2[i], a21 = e.w2[j], a22 = f.w2[j];
    const double n1 = std::hypot(a11, a12), n2 = std::hypot(a21, a22);
    return std::fabs(a11 * a22 - a12 * a21) / (n1 * n2);
}

}  // namespace dtforge
