#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace dtforge;
using namespace dtforge::testing;

namespace {
JmState random_state(const Grid& g, std::mt19937& rng) { return {band_limited(g, rng, 5, 0.5), band_limited(g, rng, 5, 0.5)}; }
}  // namespace

TEST(JmRhs, ZeroAndU1Zero) {
    std::mt19937 rng(21);
    const Grid g = periodic_grid();
    const Field z = Field::constant(g, 0.0);
    const auto h0 = jm_rhs({z, z});
    EXPECT_EQ(norm_inf(h0.p1) + norm_inf(h0.p2), 0.0);
    const Field u0 = band_limited(g, rng);
    const auto h = jm_rhs({u0, z});
    EXPECT_LE(norm_inf(h.p1), 1e-14);
    EXPECT_LE(norm_inf(h.p2 - diff(u0)), 1e-14);
}

TEST(JmRhs, OperatorRoute) {
    // H(u) = Psi(u) u_x with D^{-1} u1_x = u1
    std::mt19937 rng(22);
    const Grid g = periodic_grid();
    for (int trial = 0; trial < 4; ++trial) {
        const auto u = random_state(g, rng);
        const auto h = jm_rhs(u);
        const auto p = apply_psi(u, {diff(u.u0), diff(u.u1)}, u.u1.front());
        EXPECT_LE(norm_inf(h.p1 - p.p1), 1e-9);
        EXPECT_LE(norm_inf(h.p2 - p.p2), 1e-9);
    }
}

TEST(JmLinearized, ZeroStateAndZeroTangent) {
    std::mt19937 rng(23);
    const Grid g = periodic_grid();
    const Field z = Field::constant(g, 0.0);
    const JmTangent p{band_limited(g, rng), band_limited(g, rng)};
    const auto l = jm_linearized_rhs({z, z}, p);
    EXPECT_LE(norm_inf(l.p1 - 0.25 * diff(p.p2, 3)), 1e-12);
    EXPECT_LE(norm_inf(l.p2 - diff(p.p1)), 1e-12);
    const auto l0 = jm_linearized_rhs(random_state(g, rng), {z, z});
    EXPECT_EQ(norm_inf(l0.p1) + norm_inf(l0.p2), 0.0);
}

TEST(JmLinearized, Frechet) {
    std::mt19937 rng(24);
    const Grid g = periodic_grid();
    const auto u = random_state(g, rng);
    const JmTangent p{band_limited(g, rng), band_limited(g, rng)};
    const auto L = jm_linearized_rhs(u, p);
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const auto a = jm_rhs({u.u0 + eps * p.p1, u.u1 + eps * p.p2});
        const auto b = jm_rhs({u.u0 - eps * p.p1, u.u1 - eps * p.p2});
        const double err = std::max(norm_inf((a.p1 - b.p1) / (2 * eps) - L.p1), norm_inf((a.p2 - b.p2) / (2 * eps) - L.p2));
        EXPECT_LE(err, 1e-12 / eps) << eps;  // quadratic flow: only rounding remains
    }
}

TEST(ApplyPsi, ZeroStateAndZeroTangent) {
    std::mt19937 rng(25);
    const Grid g = periodic_grid();
    const Field z = Field::constant(g, 0.0);
    const JmTangent p{band_limited(g, rng), band_limited(g, rng)};
    const auto a = apply_psi({z, z}, p, 0.0);
    EXPECT_LE(norm_inf(a.p1 - 0.25 * diff(p.p2, 2)), 1e-12);
    EXPECT_LE(norm_inf(a.p2 - p.p1), 1e-14);
    const auto a0 = apply_psi(random_state(g, rng), {z, z}, 0.0);
    EXPECT_EQ(norm_inf(a0.p1) + norm_inf(a0.p2), 0.0);
}

TEST(ApplyPsi, ConjugatedSeedEigenpair) {
    const Scenario sc;
    const Grid& g = sc.seed_grid;
    const auto u = seed_state_jm(sc.seeds, g, 0.0);
    for (std::size_t k = 0; k < sc.seeds.eigen.size(); ++k) {
        const auto e = seed_eigenpotential(sc.seeds, g, 0.0, k);
        const auto psi = eigen_map_fwd(e.sigma(), Field::constant(g, 0.0));
        EXPECT_LE(jm_eigen_residual(u, psi, 0.5 * e.lambda, e.w2.front()), 1e-8) << k;
    }
}

TEST(JmEigenResidual, GrowsWithPerturbation) {
    const Scenario sc;
    const Grid& g = sc.seed_grid;
    const auto u = seed_state_jm(sc.seeds, g, 0.0);
    const auto e = seed_jm_eigenpotential(sc.seeds, g, 0.0, 0);
    const Field bump = Field::from_function(g, [](double x) { return std::exp(-x * x); });
    double prev = 0.0;
    for (double a : {1e-4, 1e-3, 1e-2}) {
        const double r = jm_eigen_residual(u, {e.psi1 + a * bump, e.psi2}, e.lambda, e.P2.front());
        EXPECT_GT(r, prev) << a;
        prev = r;
    }
}

TEST(JmPdeResidual, ZeroSeries) {
    const Grid g = periodic_grid();
    const Field z = Field::constant(g, 0.0);
    EXPECT_EQ(jm_pde_residual(JmSeries(5, JmState{z, z}), 0.1), 0.0);
    EXPECT_THROW(jm_pde_residual(JmSeries(3, JmState{z, z}), 0.1), Error);
}
