#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace dtforge;
using namespace dtforge::testing;

namespace {

DwwState random_state(const Grid& g, std::mt19937& rng) { return {band_limited(g, rng, 5, 0.5), band_limited(g, rng, 5, 0.5)}; }

DwwTangent random_tangent(const Grid& g, std::mt19937& rng) { return {band_limited(g, rng, 5), band_limited(g, rng, 5)}; }

}  // namespace

TEST(DwwRhs, ZeroState) {
    const Grid g = periodic_grid();
    const Field z = Field::constant(g, 0.0);
    const auto k = dww_rhs({z, z});
    EXPECT_EQ(norm_inf(k.s1), 0.0);
    EXPECT_EQ(norm_inf(k.s2), 0.0);
}

TEST(DwwRhs, BurgersReduction) {
    std::mt19937 rng(11);
    const Grid g = periodic_grid();
    const Field r = band_limited(g, rng);
    const auto k = dww_rhs({Field::constant(g, 0.0), r});
    EXPECT_LE(norm_inf(k.s1), 1e-14);
    EXPECT_LE(norm_inf(k.s2 - (0.5 * diff(diff(r)) + r * diff(r))), 1e-12);
}

TEST(DwwRhs, HandExpandedForm) {
    std::mt19937 rng(12);
    const Grid g = periodic_grid();
    for (int trial = 0; trial < 4; ++trial) {
        const auto v = random_state(g, rng);
        const auto k = dww_rhs(v);
        const Field qx = diff(v.q), rx = diff(v.r);
        const Field e1 = qx * v.r + v.q * rx - 0.5 * diff(qx);
        const Field e2 = 0.5 * diff(rx) + v.r * rx + qx;
        EXPECT_LE(norm_inf(k.s1 - e1), 1e-12);
        EXPECT_LE(norm_inf(k.s2 - e2), 1e-12);
    }
}

TEST(DwwLinearized, ZeroState) {
    std::mt19937 rng(13);
    const Grid g = periodic_grid();
    const Field z = Field::constant(g, 0.0);
    const auto s = random_tangent(g, rng);
    const auto k = dww_linearized_rhs({z, z}, s);
    EXPECT_LE(norm_inf(k.s1 + 0.5 * diff(diff(s.s1))), 1e-12);
    EXPECT_LE(norm_inf(k.s2 - (0.5 * diff(diff(s.s2)) + diff(s.s1))), 1e-12);
    const auto k0 = dww_linearized_rhs(random_state(g, rng), {z, z});
    EXPECT_EQ(norm_inf(k0.s1) + norm_inf(k0.s2), 0.0);
}

TEST(DwwLinearized, FrechetSecondOrder) {
    std::mt19937 rng(14);
    const Grid g = periodic_grid();
    const auto v = random_state(g, rng);
    const auto s = random_tangent(g, rng);
    const auto L = dww_linearized_rhs(v, s);
    std::vector<double> errs;
    for (double eps : {1e-2, 1e-3}) {
        const auto p = dww_rhs({v.q + eps * s.s1, v.r + eps * s.s2});
        const auto m = dww_rhs({v.q - eps * s.s1, v.r - eps * s.s2});
        errs.push_back(std::max(norm_inf((p.s1 - m.s1) / (2 * eps) - L.s1), norm_inf((p.s2 - m.s2) / (2 * eps) - L.s2)));
    }
    // the flow is quadratic, so the centred difference is exact up to rounding
    EXPECT_LE(errs[0], 1e-9);
    EXPECT_LE(errs[1], 1e-8);
}

TEST(DwwLinearized, Linear) {
    std::mt19937 rng(15);
    const Grid g = periodic_grid();
    const auto v = random_state(g, rng);
    const auto a = random_tangent(g, rng), b = random_tangent(g, rng);
    const auto la = dww_linearized_rhs(v, a), lb = dww_linearized_rhs(v, b);
    const auto lab = dww_linearized_rhs(v, {2.0 * a.s1 - b.s1, 2.0 * a.s2 - b.s2});
    EXPECT_LE(norm_inf(lab.s1 - (2.0 * la.s1 - lb.s1)), 1e-11);
    EXPECT_LE(norm_inf(lab.s2 - (2.0 * la.s2 - lb.s2)), 1e-11);
}

TEST(ApplyPhi, ZeroState) {
    std::mt19937 rng(16);
    const Grid g = periodic_grid();
    const Field z = Field::constant(g, 0.0);
    const auto s = random_tangent(g, rng);
    const auto p = apply_phi({z, z}, s, 0.0);
    EXPECT_LE(norm_inf(p.s1 + diff(s.s1)), 1e-13);
    EXPECT_LE(norm_inf(p.s2 - (2.0 * s.s1 + diff(s.s2))), 1e-13);
    const auto p0 = apply_phi(random_state(g, rng), {z, z}, 0.0);
    EXPECT_EQ(norm_inf(p0.s1) + norm_inf(p0.s2), 0.0);
}

TEST(ApplyPhi, LinearWithMatchingConstants) {
    std::mt19937 rng(17);
    const Grid g = periodic_grid();
    const auto v = random_state(g, rng);
    const auto a = random_tangent(g, rng), b = random_tangent(g, rng);
    const auto pa = apply_phi(v, a, 0.3), pb = apply_phi(v, b, -0.2);
    const auto pab = apply_phi(v, {a.s1 + b.s1, a.s2 + b.s2}, 0.1);
    EXPECT_LE(norm_inf(pab.s1 - (pa.s1 + pb.s1)), 1e-12);
    EXPECT_LE(norm_inf(pab.s2 - (pa.s2 + pb.s2)), 1e-12);
}

TEST(ApplyPhi, SeedEigenpair) {
    const Scenario sc;
    const Grid& g = sc.seed_grid;
    const auto v = seed_state_dww(sc.seeds, g, 0.0);
    for (std::size_t k = 0; k < sc.seeds.eigen.size(); ++k) {
        const auto e = seed_eigenpotential(sc.seeds, g, 0.0, k);
        EXPECT_LE(dww_eigen_residual(v, e.sigma(), e.lambda, e.w2.front()), 1e-8);
    }
}

TEST(EigenResidual, DetectsPerturbation) {
    const Scenario sc;
    const Grid& g = sc.seed_grid;
    const auto v = seed_state_dww(sc.seeds, g, 0.0);
    const auto e = seed_eigenpotential(sc.seeds, g, 0.0, 0);
    std::mt19937 rng(18);
    std::normal_distribution<double> N(0.0, 1.0);
    const Field noise = Field::from_function(g, [&](double) { return N(rng); });
    const double scale = std::max(norm_inf(e.s1), norm_inf(e.s2));
    const DwwTangent bad{e.s1 + 1e-3 * scale * noise, e.s2};
    EXPECT_GE(dww_eigen_residual(v, bad, e.lambda, e.w2.front()), 1e-4);
}

TEST(EigenResidual, KernelVector) {
    const Grid g = periodic_grid();
    const Field z = Field::constant(g, 0.0);
    EXPECT_EQ(dww_eigen_residual({z, z}, {z, Field::constant(g, 0.0)}, 0.0, 1.0), 0.0);
    // sigma = (0, c) with w2 = c x is not periodic; on a line grid Phi (0, c) = (0, 0) at v = 0
    const Grid l = make_grid(-5.0, 5.0, 64, false);
    const Field zl = Field::constant(l, 0.0);
    EXPECT_LE(dww_eigen_residual({zl, zl}, {zl, Field::constant(l, 2.0)}, 0.0, 0.0), 1e-12);
}

TEST(PdeResidual, ZeroSeriesAndFrozenState) {
    std::mt19937 rng(19);
    const Grid g = periodic_grid();
    const Field z = Field::constant(g, 0.0);
    EXPECT_EQ(dww_pde_residual(DwwSeries(5, DwwState{z, z}), 0.1), 0.0);
    const auto v = random_state(g, rng);
    const auto k = dww_rhs(v);
    const double expect = std::max(norm_inf(k.s1), norm_inf(k.s2)) / std::max({norm_inf(k.s1), norm_inf(k.s2), 1.0});
    EXPECT_NEAR(dww_pde_residual(DwwSeries(5, v), 0.1), expect, 1e-12);
    EXPECT_THROW(dww_pde_residual(DwwSeries(4, v), 0.1), Error);
}

TEST(StrongSymmetry, TranslationTangentOfDtSolution) {
    // sigma = v_x along a verified DT solution solves sigma_t = K_v sigma
    Scenario sc;
    DwwSeries st;
    std::vector<DwwTangent> sig;
    for (double t : sample_times(sc, sc.dt)) {
        const auto v = dt_state(seed_state_dww(sc.seeds, sc.dt_grid, t), seed_eigenpotential(sc.seeds, sc.dt_grid, t, 0));
        sig.push_back({diff(v.q), diff(v.r)});
        st.push_back(v);
    }
    EXPECT_LE(dww_sigma_time_residual(st, sig, sc.dt), 1e-5);
}

TEST(Reconstruction, SeedGivesZeroState) {
    const Scenario sc;
    for (std::size_t k = 0; k < sc.seeds.eigen.size(); ++k) {
        const auto e = seed_eigenpotential(sc.seeds, sc.seed_grid, 0.2, k);
        EXPECT_LE(norm_inf(reconstruct_r_from_eigen(e)), 1e-8);
        EXPECT_LE(norm_inf(reconstruct_q_from_eigen(e)), 1e-8);
    }
}

TEST(Reconstruction, ZeroCrossingRejected) {
    const Grid g = make_grid(-1.0, 1.0, 33, false);
    const auto e = EigenPotential::from_w(Field::constant(g, 1.0), Field::coordinates(g) + 0.013, 1.0);
    EXPECT_THROW(reconstruct_r_from_eigen(e), Error);
    EXPECT_THROW(reconstruct_q_from_eigen(e), Error);
}
