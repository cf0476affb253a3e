#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace dtforge;
using namespace dtforge::testing;

namespace {
double mean(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s / f.size();
}

Field mode(const Grid& g, double amp, int k) {
    return Field::from_function(g, [&](double x) { return amp * std::sin(2.0 * M_PI * k * (x - g.x0) / g.length()); });
}
}  // namespace

TEST(Integrate, ZeroStaysZero) {
    const Grid g = periodic_grid(64);
    const Field z = Field::constant(g, 0.0);
    for (System s : {System::DWW, System::JM}) {
        const auto tr = integrate(s, z, z, 0.1, 1e-3, Background::zero(g));
        EXPECT_EQ(norm_inf(tr.c1.back()), 0.0);
        EXPECT_EQ(norm_inf(tr.c2.back()), 0.0);
    }
}

TEST(Integrate, SampleSchedule) {
    const Grid g = periodic_grid(64);
    const Field z = Field::constant(g, 0.0);
    IntegrateOptions o;
    o.sample_every = 10;
    const auto tr = integrate(System::DWW, z, z, 0.1, 1e-3, Background::zero(g), o);
    ASSERT_EQ(tr.t.size(), 11u);
    EXPECT_NEAR(tr.t.back(), 0.1, 1e-12);
}

TEST(Integrate, BurgersReduction) {
    const Grid g = periodic_grid(128);
    std::mt19937 rng(7);
    const Field r0 = band_limited(g, rng, 4, 0.4, false);
    const auto tr = integrate(System::DWW, Field::constant(g, 0.0), r0, 0.5, 1e-3, Background::zero(g));
    EXPECT_EQ(norm_inf(tr.c1.back()), 0.0);
    EXPECT_LE(norm_inf(tr.c2.back() - burgers_cole_hopf(r0, 0.5)), 1e-6);
}

TEST(Integrate, MeanConserved) {
    const Grid g = periodic_grid(128);
    std::mt19937 rng(11);
    const Field a = band_limited(g, rng, 4, 0.1, false), b = band_limited(g, rng, 4, 0.1, false);
    const double T = 0.2;
    // u1 is in conservation form; u0 is not (its flux picks up u0 u1_x / 2)
    const auto jm = integrate(System::JM, a, b, T, 5e-3, Background::zero(g));
    EXPECT_LE(std::fabs(mean(jm.c2.back()) - mean(b)) / T, 1e-10);
    const auto dww = integrate(System::DWW, a, b, T, 1e-3, Background::zero(g));
    EXPECT_LE(std::fabs(mean(dww.c1.back()) - mean(a)) / T, 1e-10);
    EXPECT_LE(std::fabs(mean(dww.c2.back()) - mean(b)) / T, 1e-10);
}

TEST(Integrate, StabilityPrecondition) {
    const Grid g = periodic_grid(128);
    const Field z = Field::constant(g, 0.0);
    try {
        integrate(System::JM, z, z, 1.0, 0.5, Background::zero(g));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Precondition);
    }
}

TEST(Integrate, RejectsNonPeriodic) {
    const Grid g = make_grid(-1.0, 1.0, 32, false);
    const Field z = Field::constant(g, 0.0);
    EXPECT_THROW(integrate(System::DWW, z, z, 0.1, 1e-3, Background::zero(g)), Error);
    EXPECT_THROW(burgers_cole_hopf(z, 0.1), Error);
}

TEST(Integrate, TailCheck) {
    const Grid g = periodic_grid(64);
    IntegrateOptions o;
    o.tail_points = 2;
    const Field one = Field::constant(g, 1.0), z = Field::constant(g, 0.0);
    EXPECT_THROW(integrate(System::DWW, z, one, 0.1, 1e-3, Background::zero(g), o), Error);
    // the same data is fine once the background carries it
    const Background bg = tanh_background(g, 0.0, 0.0, 1.0, 1.0);
    EXPECT_NO_THROW(integrate(System::DWW, z, one, 0.01, 1e-3, bg, o));
}

TEST(Integrate, BlowUpReportsStep) {
    // q carries a backward heat term, so unfiltered-scale data grows without bound
    const Grid g = periodic_grid(64);
    const Field q0 = mode(g, 1.0, 3), r0 = mode(g, 1.0, 2);
    try {
        integrate(System::DWW, q0, r0, 500.0, 0.05, Background::zero(g));
        FAIL() << "no blow-up";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BlowUp);
        EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
    }
}

TEST(ColeHopf, ZeroAndConstant) {
    const Grid g = periodic_grid(64);
    EXPECT_LE(norm_inf(burgers_cole_hopf(Field::constant(g, 0.0), 0.3)), 1e-15);
    EXPECT_LE(norm_inf(burgers_cole_hopf(Field::constant(g, 0.7), 0.3) - 0.7), 1e-14);
}

TEST(ColeHopf, LinearHeatLimit) {
    const Grid g = periodic_grid(128);
    const double t = 0.4, k = 2.0 * M_PI * 3 / g.length();
    double prev = 0.0;
    for (double eps : {1e-2, 5e-3, 2.5e-3}) {
        const Field lin = std::exp(-0.5 * k * k * t) * mode(g, eps, 3);
        const double err = norm_inf(burgers_cole_hopf(mode(g, eps, 3), t) - lin);
        EXPECT_LE(err, 2.0 * eps * eps);
        if (prev > 0.0) {
            EXPECT_NEAR(prev / err, 4.0, 0.3);
        }
        prev = err;
    }
}

TEST(Evolve, DtMatchesIntegrator) {
    Scenario sc;
    for (System s : {System::DWW, System::JM}) {
        EvolveSpec ev = sc.evolve;
        ev.system = s;
        EXPECT_LE(max_error(run_evolve_compare(sc, ev)), 1e-4);
    }
}

TEST(Evolve, ClosedFormJmSolvesJm) {
    Scenario sc;
    const Grid& g = sc.dt_grid;
    JmSeries s;
    for (double t : sample_times(sc, 0.05)) s.push_back(closed_form_jm(seed_one_step_closed_form(sc.seeds.eigen[0], g, t)));
    EXPECT_LE(jm_pde_residual(s, 0.05), 1e-6);
}
