// Named verification checks shared by the CLI and the acceptance binary.
#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "evolve_oracle.hpp"
#include "jm_darboux.hpp"
#include "miura_bridge.hpp"
#include "parallel.hpp"
#include "seeds.hpp"

namespace dtforge {

struct Check {
    std::string id;
    int criterion = 0;  // acceptance criterion number, 0 if supplementary
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double wall_s = 0.0;
    std::string detail;
    bool lower_bound = false;  // pass means measured >= tolerance
};

struct VerificationReport {
    std::vector<Check> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct Tolerances {
    double seed_stationary = 1e-10;
    double seed_time = 1e-6;
    double pde = 1e-6;
    double eigen_stationary = 1e-6;
    double eigen_time = 1e-5;
    double form = 1e-9;
    double miura_roundtrip = 1e-10;
    double intertwining = 1e-6;
    double jm_pde = 1e-6;
    double conjugation = 1e-8;
    double reconstruction = 1e-8;
    double burgers = 1e-6;
    double evolve = 1e-4;
    double halving_ratio = 8.0;
    double gauge = 1e-12;
    double gauge_chain = 1e-9;
    double gauge_jm = 1e-10;
};

struct EvolveSpec {
    System system = System::DWW;
    Grid window = make_grid(-40.0, 40.0, 512, true);
    double t_end = 0.05;
    double dt = 1e-4;
    double filter = 2.0 / 3.0;
    int sample_every = 50;
};

struct Scenario {
    Grid seed_grid = make_grid(-20.0, 20.0, 512, false);
    Grid dt_grid = make_grid(-10.0, 10.0, 256, false);
    Grid spectral_grid = make_grid(-20.0, 20.0, 256, true);
    SeedSpec seeds = default_seed_spec();
    double t0 = 0.0;
    double seed_dt = 0.05;
    double dt = 0.1;
    int count = 5;
    Grid burgers_grid = make_grid(-20.0, 20.0, 256, true);
    double burgers_t = 0.5;
    double burgers_dt = 1e-3;
    EvolveSpec evolve;
    Tolerances tol;
    double tol_scale = 1.0;
};

// ---------------------------------------------------------------------------
// series builders

inline std::vector<double> sample_times(const Scenario& sc, double dt) {
    std::vector<double> t(sc.count);
    for (int i = 0; i < sc.count; ++i) t[i] = sc.t0 + i * dt;
    return t;
}

struct DwwChainSample {
    DwwState v0, v1, v2;
    EigenPotential e1, e2, e2_new;
};

/// One- and two-step DWW data at one time from the first two catalogued potentials.
inline DwwChainSample dww_chain_sample(const Scenario& sc, double t) {
    const Grid& g = sc.dt_grid;
    DwwChainSample s{seed_state_dww(sc.seeds, g, t), {}, {}, seed_eigenpotential(sc.seeds, g, t, 0),
                     seed_eigenpotential(sc.seeds, g, t, 1), {}};
    s.v1 = dt_state(s.v0, s.e1);
    s.e2_new = dt_eigen(s.v0, s.e1, s.e2);
    s.v2 = dt_state(s.v1, s.e2_new);
    return s;
}

inline std::vector<DwwChainSample> dww_chain_series(const Scenario& sc) {
    const auto ts = sample_times(sc, sc.dt);
    return parallel_map<DwwChainSample>(ts.size(), [&](std::size_t i) { return dww_chain_sample(sc, ts[i]); });
}

struct JmChainSample {
    JmState u0, u1;
    JmEigenPotential p1, p2, p2_new;
};

inline std::vector<JmChainSample> jm_chain_series(const Scenario& sc) {
    const auto ts = sample_times(sc, sc.dt);
    return parallel_map<JmChainSample>(ts.size(), [&](std::size_t i) {
        const Grid& g = sc.dt_grid;
        JmChainSample s{seed_state_jm(sc.seeds, g, ts[i]), {}, seed_jm_eigenpotential(sc.seeds, g, ts[i], 0),
                        seed_jm_eigenpotential(sc.seeds, g, ts[i], 1), {}};
        s.u1 = dt_jm_state(s.u0, s.p1);
        s.p2_new = dt_jm_eigen(s.u0, s.p1, s.p2);
        return s;
    });
}

// ---------------------------------------------------------------------------
// checks

namespace detail {

inline Check timed(const std::string& id, int criterion, double tol, const std::function<double(std::string&)>& fn,
                   bool lower_bound = false) {
    const auto start = std::chrono::steady_clock::now();
    Check c{id, criterion, 0.0, tol, false, 0.0, "", lower_bound};
    c.measured = fn(c.detail);
    c.pass = lower_bound ? c.measured >= tol : c.measured <= tol;
    c.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return c;
}

inline double max_abs_diff(const Field& a, const Field& b, int margin = 0) {
    return norm_inf_interior(a - b, margin);
}

// max |a - b| / max(|b|, 1) over both components of a state
inline double state_rel(const Field& a1, const Field& a2, const Field& b1, const Field& b2) {
    const double num = std::max(norm_inf(a1 - b1), norm_inf(a2 - b2));
    return num / std::max({norm_inf(b1), norm_inf(b2), 1.0});
}

inline Field random_smooth(const Grid& g, std::mt19937& rng, int modes, double amp) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> a(modes), b(modes);
    for (int k = 0; k < modes; ++k) {
        a[k] = amp * U(rng) / (1 + k);
        b[k] = amp * U(rng) / (1 + k);
    }
    return Field::from_function(g, [&](double x) {
        double s = 0.0;
        for (int k = 0; k < modes; ++k) {
            const double w = 2.0 * M_PI * (k + 1) * (x - g.x0) / g.length();
            s += a[k] * std::cos(w) + b[k] * std::sin(w);
        }
        return s;
    });
}

}  // namespace detail

/// Criterion 1: stationary and time residuals of every catalogued seed potential.
inline std::vector<Check> check_seed_gate(const Scenario& sc) {
    const double s = sc.tol_scale;
    std::vector<Check> out;
    out.push_back(detail::timed("seed-eigen", 1, sc.tol.seed_stationary * s, [&](std::string& d) {
        double worst = 0.0;
        for (std::size_t k = 0; k < sc.seeds.eigen.size(); ++k)
            for (double t : sample_times(sc, sc.seed_dt)) {
                const auto v = seed_state_dww(sc.seeds, sc.seed_grid, t);
                worst = std::max(worst, dww_eigen_residual_w(v, seed_eigenpotential(sc.seeds, sc.seed_grid, t, k)));
            }
        d = "stationary w-system, all lambdas, seed grid";
        return worst;
    }));
    out.push_back(detail::timed("seed-time", 1, sc.tol.seed_time * s, [&](std::string& d) {
        double worst = 0.0;
        for (std::size_t k = 0; k < sc.seeds.eigen.size(); ++k) {
            DwwSeries st;
            std::vector<EigenPotential> es;
            for (double t : sample_times(sc, sc.seed_dt)) {
                st.push_back(seed_state_dww(sc.seeds, sc.seed_grid, t));
                es.push_back(seed_eigenpotential(sc.seeds, sc.seed_grid, t, k));
            }
            worst = std::max(worst, dww_eigen_time_residual(st, es, sc.seed_dt));
        }
        d = "w-form time system, 5-sample FD";
        return worst;
    }));
    return out;
}

/// Criteria 2, 3, 4, 5, 8, 10 from one DWW chain series.
inline std::vector<Check> check_dww_dt(const Scenario& sc) {
    const double s = sc.tol_scale;
    const auto ch = dww_chain_series(sc);
    DwwSeries one, two;
    std::vector<EigenPotential> enew;
    for (const auto& c : ch) {
        one.push_back(c.v1);
        two.push_back(c.v2);
        enew.push_back(c.e2_new);
    }
    std::vector<Check> out;
    out.push_back(detail::timed("dt-pde-residual", 2, sc.tol.pde * s, [&](std::string& d) {
        d = "one-step DT, t in [t0, t0 + 4 dt]";
        return dww_pde_residual(one, sc.dt);
    }));
    out.push_back(detail::timed("dt-eigen-residual", 3, sc.tol.eigen_stationary * s, [&](std::string& d) {
        double worst = 0.0;
        for (const auto& c : ch) worst = std::max(worst, dww_eigen_residual_w(c.v1, c.e2_new));
        d = "transformed potential at lambda2, stationary w-system";
        return worst;
    }));
    out.push_back(detail::timed("dt-eigen-time-residual", 3, sc.tol.eigen_time * s, [&](std::string& d) {
        d = "transformed potential at lambda2, w-form time system";
        return dww_eigen_time_residual(one, enew, sc.dt);
    }));
    out.push_back(detail::timed("two-step", 4, sc.tol.pde * s, [&](std::string& d) {
        d = "two-step chain lambda1 then lambda2";
        return dww_pde_residual(two, sc.dt);
    }));
    out.push_back(detail::timed("form-equivalence", 5, sc.tol.form * s, [&](std::string& d) {
        double worst = 0.0;
        for (const auto& c : ch) {
            const std::vector<std::pair<const DwwState*, const EigenPotential*>> cases = {
                {&c.v0, &c.e1}, {&c.v0, &c.e2}, {&c.v1, &c.e2_new}};
            for (const auto& [v, e] : cases) {
                const auto w = dt_state(*v, *e);
                const auto sg = dt_state_sigma_form(*v, *e);
                worst = std::max({worst, detail::max_abs_diff(w.q, sg.q), detail::max_abs_diff(w.r, sg.r)});
            }
        }
        d = "pointwise max |w-form - sigma-form| over q, r (seed lambda1, seed lambda2, transformed lambda2)";
        return worst;
    }));
    out.push_back(detail::timed("reconstruction", 8, sc.tol.reconstruction * s, [&](std::string& d) {
        double worst = 0.0;
        for (const auto& c : ch) {
            const std::vector<std::pair<const DwwState*, const EigenPotential*>> cases = {
                {&c.v0, &c.e1}, {&c.v0, &c.e2}, {&c.v1, &c.e2_new}};
            for (const auto& [v, e] : cases) {
                const int m = v->q.grid().margin();
                worst = std::max({worst, detail::max_abs_diff(reconstruct_q_from_eigen(*e), v->q, m),
                                  detail::max_abs_diff(reconstruct_r_from_eigen(*e), v->r, m)});
            }
        }
        d = "seed and transformed potentials against their attached states";
        return worst;
    }));
    out.push_back(detail::timed("gauge", 10, sc.tol.gauge * s, [&](std::string& d) {
        double worst = 0.0;
        for (const auto& c : ch) {
            const std::vector<std::pair<const DwwState*, const EigenPotential*>> cases = {
                {&c.v0, &c.e1}, {&c.v0, &c.e2}, {&c.v1, &c.e2_new}};
            for (const auto& [v, e] : cases) {
                const auto ref = dt_state(*v, *e);
                for (double k : {-2.0, 0.5, 10.0}) {
                    const auto a = dt_state(*v, e->scaled(k));
                    worst = std::max(worst, detail::state_rel(a.q, a.r, ref.q, ref.r));
                }
            }
        }
        d = "dt_state with k in {-2, 0.5, 10}, seed and transformed potentials";
        return worst;
    }));
    out.push_back(detail::timed("gauge-chain", 0, sc.tol.gauge_chain * s, [&](std::string& d) {
        double worst = 0.0;
        const auto& c = ch.front();
        for (double k : {-2.0, 0.5, 10.0}) {
            const auto b = dt_iterate(c.v0, {c.e1.scaled(k), c.e2.scaled(k)}).state;
            worst = std::max(worst, detail::state_rel(b.q, b.r, c.v2.q, c.v2.r));
        }
        d = "two-step dt_iterate, rounding through quadrature and the resolved B constant";
        return worst;
    }));
    return out;
}

/// Criterion 6: roundtrip on random smooth periodic fields and intertwining of DT series.
inline std::vector<Check> check_miura(const Scenario& sc) {
    const double s = sc.tol_scale;
    std::vector<Check> out;
    out.push_back(detail::timed("miura-roundtrip", 6, sc.tol.miura_roundtrip * s, [&](std::string& d) {
        std::mt19937 rng(20240611);
        double worst = 0.0;
        for (int trial = 0; trial < 8; ++trial) {
            const Field a = detail::random_smooth(sc.spectral_grid, rng, 6, 1.0);
            const Field b = detail::random_smooth(sc.spectral_grid, rng, 6, 1.0);
            const auto v = miura_fwd(miura_inv(DwwState{a, b}));
            const auto u = miura_inv(miura_fwd(JmState{a, b}));
            worst = std::max({worst, norm_inf(v.q - a), norm_inf(v.r - b), norm_inf(u.u0 - a), norm_inf(u.u1 - b)});
        }
        d = "both compositions, 8 random band-limited pairs, spectral grid";
        return worst;
    }));
    const auto jm = jm_chain_series(sc);
    const auto dw = dww_chain_series(sc);
    out.push_back(detail::timed("miura-intertwining-jm-to-dww", 6, sc.tol.intertwining * s, [&](std::string& d) {
        DwwSeries fw;
        for (const auto& c : jm) fw.push_back(miura_fwd(c.u1));
        d = "direct JM one-step series pushed forward, DWW residual";
        return dww_pde_residual(fw, sc.dt);
    }));
    out.push_back(detail::timed("miura-intertwining-dww-to-jm", 6, sc.tol.intertwining * s, [&](std::string& d) {
        JmSeries a, b;
        for (const auto& c : dw) {
            a.push_back(miura_inv(c.v1));
            b.push_back(miura_inv(c.v2));
        }
        d = "DWW one- and two-step series pulled back, JM residual";
        return std::max(jm_pde_residual(a, sc.dt), jm_pde_residual(b, sc.dt));
    }));
    return out;
}

/// Criterion 7 plus the JM eigen claims.
inline std::vector<Check> check_jm_dt(const Scenario& sc, bool supplementary = true) {
    const double s = sc.tol_scale;
    const auto jm = jm_chain_series(sc);
    JmSeries us;
    std::vector<JmTangent> ps;
    for (const auto& c : jm) {
        us.push_back(c.u1);
        ps.push_back(c.p2_new.psi());
    }
    std::vector<Check> out;
    if (supplementary) {
        out.push_back(detail::timed("jm-seed-eigen", 0, sc.tol.eigen_stationary * s, [&](std::string& d) {
            double worst = 0.0;
            for (const auto& c : jm)
                worst = std::max({worst, jm_eigen_residual_P(c.u0, c.p1), jm_eigen_residual_P(c.u0, c.p2)});
            d = "conjugated seed potentials at u = 0";
            return worst;
        }));
    }
    out.push_back(detail::timed("jm-dt-pde-residual", 7, sc.tol.jm_pde * s, [&](std::string& d) {
        d = "direct JM one-step series";
        return jm_pde_residual(us, sc.dt);
    }));
    out.push_back(detail::timed("jm-conjugation", 7, sc.tol.conjugation * s, [&](std::string& d) {
        double worst = 0.0;
        for (const auto& c : jm) {
            const auto e1 = dww_from_jm(c.p1, c.u0.u1);
            const auto via = miura_inv(dt_state(miura_fwd(c.u0), e1));
            const int m = c.u0.u0.grid().margin();
            worst = std::max({worst, detail::max_abs_diff(via.u0, c.u1.u0, m), detail::max_abs_diff(via.u1, c.u1.u1, m)});
        }
        d = "pointwise (interior) |direct - Miura-conjugated DWW DT|";
        return worst;
    }));
    if (supplementary) {
        out.push_back(detail::timed("jm-gauge", 0, sc.tol.gauge_jm * s, [&](std::string& d) {
            double worst = 0.0;
            for (const auto& c : jm)
                for (double k : {-2.0, 0.5, 10.0}) {
                    const auto a = dt_jm_state(c.u0, c.p1.scaled(k));
                    worst = std::max(worst, detail::state_rel(a.u0, a.u1, c.u1.u0, c.u1.u1));
                }
            d = "dt_jm_state with (psi1, psi2, P2) scaled by k in {-2, 0.5, 10}";
            return worst;
        }));
        out.push_back(detail::timed("jm-dt-eigen-residual", 0, sc.tol.eigen_stationary * s, [&](std::string& d) {
            double worst = 0.0;
            for (const auto& c : jm) worst = std::max(worst, jm_eigen_residual_P(c.u1, c.p2_new));
            d = "transformed JM pair at the transformed state";
            return worst;
        }));
        out.push_back(detail::timed("jm-dt-eigen-time-residual", 0, sc.tol.eigen_time * s, [&](std::string& d) {
            d = "psi_t = H_u psi for the transformed pair";
            return jm_tangent_time_residual(us, ps, sc.dt);
        }));
        out.push_back(detail::timed("jm-eigen-conjugation", 0, sc.tol.conjugation * s, [&](std::string& d) {
            double worst = 0.0;
            for (const auto& c : jm) {
                const auto v0 = miura_fwd(c.u0);
                const auto e1 = dww_from_jm(c.p1, c.u0.u1), e2 = dww_from_jm(c.p2, c.u0.u1);
                const auto v1 = dt_state(v0, e1);
                const auto pm = jm_from_dww(dt_eigen(v0, e1, e2), v1.r);
                const int m = v1.q.grid().margin();
                const double sc_ = std::max({norm_inf_interior(c.p2_new.psi1, m), norm_inf_interior(c.p2_new.psi2, m), 1.0});
                worst = std::max({worst, detail::max_abs_diff(pm.psi1, c.p2_new.psi1, m) / sc_,
                                  detail::max_abs_diff(pm.psi2, c.p2_new.psi2, m) / sc_,
                                  detail::max_abs_diff(pm.P2, c.p2_new.P2, m) / sc_});
            }
            d = "transformed JM pair vs eigen_map_fwd of the DWW-transformed pair (relative)";
            return worst;
        }));
    }
    return out;
}

// ---------------------------------------------------------------------------
// evolve oracle comparisons

inline JmState closed_form_jm(const DwwState& v) {
    // u1 = r, u0 = q - r^2/4 + r_x/2 with r_x = -q for this family
    return {0.5 * v.q - 0.25 * v.r * v.r, v.r};
}

struct EvolveRun {
    std::vector<double> t, err1, err2;
};

/// Integrates the one-step closed form on the periodic window and tabulates max errors per sample.
inline EvolveRun run_evolve_compare(const Scenario& sc, const EvolveSpec& ev) {
    const auto& p = sc.seeds.eigen.at(0);
    const Grid& g = ev.window;
    const double lam = p.lambda;
    auto exact = [&](double t) -> std::pair<Field, Field> {
        const auto v = seed_one_step_closed_form(p, g, sc.t0 + t);
        if (ev.system == System::DWW) return {v.q, v.r};
        const auto u = closed_form_jm(v);
        return {u.u0, u.u1};
    };
    const Background bg = ev.system == System::DWW ? tanh_background(g, 0.0, 0.0, lam, 0.0)
                                                    : tanh_background(g, -0.25 * lam * lam, 0.0, lam, 0.0);
    IntegrateOptions io;
    io.filter = ev.filter;
    io.sample_every = ev.sample_every;
    io.tail_points = 4;
    const auto init = exact(0.0);
    const auto tr = integrate(ev.system, init.first, init.second, ev.t_end, ev.dt, bg, io);
    EvolveRun run;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const auto ex = exact(tr.t[i]);
        run.t.push_back(tr.t[i]);
        run.err1.push_back(norm_inf(tr.c1[i] - ex.first));
        run.err2.push_back(norm_inf(tr.c2[i] - ex.second));
    }
    return run;
}

// worst sampled error over the run
inline double max_error(const EvolveRun& r) {
    double m = 0.0;
    for (std::size_t i = 0; i < r.t.size(); ++i) m = std::max({m, r.err1[i], r.err2[i]});
    return m;
}

inline Check check_burgers(const Scenario& sc) {
    return detail::timed("burgers-cole-hopf", 9, sc.tol.burgers * sc.tol_scale, [&](std::string& d) {
        const Grid& g = sc.burgers_grid;
        const Field r0 = Field::from_function(g, [&](double x) {
            const double w = 2.0 * M_PI * (x - g.x0) / g.length();
            return 0.5 * std::sin(w) + 0.3 * std::cos(2.0 * w) + 0.1;
        });
        const auto tr = integrate(System::DWW, Field::constant(g, 0.0), r0, sc.burgers_t, sc.burgers_dt,
                                  Background::zero(g));
        d = "q = 0 reduction vs Cole-Hopf at t_end";
        return std::max(norm_inf(tr.c2.back() - burgers_cole_hopf(r0, sc.burgers_t)), norm_inf(tr.c1.back()));
    });
}

/// DT-vs-integrator checks on an already computed base run; `refine` adds the dt/2, dt/4 runs.
inline std::vector<Check> check_evolve_run(const Scenario& sc, const EvolveRun& base, bool refine) {
    std::vector<Check> out;
    out.push_back(detail::timed("dt-vs-integrator", 9, sc.tol.evolve * sc.tol_scale, [&](std::string& d) {
        d = "one-step DT on the periodic window vs RK4, max error over samples up to t_end";
        return max_error(base);
    }));
    if (!refine) return out;
    out.push_back(detail::timed(
        "dt-halving", 9, sc.tol.halving_ratio,
        [&](std::string& d) {
            EvolveSpec half = sc.evolve;
            half.dt *= 0.5;
            half.sample_every *= 2;
            const auto r2 = run_evolve_compare(sc, half);
            EvolveSpec quarter = half;
            quarter.dt *= 0.5;
            quarter.sample_every *= 2;
            const auto r4 = run_evolve_compare(sc, quarter);
            const double e1 = max_error(base), e2 = max_error(r2), e4 = max_error(r4);
            char buf[160];
            std::snprintf(buf, sizeof buf, "errors %.3e, %.3e, %.3e for dt, dt/2, dt/4 (ratio: smaller reduction)",
                          e1, e2, e4);
            d = buf;
            return std::min(e1 / e2, e2 / e4);
        },
        true));
    return out;
}

/// Criterion 9.
inline std::vector<Check> check_evolve(const Scenario& sc, bool refine = true) {
    std::vector<Check> out{check_burgers(sc)};
    for (auto& c : check_evolve_run(sc, run_evolve_compare(sc, sc.evolve), refine)) out.push_back(std::move(c));
    return out;
}

}  // namespace dtforge
