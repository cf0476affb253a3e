// dtforge: verify Darboux transformations, export solution profiles, compare against time integration.
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "run_config.hpp"

using namespace dtforge;
using namespace dtforge::cli;

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kSingular = 3 };

int exit_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Singular:
        case ErrorKind::BlowUp:
        case ErrorKind::NonFinite:
            return kSingular;
        case ErrorKind::NotEigen:
            return kFail;
        default:
            return kConfig;
    }
}

struct Common {
    std::string config_path;
    std::string out_dir;
    std::optional<double> tol_scale;
};

RunConfig load(const Common& c) {
    RunConfig rc = c.config_path.empty() ? parse_config(json::object()) : load_config(c.config_path);
    if (!c.out_dir.empty()) rc.out_dir = c.out_dir;
    if (c.tol_scale) {
        if (!(*c.tol_scale > 0.0)) throw config_error("--tolerance-scale must be positive");
        rc.scenario.tol_scale = *c.tol_scale;
    }
    return rc;
}

int finish(const std::string& command, const std::string& file, const VerificationReport& rep, const RunConfig& rc) {
    for (const auto& c : rep.checks)
        std::printf("%s  %-30s %.3e %s %.1e\n", c.pass ? "PASS" : "FAIL", c.id.c_str(), c.measured,
                    c.lower_bound ? ">=" : "<=", c.tolerance);
    const auto path = std::filesystem::path(rc.out_dir) / file;
    write_atomic(path, report_json(command, rep, rc.scenario.tol_scale).dump(2) + "\n");
    std::printf("%s -> %s\n", rep.pass() ? "all checks passed" : "some checks failed", path.c_str());
    return rep.pass() ? kPass : kFail;
}

void keep(std::vector<Check>& dst, std::vector<Check> src, std::initializer_list<const char*> ids = {}) {
    for (auto& c : src) {
        bool want = ids.size() == 0;
        for (const char* id : ids) want = want || c.id == id;
        if (want) dst.push_back(std::move(c));
    }
}

int cmd_verify(const std::string& system, const RunConfig& rc) {
    const Scenario& sc = rc.scenario;
    VerificationReport rep;
    if (system == "dww") {
        keep(rep.checks, check_seed_gate(sc));
        keep(rep.checks, check_dww_dt(sc));
    } else if (system == "jm") {
        keep(rep.checks, check_jm_dt(sc, true));
    } else if (system == "miura") {
        keep(rep.checks, check_miura(sc));
    } else {
        keep(rep.checks, check_dww_dt(sc), {"form-equivalence", "reconstruction"});
        keep(rep.checks, check_jm_dt(sc, true), {"jm-conjugation", "jm-eigen-conjugation"});
        rep.checks.push_back(check_burgers(sc));
        keep(rep.checks, check_evolve_run(sc, run_evolve_compare(sc, sc.evolve), false));
    }
    return finish("verify " + system, "verify_" + system + ".json", rep, rc);
}

std::string tag(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

int cmd_generate(const RunConfig& rc) {
    const Scenario& sc = rc.scenario;
    const auto& gs = rc.generate;
    const Grid& g = sc.dt_grid;
    const auto& ts = gs.times;
    const std::string sys = gs.system == System::DWW ? "dww" : "jm";
    const auto csv = parallel_map<std::string>(ts.size(), [&](std::size_t i) {
        const double t = ts[i];
        if (gs.system == System::DWW) {
            std::vector<EigenPotential> eigs;
            for (int k = 0; k < gs.steps; ++k) eigs.push_back(seed_eigenpotential(sc.seeds, g, t, k));
            const auto v = dt_iterate(seed_state_dww(sc.seeds, g, t), eigs).state;
            return fields_csv("q", "r", v.q, v.r);
        }
        std::vector<JmEigenPotential> eigs;
        for (int k = 0; k < gs.steps; ++k) eigs.push_back(seed_jm_eigenpotential(sc.seeds, g, t, k));
        const auto u = dt_jm_iterate(seed_state_jm(sc.seeds, g, t), eigs);
        return fields_csv("u0", "u1", u.u0, u.u1);
    });
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto path = std::filesystem::path(rc.out_dir) / (sys + "_steps" + std::to_string(gs.steps) + "_t" + tag(ts[i]) + ".csv");
        write_atomic(path, csv[i]);
        std::printf("%s\n", path.c_str());
    }
    return kPass;
}

int cmd_evolve_compare(const RunConfig& rc) {
    const Scenario& sc = rc.scenario;
    const std::string sys = sc.evolve.system == System::DWW ? "dww" : "jm";
    const auto run = run_evolve_compare(sc, sc.evolve);
    const auto table = std::filesystem::path(rc.out_dir) / ("evolve_" + sys + "_errors.csv");
    write_atomic(table, errors_csv(run, sc.evolve.system));
    std::printf("%s\n", table.c_str());
    VerificationReport rep;
    keep(rep.checks, check_evolve_run(sc, run, rc.refine));
    return finish("evolve-compare " + sys, "evolve_compare_" + sys + ".json", rep, rc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Darboux transformations of the DWW and JM systems: verification, export, oracle comparison"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON run configuration");
        sub->add_option("--out", common.out_dir, "output directory (overrides out_dir)");
        sub->add_option("--tolerance-scale", common.tol_scale, "multiply every tolerance by this factor");
    };

    std::string vsys;
    auto* verify = app.add_subcommand("verify", "run a verification subset and write a JSON report");
    verify->add_option("system", vsys, "dww | jm | miura | cross")->required()->check(CLI::IsMember({"dww", "jm", "miura", "cross"}));
    add_common(verify);

    std::optional<std::string> gsys;
    std::optional<int> gsteps;
    std::vector<double> gtimes;
    auto* generate = app.add_subcommand("generate", "write x,q,r (or x,u0,u1) CSV profiles of DT solutions");
    generate->add_option("system", gsys, "dww | jm")->check(CLI::IsMember({"dww", "jm"}));
    generate->add_option("--steps", gsteps, "number of DT steps (0 = seed)");
    generate->add_option("--times", gtimes, "comma-separated sample times")->delimiter(',');
    add_common(generate);

    std::optional<std::string> esys;
    std::optional<double> et_end, edt;
    bool refine = false;
    auto* evolve = app.add_subcommand("evolve-compare", "integrate the one-step DT solution and tabulate errors");
    evolve->add_option("--system", esys, "dww | jm")->check(CLI::IsMember({"dww", "jm"}));
    evolve->add_option("--t-end", et_end, "integration horizon");
    evolve->add_option("--dt", edt, "time step");
    evolve->add_flag("--refine", refine, "also run dt/2 and dt/4 and report the reduction ratio");
    add_common(evolve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kConfig;
    }

    try {
        RunConfig rc = load(common);
        if (*verify) return cmd_verify(vsys, rc);
        if (*generate) {
            if (gsys) rc.generate.system = *gsys == "dww" ? System::DWW : System::JM;
            if (gsteps) rc.generate.steps = *gsteps;
            if (!gtimes.empty()) rc.generate.times = gtimes;
            if (rc.generate.steps < 0 || rc.generate.steps > static_cast<int>(rc.scenario.seeds.eigen.size()))
                throw config_error("--steps must be between 0 and the number of seed potentials");
            return cmd_generate(rc);
        }
        if (esys) rc.scenario.evolve.system = *esys == "dww" ? System::DWW : System::JM;
        if (et_end) rc.scenario.evolve.t_end = *et_end;
        if (edt) rc.scenario.evolve.dt = *edt;
        if (!(rc.scenario.evolve.t_end > 0.0) || !(rc.scenario.evolve.dt > 0.0))
            throw config_error("--t-end and --dt must be positive");
        rc.refine = rc.refine || refine;
        return cmd_evolve_compare(rc);
    } catch (const Error& e) {
        std::fprintf(stderr, "dtforge: %s\n", e.what());
        return exit_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "dtforge: %s\n", e.what());
        return kFail;
    }
}
