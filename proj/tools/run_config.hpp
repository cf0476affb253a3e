// JSON run configuration for the dtforge CLI, plus report and CSV output.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "dtforge/verify.hpp"

namespace dtforge::cli {

using nlohmann::json;

struct GenerateSpec {
    System system = System::DWW;
    int steps = 1;
    std::vector<double> times{0.0};
};

struct RunConfig {
    Scenario scenario;
    GenerateSpec generate;
    bool refine = false;  // evolve-compare: also run dt/2 and dt/4
    std::string out_dir = "out";
};

inline Error config_error(const std::string& what) { return Error(ErrorKind::Config, "config: " + what); }

namespace detail {

inline void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw config_error(where + " must be an object");
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw config_error("unknown key '" + k + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& dst, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error(where + "." + key + " has the wrong type");
    }
}

inline System parse_system(const std::string& s) {
    if (s == "dww") return System::DWW;
    if (s == "jm") return System::JM;
    throw config_error("system must be 'dww' or 'jm' (got '" + s + "')");
}

inline Grid read_grid(const json& j, const std::string& where, Grid g, bool periodic) {
    allow_keys(j, where, {"x0", "x1", "n", "fd_order"});
    double x0 = g.x0, x1 = g.x1;
    int n = g.n, fo = g.fd_order;
    read(j, "x0", x0, where);
    read(j, "x1", x1, where);
    read(j, "n", n, where);
    read(j, "fd_order", fo, where);
    try {
        return make_grid(x0, x1, n, periodic, fo);
    } catch (const Error& e) {
        throw config_error(where + ": " + e.what());
    }
}

inline void read_tolerances(const json& j, Tolerances& t) {
    const std::string w = "tolerances";
    allow_keys(j, w, {"seed_stationary", "seed_time", "pde", "eigen_stationary", "eigen_time", "form",
                      "miura_roundtrip", "intertwining", "jm_pde", "conjugation", "reconstruction", "burgers",
                      "evolve", "halving_ratio", "gauge", "gauge_chain", "gauge_jm"});
    read(j, "seed_stationary", t.seed_stationary, w);
    read(j, "seed_time", t.seed_time, w);
    read(j, "pde", t.pde, w);
    read(j, "eigen_stationary", t.eigen_stationary, w);
    read(j, "eigen_time", t.eigen_time, w);
    read(j, "form", t.form, w);
    read(j, "miura_roundtrip", t.miura_roundtrip, w);
    read(j, "intertwining", t.intertwining, w);
    read(j, "jm_pde", t.jm_pde, w);
    read(j, "conjugation", t.conjugation, w);
    read(j, "reconstruction", t.reconstruction, w);
    read(j, "burgers", t.burgers, w);
    read(j, "evolve", t.evolve, w);
    read(j, "halving_ratio", t.halving_ratio, w);
    read(j, "gauge", t.gauge, w);
    read(j, "gauge_chain", t.gauge_chain, w);
    read(j, "gauge_jm", t.gauge_jm, w);
}

}  // namespace detail

/// Parses and validates; every failure is an ErrorKind::Config error.
inline RunConfig parse_config(const json& j) {
    using namespace detail;
    RunConfig rc;
    Scenario& sc = rc.scenario;
    allow_keys(j, "config", {"grid", "seed_grid", "spectral_grid", "seed", "time", "tolerances", "tolerance_scale",
                             "generate", "evolve", "burgers", "out_dir"});
    if (j.contains("grid")) sc.dt_grid = read_grid(j["grid"], "grid", sc.dt_grid, false);
    if (j.contains("seed_grid")) sc.seed_grid = read_grid(j["seed_grid"], "seed_grid", sc.seed_grid, false);
    if (j.contains("spectral_grid"))
        sc.spectral_grid = read_grid(j["spectral_grid"], "spectral_grid", sc.spectral_grid, true);
    if (j.contains("seed")) {
        const json& s = j["seed"];
        allow_keys(s, "seed", {"kind", "eigen"});
        read(s, "kind", sc.seeds.kind, "seed");
        if (sc.seeds.kind != "trivial") throw config_error("seed.kind must be 'trivial'");
        if (s.contains("eigen")) {
            if (!s["eigen"].is_array()) throw config_error("seed.eigen must be an array");
            sc.seeds.eigen.clear();
            for (const auto& e : s["eigen"]) {
                allow_keys(e, "seed.eigen[]", {"lambda", "a", "b", "c"});
                EigenParams p;
                read(e, "lambda", p.lambda, "seed.eigen[]");
                read(e, "a", p.a, "seed.eigen[]");
                read(e, "b", p.b, "seed.eigen[]");
                if (e.contains("c")) {
                    double c = 0.0;
                    read(e, "c", c, "seed.eigen[]");
                    p.c = c;
                }
                if (p.lambda == 0.0) throw config_error("seed.eigen[].lambda must be nonzero");
                seed_offset(p);  // throws Config on c^2 != lambda a b
                sc.seeds.eigen.push_back(p);
            }
        }
    }
    if (sc.seeds.eigen.size() < 2) throw config_error("seed.eigen needs at least two potentials");
    for (std::size_t i = 0; i < sc.seeds.eigen.size(); ++i)
        for (std::size_t k = i + 1; k < sc.seeds.eigen.size(); ++k)
            if (sc.seeds.eigen[i].lambda == sc.seeds.eigen[k].lambda)
                throw config_error("seed.eigen lambdas must be distinct");
    if (j.contains("time")) {
        const json& t = j["time"];
        allow_keys(t, "time", {"t0", "dt", "count", "seed_dt"});
        read(t, "t0", sc.t0, "time");
        read(t, "dt", sc.dt, "time");
        read(t, "count", sc.count, "time");
        read(t, "seed_dt", sc.seed_dt, "time");
    }
    if (sc.count < 5) throw config_error("time.count must be >= 5 (5-sample time derivative)");
    if (!(sc.dt > 0.0) || !(sc.seed_dt > 0.0)) throw config_error("time steps must be positive");
    if (j.contains("tolerances")) read_tolerances(j["tolerances"], sc.tol);
    read(j, "tolerance_scale", sc.tol_scale, "config");
    if (!(sc.tol_scale > 0.0)) throw config_error("tolerance_scale must be positive");
    if (j.contains("generate")) {
        const json& g = j["generate"];
        allow_keys(g, "generate", {"system", "steps", "times"});
        std::string sys = "dww";
        read(g, "system", sys, "generate");
        rc.generate.system = parse_system(sys);
        read(g, "steps", rc.generate.steps, "generate");
        read(g, "times", rc.generate.times, "generate");
    }
    if (rc.generate.steps < 0 || rc.generate.steps > static_cast<int>(sc.seeds.eigen.size()))
        throw config_error("generate.steps must be between 0 and the number of seed potentials");
    if (j.contains("evolve")) {
        const json& e = j["evolve"];
        allow_keys(e, "evolve", {"system", "x0", "x1", "n", "t_end", "dt", "filter", "sample_every", "refine"});
        EvolveSpec& ev = sc.evolve;
        std::string sys = ev.system == System::DWW ? "dww" : "jm";
        read(e, "system", sys, "evolve");
        ev.system = parse_system(sys);
        double x0 = ev.window.x0, x1 = ev.window.x1;
        int n = ev.window.n;
        read(e, "x0", x0, "evolve");
        read(e, "x1", x1, "evolve");
        read(e, "n", n, "evolve");
        try {
            ev.window = make_grid(x0, x1, n, true);
        } catch (const Error& err) {
            throw config_error(std::string("evolve: ") + err.what());
        }
        read(e, "t_end", ev.t_end, "evolve");
        read(e, "dt", ev.dt, "evolve");
        read(e, "filter", ev.filter, "evolve");
        read(e, "sample_every", ev.sample_every, "evolve");
        read(e, "refine", rc.refine, "evolve");
    }
    const EvolveSpec& ev = sc.evolve;
    if (!(ev.t_end > 0.0) || !(ev.dt > 0.0)) throw config_error("evolve.t_end and evolve.dt must be positive");
    if (!(ev.filter > 0.0 && ev.filter <= 1.0)) throw config_error("evolve.filter must lie in (0, 1]");
    if (ev.sample_every < 1) throw config_error("evolve.sample_every must be >= 1");
    const auto& p0 = sc.seeds.eigen.front();
    if (!(p0.lambda > 0.0 && p0.a > 0.0 && p0.b > 0.0))
        throw config_error("evolve compares the first seed potential, which needs lambda, a, b > 0");
    if (j.contains("burgers")) {
        const json& b = j["burgers"];
        allow_keys(b, "burgers", {"x0", "x1", "n", "t", "dt"});
        double x0 = sc.burgers_grid.x0, x1 = sc.burgers_grid.x1;
        int n = sc.burgers_grid.n;
        read(b, "x0", x0, "burgers");
        read(b, "x1", x1, "burgers");
        read(b, "n", n, "burgers");
        try {
            sc.burgers_grid = make_grid(x0, x1, n, true);
        } catch (const Error& err) {
            throw config_error(std::string("burgers: ") + err.what());
        }
        read(b, "t", sc.burgers_t, "burgers");
        read(b, "dt", sc.burgers_dt, "burgers");
    }
    read(j, "out_dir", rc.out_dir, "config");
    return rc;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("malformed JSON in '" + path + "': " + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------------
// output

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes via a temp file in the same directory and renames over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Config, "cannot write '" + path.string() + "'");
        out << content;
        out.flush();
        if (!out) throw Error(ErrorKind::Config, "write failed for '" + path.string() + "'");
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::Config, "cannot rename onto '" + path.string() + "'");
    }
}

inline std::string fields_csv(const std::string& a, const std::string& b, const Field& f1, const Field& f2) {
    std::ostringstream os;
    os << "x," << a << ',' << b << '\n';
    const Grid& g = f1.grid();
    for (int i = 0; i < g.n; ++i) os << fmt17(g.x(i)) << ',' << fmt17(f1[i]) << ',' << fmt17(f2[i]) << '\n';
    return os.str();
}

inline std::string errors_csv(const EvolveRun& r, System sys) {
    std::ostringstream os;
    os << (sys == System::DWW ? "t,err_q,err_r\n" : "t,err_u0,err_u1\n");
    for (std::size_t i = 0; i < r.t.size(); ++i)
        os << fmt17(r.t[i]) << ',' << fmt17(r.err1[i]) << ',' << fmt17(r.err2[i]) << '\n';
    return os.str();
}

inline json report_json(const std::string& command, const VerificationReport& rep, double tol_scale) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"id", c.id},
                          {"criterion", c.criterion},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance},
                          {"comparison", c.lower_bound ? ">=" : "<="},
                          {"pass", c.pass},
                          {"wall_time_s", c.wall_s},
                          {"detail", c.detail}});
    return {{"command", command}, {"tolerance_scale", tol_scale}, {"pass", rep.pass()}, {"checks", checks}};
}

}  // namespace dtforge::cli
