#include "frontwave/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "frontwave/io.hpp"
#include "frontwave/numerics.hpp"

namespace frontwave::cli {

namespace {

std::string snapshot_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snapshot_%03zu.csv", index);
    return buf;
}

void write_trace_outputs(io::OutputDir& out, const RunTrace& trace) {
    out.write("trace.csv", io::trace_csv(trace));
    for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
        out.write(snapshot_name(i), io::snapshot_csv(trace.snapshots[i]));
    }
}

std::string describe_violations(const ValidationReport& rep) {
    std::string msg = "initial data violates";
    const std::size_t shown = std::min<std::size_t>(rep.violations.size(), 5);
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& v = rep.violations[i];
        msg += (i ? "; " : " ") + v.clause + " for " + v.component + " at node " + std::to_string(v.node);
    }
    if (rep.violations.size() > shown) {
        msg += " (+" + std::to_string(rep.violations.size() - shown) + " more)";
    }
    return msg;
}

/// Numbers in the sweep table use the same 17-digit format as the other CSVs.
std::string field(double v) { return numerics::format_double(v); }

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

std::string sweep_row(std::size_t index, const RunConfig& cfg) {
    std::string row = std::to_string(index) + "," + field(cfg.h0) + "," + field(cfg.amplitude_u) + "," +
                      field(cfg.mu1) + "," + field(cfg.mu2) + ",";
    ScenarioResult r;
    try {
        run_scenario(cfg, r);
    } catch (const std::exception& e) {
        return row + "Failed,,,," + (r.trace.samples.empty() ? "" : field(r.trace.samples.back().h)) + "," +
               sanitize(e.what());
    }
    const auto& rep = r.report;
    row += to_string(rep.classification) + "," + field(rep.c_hat) + "," + field(rep.c_hat_stderr) + "," +
           field(rep.h_star_hat) + "," + field(r.trace.final_state.h) + ",ok";
    return row;
}

nlohmann::json check_json(const RunConfig& c, bool& passed) {
    const auto nl = make_nonlinearity(c);
    const auto params = make_params(c);
    const auto hyp = check_hypotheses(nl, params, c.z_max);
    nlohmann::json clauses = nlohmann::json::array();
    for (const auto& cl : hyp.clauses) {
        clauses.push_back({{"clause", cl.name}, {"passed", cl.passed}, {"detail", cl.detail}});
    }
    const auto init = make_initial_data(c);
    const auto val = validate_initial_data(init, params);
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : val.violations) {
        violations.push_back({{"clause", v.clause}, {"component", v.component}, {"node", v.node}});
    }
    passed = hyp.passed() && val.ok();
    return {{"hypotheses", {{"passed", hyp.passed()}, {"weak_concavity", hyp.weak_concavity}, {"clauses", clauses}}},
            {"initial_data", {{"passed", val.ok()}, {"violations", violations}}},
            {"R0", compute_R0(nl, params)}};
}

int cmd_speeds(const RunConfig& c, const std::string& dir, bool seedless, std::ostream& out) {
    const auto j = speeds_json(c);
    io::OutputDir od(dir);
    od.write_json("speeds.json", j);
    od.write_manifest("speeds", "ok", seedless);
    out << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_semiwave(const RunConfig& c, const std::string& dir, bool seedless, std::ostream& out) {
    const auto nl = make_nonlinearity(c);
    const auto params = make_params(c);
    const auto eq = compute_equilibrium(nl, params);
    const auto res = find_c0(nl, params, make_semiwave_numerics(c));
    const auto& p = res.profile;
    nlohmann::json j = {{"c0", res.speeds.c0},
                        {"c_star", res.speeds.c_star},
                        {"F_residual", res.speeds.F_residual},
                        {"X_max", p.X_max},
                        {"dx", p.dx},
                        {"slope0_phi", p.slope0_phi},
                        {"slope0_psi", p.slope0_psi},
                        {"residual_inf", p.residual_inf},
                        {"monotone", p.monotone(eq.u_star, eq.v_star)}};
    io::OutputDir od(dir);
    od.write("profile.csv", io::profile_csv(p));
    od.write_json("semiwave.json", j);
    od.write_manifest("semiwave", "ok", seedless);
    out << "c0 = " << numerics::format_double(res.speeds.c0) << ", profile on [0, "
        << numerics::format_double(p.X_max) << "] written to " << (od.path() / "profile.csv").string() << "\n";
    return kExitOk;
}

int cmd_simulate(const RunConfig& c, const std::string& dir, bool seedless, std::ostream& out) {
    io::OutputDir od(dir);
    od.write("config.txt", serialize_config(c));
    ScenarioResult r;
    try {
        run_scenario(c, r);
    } catch (const Error& e) {
        write_trace_outputs(od, r.trace);
        od.write("FAILED", std::string(e.what()) + "\n");
        od.write_manifest("simulate", "failed", seedless);
        throw;
    }
    write_trace_outputs(od, r.trace);
    auto j = io::report_json(r.report);
    j["c0"] = r.c0;
    j["l0"] = std::isfinite(r.l0) ? nlohmann::json(r.l0) : nlohmann::json(nullptr);
    j["h_final"] = r.trace.final_state.h;
    j["t_final"] = r.trace.final_state.t;
    j["stop_reason"] = to_string(r.trace.stop);
    j["steps"] = r.trace.steps;
    j["max_hprime"] = r.trace.max_hprime;
    j["min_density"] = r.trace.min_density;
    od.write_json("report.json", j);
    od.write_manifest("simulate", "ok", seedless);
    out << to_string(r.report.classification) << ": h(" << numerics::format_double(r.trace.final_state.t)
        << ") = " << numerics::format_double(r.trace.final_state.h) << ", c_hat = "
        << numerics::format_double(r.report.c_hat) << "\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& c, const std::string& dir, unsigned workers, bool seedless, std::ostream& out) {
    io::OutputDir od(dir);
    od.write("config.txt", serialize_config(c));
    const std::string csv = sweep_csv(c, workers);
    od.write("sweep.csv", csv);
    od.write_manifest("sweep", "ok", seedless);
    out << sweep_cells(c).size() << " cells written to " << (od.path() / "sweep.csv").string() << "\n";
    return kExitOk;
}

int cmd_check(const RunConfig& c, const std::string& dir, bool seedless, std::ostream& out) {
    bool passed = false;
    const auto j = check_json(c, passed);
    io::OutputDir od(dir);
    od.write_json("check.json", j);
    od.write_manifest("check", passed ? "ok" : "failed", seedless);
    out << j.dump(2) << "\n";
    return passed ? kExitOk : kExitModel;
}

}  // namespace

int exit_code(ErrorKind kind) {
    switch (error_category(kind)) {
        case ErrorCategory::ModelRegime: return kExitModel;
        case ErrorCategory::Io: return kExitIo;
        case ErrorCategory::Solver: return kExitSolver;
    }
    return kExitSolver;
}

nlohmann::json speeds_json(const RunConfig& c) {
    const auto nl = make_nonlinearity(c);
    auto params = make_params(c);
    const double R0 = compute_R0(nl, params);
    const auto eq = compute_equilibrium(nl, params);
    const double l0 = compute_l0(nl, params);
    const auto num = make_semiwave_numerics(c);
    const auto res = find_c0(nl, params, num);
    const auto beta_c0 = decay_rate_theoretical(nl, params, res.speeds.c0);
    const auto beta_0 = decay_rate_theoretical(nl, params, 0.0);
    return {{"boundary", to_string(params.boundary)},
            {"R0", R0},
            {"u_star", eq.u_star},
            {"v_star", eq.v_star},
            {"l0", l0},
            {"c_star", res.speeds.c_star},
            {"lambda_star", res.speeds.lambda_star},
            {"c0", res.speeds.c0},
            {"F_residual", res.speeds.F_residual},
            {"beta", beta_c0.beta},
            {"beta_at_zero", beta_0.beta}};
}

void run_scenario(const RunConfig& c, ScenarioResult& r) {
    const auto nl = make_nonlinearity(c);
    const auto params = make_params(c);
    const auto init = make_initial_data(c);
    const auto val = validate_initial_data(init, params);
    if (!val.ok()) throw Error(ErrorKind::Config, describe_violations(val));

    ClassifyThresholds th;
    ReportOptions ro;
    ro.window_fraction = c.window_fraction;
    ro.ray_lo = c.ray_lo;
    ro.ray_hi = c.ray_hi;
    SemiWaveProfile profile;
    auto sw = make_semiwave_numerics(c);
    const bool endemic = compute_R0(nl, params) > 1.0;
    if (endemic) {
        th.eq = compute_equilibrium(nl, params);
        th.l0 = compute_l0(nl, params);
        auto sp = find_c0(nl, params, sw);
        r.c0 = sp.speeds.c0;
        profile = std::move(sp.profile);
    } else {
        th.l0 = std::numeric_limits<double>::infinity();
    }
    r.l0 = th.l0;

    simulate_into(params, nl, init, make_fb_numerics(c), make_stop_rule(c), r.trace);

    if (endemic) {
        // The comparison profile has to reach back over the whole front window.
        const double need = 1.05 * r.trace.final_state.h;
        if (profile.X_max < need) {
            sw.X_max = need;
            profile = solve_semiwave(r.c0, nl, params, sw);
        }
        ro.c0 = r.c0;
        ro.profile = &profile;
    }
    r.report = build_report(r.trace, params, th, ro);
    if (!endemic) r.report.notes.emplace_back("R0 <= 1: no positive equilibrium, speeds not computed");
}

std::vector<SweepCell> sweep_cells(const RunConfig& c) {
    const std::vector<double> h0s = c.sweep_h0.empty() ? std::vector<double>{c.h0} : c.sweep_h0;
    const std::vector<double> amps = c.sweep_amplitude.empty() ? std::vector<double>{c.amplitude_u} : c.sweep_amplitude;
    const std::vector<double> mus = c.sweep_mu.empty() ? std::vector<double>{0.0} : c.sweep_mu;
    std::vector<SweepCell> cells;
    for (double h0 : h0s) {
        for (double amp : amps) {
            for (double mu : mus) cells.push_back({h0, amp, mu});
        }
    }
    return cells;
}

RunConfig cell_config(const RunConfig& base, const SweepCell& cell) {
    RunConfig c = base;
    c.h0 = cell.h0;
    if (!base.sweep_amplitude.empty()) {
        c.amplitude_u = cell.amplitude;
        c.amplitude_v = cell.amplitude;
    }
    if (cell.mu > 0.0) {
        c.mu1 = cell.mu;
        c.mu2 = cell.mu;
    }
    c.sweep_h0.clear();
    c.sweep_amplitude.clear();
    c.sweep_mu.clear();
    return c;
}

std::string sweep_csv(const RunConfig& c, unsigned workers) {
    const auto cells = sweep_cells(c);
    std::vector<std::string> rows(cells.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            rows[i] = sweep_row(i, cell_config(c, cells[i]));
        }
    };
    const unsigned n = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::string out(kSweepHeader);
    out += '\n';
    for (const auto& row : rows) out += row + '\n';
    return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"frontwave: semi-waves, spreading speeds and free-boundary simulations"};
    app.fallthrough();
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = "frontwave-out";
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    bool seedless = false;
    app.add_option("--config", config_path, "config file (section.key = value lines)");
    app.add_option("--out", out_dir, "output directory, created if missing");
    app.add_option("--workers", workers, "sweep worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--seedless", seedless, "record that the run uses no random numbers");
    auto* speeds = app.add_subcommand("speeds", "R0, equilibrium, l0, c*, c0 and decay rates");
    auto* semiwave = app.add_subcommand("semiwave", "export the semi-wave profile at c0");
    auto* simulate = app.add_subcommand("simulate", "run the free-boundary problem and analyse it");
    auto* sweep = app.add_subcommand("sweep", "run a parameter grid in parallel");
    auto* check = app.add_subcommand("check", "validate the nonlinearity and the initial data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitModel;
    }

    try {
        const RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (speeds->parsed()) return cmd_speeds(cfg, out_dir, seedless, out);
        if (semiwave->parsed()) return cmd_semiwave(cfg, out_dir, seedless, out);
        if (simulate->parsed()) return cmd_simulate(cfg, out_dir, seedless, out);
        if (sweep->parsed()) return cmd_sweep(cfg, out_dir, workers, seedless, out);
        if (check->parsed()) return cmd_check(cfg, out_dir, seedless, out);
    } catch (const Error& e) {
        err << "frontwave: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "frontwave: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitModel;
}

}  // namespace frontwave::cli
