#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "frontwave/cli.hpp"
#include "frontwave/io.hpp"
#include "frontwave/numerics.hpp"

using namespace frontwave;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "frontwave");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "frontwave_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir.parent_path());
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const auto path = fs::temp_directory_path() / "frontwave_cli_tests" / (name + ".cfg");
    fs::create_directories(path.parent_path());
    std::ofstream(path) << text;
    return path;
}

// Every file listed in the manifest exists with the recorded size and checksum.
void expect_manifest_consistent(const fs::path& dir) {
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    ASSERT_TRUE(m.contains("files"));
    for (const auto& f : m["files"]) {
        const auto body = slurp(dir / f["name"].get<std::string>());
        EXPECT_EQ(body.size(), f["bytes"].get<std::size_t>());
        char hex[9];
        std::snprintf(hex, sizeof(hex), "%08x", io::crc32(body));
        EXPECT_EQ(f["crc32"].get<std::string>(), hex);
    }
}

const char* kShortRun =
    "fb.N = 100\n"
    "stop.t_end = 20\n"
    "semiwave.x_max = 30\n";

}  // namespace

TEST(Cli, ExitCodesFollowErrorCategories) {
    EXPECT_EQ(cli::exit_code(ErrorKind::NoPositiveRoot), cli::kExitModel);
    EXPECT_EQ(cli::exit_code(ErrorKind::Config), cli::kExitModel);
    EXPECT_EQ(cli::exit_code(ErrorKind::NonCompliant), cli::kExitModel);
    EXPECT_EQ(cli::exit_code(ErrorKind::NoConvergence), cli::kExitSolver);
    EXPECT_EQ(cli::exit_code(ErrorKind::StabilityViolation), cli::kExitSolver);
    EXPECT_EQ(cli::exit_code(ErrorKind::Io), cli::kExitIo);
}

TEST(Cli, SpeedsReportsClosedForms) {
    const auto dir = fresh_dir("speeds");
    const auto r = invoke({"--out", dir.string(), "speeds"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(dir / "speeds.json"));
    for (const char* key : {"boundary", "R0", "u_star", "v_star", "l0", "c_star", "lambda_star", "c0",
                            "F_residual", "beta", "beta_at_zero"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["R0"].get<double>(), 4.0);
    EXPECT_NEAR(j["c_star"].get<double>(), 2.0, 1e-9);
    EXPECT_EQ(nlohmann::json::parse(r.out), j);
    expect_manifest_consistent(dir);
}

TEST(Cli, OutputsAreByteIdenticalAcrossRuns) {
    const auto a = fresh_dir("det_a");
    const auto b = fresh_dir("det_b");
    const auto cfg = write_config("det", kShortRun);
    ASSERT_EQ(invoke({"--config", cfg.string(), "--out", a.string(), "simulate"}).code, 0);
    ASSERT_EQ(invoke({"--config", cfg.string(), "--out", b.string(), "simulate"}).code, 0);
    for (const auto& e : fs::directory_iterator(a)) {
        EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path().filename();
    }
}

TEST(Cli, SimulateWritesDocumentedSchema) {
    const auto dir = fresh_dir("simulate");
    const auto cfg = write_config("simulate", kShortRun);
    const auto r = invoke({"--config", cfg.string(), "--out", dir.string(), "--seedless", "simulate"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(first_line(dir / "trace.csv"), io::kTraceHeader);
    for (int i = 0; i < 4; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%03d.csv", i);
        EXPECT_EQ(first_line(dir / name), io::kSnapshotHeader) << name;
    }
    const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
    for (const char* key : {"classification", "c_hat", "c_hat_stderr", "h_star_hat", "drift_variation",
                            "drift_converged", "profile_times", "profile_sup_error", "interior_fit", "notes",
                            "c0", "l0", "h_final", "t_final", "stop_reason", "steps", "max_hprime",
                            "min_density"}) {
        EXPECT_TRUE(rep.contains(key)) << key;
    }
    EXPECT_EQ(rep["classification"], "Spreading");
    EXPECT_EQ(rep["t_final"].get<double>(), 20.0);
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(manifest["status"], "ok");
    EXPECT_EQ(manifest["seedless"], true);
    expect_manifest_consistent(dir);
    EXPECT_EQ(parse_config(slurp(dir / "config.txt")), parse_config(kShortRun));
}

TEST(Cli, SemiwaveExportsProfile) {
    const auto dir = fresh_dir("semiwave");
    const auto r = invoke({"--out", dir.string(), "semiwave"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(first_line(dir / "profile.csv"), io::kProfileHeader);
    const auto j = nlohmann::json::parse(slurp(dir / "semiwave.json"));
    EXPECT_EQ(j["monotone"], true);
    EXPECT_LE(j["residual_inf"].get<double>(), 1e-8);
    expect_manifest_consistent(dir);
}

TEST(Cli, CheckPassesAndFails) {
    const auto ok = fresh_dir("check_ok");
    EXPECT_EQ(invoke({"--out", ok.string(), "check"}).code, 0);
    const auto j = nlohmann::json::parse(slurp(ok / "check.json"));
    EXPECT_EQ(j["hypotheses"]["passed"], true);
    EXPECT_EQ(j["initial_data"]["passed"], true);

    const auto bad = fresh_dir("check_bad");
    const auto cfg = write_config("check_bad", "model.boundary = neumann\ninit.shape = sine\n");
    EXPECT_EQ(invoke({"--config", cfg.string(), "--out", bad.string(), "check"}).code, cli::kExitModel);
    const auto jb = nlohmann::json::parse(slurp(bad / "check.json"));
    EXPECT_EQ(jb["initial_data"]["passed"], false);
}

TEST(Cli, SubcriticalModelExitsWithModelCode) {
    const auto cfg = write_config("subcritical", "model.pH = 0.9\nmodel.pG = 0.9\n");
    const auto r = invoke({"--config", cfg.string(), "--out", fresh_dir("sub").string(), "speeds"});
    EXPECT_EQ(r.code, cli::kExitModel);
    EXPECT_NE(r.err.find("NoPositiveRoot"), std::string::npos) << r.err;
}

TEST(Cli, BadConfigAndArgumentsExitWithModelCode) {
    const auto cfg = write_config("badkey", "model.unknown = 1\n");
    EXPECT_EQ(invoke({"--config", cfg.string(), "speeds"}).code, cli::kExitModel);
    EXPECT_EQ(invoke({"--config", "/nonexistent/x.cfg", "speeds"}).code, cli::kExitModel);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitModel);
    EXPECT_EQ(invoke({}).code, cli::kExitModel);
    EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk);
}

TEST(Cli, InvalidInitialDataIsRejectedBeforeSimulating) {
    const auto dir = fresh_dir("badinit");
    const auto cfg = write_config("badinit", "model.boundary = dirichlet\ninit.shape = cosine-bump\n");
    const auto r = invoke({"--config", cfg.string(), "--out", dir.string(), "simulate"});
    EXPECT_EQ(r.code, cli::kExitModel);
    EXPECT_TRUE(fs::exists(dir / "FAILED"));
    EXPECT_EQ(nlohmann::json::parse(slurp(dir / "manifest.json"))["status"], "failed");
}

TEST(Cli, UnwritableOutputExitsWithIoCode) {
    const auto base = fresh_dir("io");
    fs::create_directories(base);
    std::ofstream(base / "plain_file") << "x";
    const auto r = invoke({"--out", (base / "plain_file" / "sub").string(), "speeds"});
    EXPECT_EQ(r.code, cli::kExitIo) << r.err;
}

TEST(Cli, SweepIndependentOfWorkerCount) {
    const auto cfg = write_config("sweep", std::string(kShortRun) + "sweep.h0 = 1, 2\nsweep.mu = 0.5, 1\n");
    const auto one = fresh_dir("sweep1");
    const auto many = fresh_dir("sweep3");
    ASSERT_EQ(invoke({"--config", cfg.string(), "--out", one.string(), "--workers", "1", "sweep"}).code, 0);
    ASSERT_EQ(invoke({"--config", cfg.string(), "--out", many.string(), "--workers", "3", "sweep"}).code, 0);
    const auto csv = slurp(one / "sweep.csv");
    EXPECT_EQ(csv, slurp(many / "sweep.csv"));
    EXPECT_EQ(first_line(one / "sweep.csv"), cli::kSweepHeader);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
    expect_manifest_consistent(one);
}

TEST(Cli, SingleCellSweepMatchesSimulate) {
    const auto cfg_text = std::string(kShortRun);
    auto base = parse_config(cfg_text);
    base.sweep_h0 = {base.h0};
    const auto csv = cli::sweep_csv(base, 1);
    cli::ScenarioResult r;
    cli::run_scenario(parse_config(cfg_text), r);
    const auto row = csv.substr(csv.find('\n') + 1);
    EXPECT_NE(row.find("," + numerics::format_double(r.report.c_hat) + ","), std::string::npos) << row;
    EXPECT_NE(row.find("," + numerics::format_double(r.trace.final_state.h) + ",ok"), std::string::npos) << row;
}

TEST(Cli, SweepCellsAreOrderedProduct) {
    RunConfig c;
    c.sweep_h0 = {1.0, 2.0};
    c.sweep_amplitude = {0.1, 0.2, 0.3};
    const auto cells = cli::sweep_cells(c);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_EQ(cells[0].h0, 1.0);
    EXPECT_EQ(cells[2].amplitude, 0.3);
    EXPECT_EQ(cells[3].h0, 2.0);
    const auto cc = cli::cell_config(c, cells[4]);
    EXPECT_EQ(cc.h0, 2.0);
    EXPECT_EQ(cc.amplitude_u, 0.2);
    EXPECT_EQ(cc.amplitude_v, 0.2);
    EXPECT_EQ(cc.mu1, c.mu1);
    EXPECT_TRUE(cc.sweep_h0.empty());
}
