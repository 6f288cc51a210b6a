#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontwave/analysis.hpp"
#include "frontwave/config.hpp"
#include "frontwave/error.hpp"

namespace frontwave::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitModel = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

int exit_code(ErrorKind kind);

/// R0, equilibrium, l0, c*, c0 and decay rates for a config.
nlohmann::json speeds_json(const RunConfig& config);

struct ScenarioResult {
    RunTrace trace;
    OutcomeReport report;
    double c0 = 0.0;  ///< 0 when R0 <= 1
    double l0 = 0.0;
};

/// Simulates one config and builds its report. The trace member is filled
/// as the run proceeds, so it holds partial data if this throws.
void run_scenario(const RunConfig& config, ScenarioResult& result);

struct SweepCell {
    double h0 = 0.0;
    double amplitude = 0.0;
    double mu = 0.0;  ///< mu1 = mu2; 0 keeps the base values
};

/// Cartesian product of the sweep lists, h0-major, then amplitude, then mu.
std::vector<SweepCell> sweep_cells(const RunConfig& config);

/// Config for one cell: h0 and both amplitudes replaced, mu1 = mu2 = mu.
RunConfig cell_config(const RunConfig& base, const SweepCell& cell);

inline constexpr std::string_view kSweepHeader =
    "index,h0,amplitude,mu1,mu2,classification,c_hat,c_hat_stderr,h_star_hat,h_final,status";

/// Runs every cell on up to `workers` threads; rows are ordered by cell
/// index, so the text does not depend on the worker count.
std::string sweep_csv(const RunConfig& config, unsigned workers);

/// Entry point shared by the frontwave binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace frontwave::cli
