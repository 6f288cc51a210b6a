#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "frontwave/analysis.hpp"
#include "frontwave/fbsolver.hpp"
#include "frontwave/model.hpp"
#include "frontwave/semiwave.hpp"

namespace frontwave {

/// Everything a CLI run needs. Stored as plain values so that a config
/// round-trips through serialize_config / parse_config unchanged.
struct RunConfig {
    // model
    std::string nonlinearity = "saturating";  ///< saturating | cholera
    double pH = 2.0, qH = 1.0;                ///< H(z) = pH z / (1 + qH z); cholera: H(z) = pH z
    double pG = 2.0, qG = 1.0;                ///< G(z) = pG z / (1 + qG z)
    double d1 = 1.0, d2 = 1.0, a = 1.0, b = 1.0, mu1 = 1.0, mu2 = 1.0;
    std::string boundary = "neumann";
    double z_max = 100.0;  ///< hypothesis sampling range

    // initial data
    std::string shape = "cosine-bump";  ///< sine | cosine-bump | table
    double h0 = 2.0;
    double amplitude_u = 0.5;
    double amplitude_v = 0.5;
    std::size_t nodes = 801;
    std::string table;  ///< CSV with columns x,u,v when shape = table

    // semi-wave numerics
    double sw_dx = 0.02;
    double sw_x_max = 0.0;  ///< 0: automatic
    double sw_residual_tol = 1e-8;
    double sw_c0_tol = 1e-9;

    // free-boundary numerics
    std::size_t N = 400;
    double dt_cap = 1e-3;
    double cfl = 0.4;

    // stop rule
    double t_end = 60.0;
    double front_budget = std::numeric_limits<double>::infinity();
    bool stop_on_vanishing = true;
    double vanishing_level = 1e-6;
    double vanishing_duration = 1.0;

    // output
    double sample_every = 0.05;
    std::vector<double> snapshot_times;  ///< empty: t_end / 4, t_end / 2, 3 t_end / 4, t_end

    // analysis
    double window_fraction = 0.5;
    double ray_lo = 0.25;
    double ray_hi = 0.5;

    // sweep grid; an empty list keeps the base value
    std::vector<double> sweep_h0;
    std::vector<double> sweep_amplitude;
    std::vector<double> sweep_mu;  ///< sets mu1 = mu2

    bool operator==(const RunConfig&) const = default;
};

/// Parses "section.key = value" lines. Blank lines and lines whose first
/// non-space character is '#' are skipped. Unknown keys, malformed values
/// and duplicates raise Config errors. Values are range-checked.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Every key in a fixed order, numbers at 17 significant digits.
std::string serialize_config(const RunConfig& config);

/// Names of all recognised keys, in serialization order.
std::vector<std::string> config_keys();

/// Throws Config on out-of-range values or a missing table file.
void validate_config(const RunConfig& config);

Nonlinearity make_nonlinearity(const RunConfig& config);
ModelParams make_params(const RunConfig& config);
InitialData make_initial_data(const RunConfig& config);
SemiWaveNumerics make_semiwave_numerics(const RunConfig& config);
FbNumerics make_fb_numerics(const RunConfig& config);
StopRule make_stop_rule(const RunConfig& config);

}  // namespace frontwave
