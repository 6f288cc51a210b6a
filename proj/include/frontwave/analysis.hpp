#pragma once

#include <array>
#include <string>
#include <vector>

#include "frontwave/fbsolver.hpp"
#include "frontwave/model.hpp"
#include "frontwave/semiwave.hpp"

namespace frontwave {

enum class Classification { Spreading, Vanishing, Undecided };

std::string to_string(Classification c);

struct ClassifyThresholds {
    double l0 = 0.0;
    Equilibrium eq;
    double vanishing_level = 1e-6;      ///< on sup u + sup v
    double vanishing_duration = 1.0;    ///< time the level must hold up to the end of the trace
    double stabilized = 1e-3;           ///< bound on |h(T) - h(T/2)|
    double growth_margin = 5.0;         ///< front must reach max(2 l0, h0 + margin)
    double interior_band = 0.1;         ///< relative band around (u*, v*) at x = h/2
    std::size_t min_samples = 100;
};

/// Spreading-vanishing label for a finished run.
Classification classify(const RunTrace& trace, const ClassifyThresholds& thresholds);

struct SpeedFit {
    double c_hat = 0.0;
    double slope_stderr = 0.0;
    std::size_t n = 0;
};

/// Least-squares slope of h(t) over the trailing half of the trace.
SpeedFit front_speed(const RunTrace& trace);

struct DriftEstimate {
    double h_star_hat = 0.0;          ///< mean of h - c0 t over the trailing quarter
    double drift_variation = 0.0;     ///< max - min over the trailing quarter
    double previous_variation = 0.0;  ///< same over the quarter before it
    bool converged = false;           ///< drift_variation <= previous_variation / 2
};

DriftEstimate front_drift(const RunTrace& trace, double c0);

/// sup over grid x in [x_lo, h] of |u - phi(h - x)| + |v - psi(h - x)|.
double profile_error(const Snapshot& snapshot, const SemiWaveProfile& profile, double x_lo);

struct InteriorFit {
    double M_hat = 0.0;
    double delta_hat = 0.0;
    double r2 = 0.0;
    std::vector<double> t;
    std::vector<double> deficit;  ///< e(t) at each used snapshot
};

/// Fits e(t) = M exp(-delta t) to the one-sided interior deficit
/// e(t) = sup over [c1 t, c2 t] of max(u* - u, v* - v, 0).
/// Snapshots at t = 0 and snapshots with a zero deficit are skipped.
InteriorFit interior_convergence_fit(const std::vector<Snapshot>& snapshots, const Equilibrium& eq,
                                     double c1, double c2);

struct UpperEnvelope {
    double M1 = 0.0;
    double M2 = 0.0;
    double delta = 0.0;
    double ratio = 0.0;  ///< M1 / M2
    double M() const { return M1 > M2 ? M1 : M2; }
};

/// (u* + M1 e^{-delta t}, v* + M2 e^{-delta t}) as an upper solution.
/// M1 / M2 sits at the geometric mean of (H'(v*)/a, b/G'(u*)) and both are
/// scaled to cover the initial sup-norms. Data below equilibrium gets the
/// smallest positive amplitude, floor * max(u*, v*).
UpperEnvelope upper_envelope_params(const Equilibrium& eq, const ModelParams& params,
                                    double sup_u0, double sup_v0, double floor = 1e-12);

/// Largest excess of sup u over u* + M e^{-delta t} (and likewise for v)
/// over the trace samples; nonpositive when the envelope holds.
double envelope_excess(const RunTrace& trace, const Equilibrium& eq, const UpperEnvelope& env);

/// Profile-derived data entering the front comparison functions.
struct FrontProfileData {
    double c0 = 0.0;
    double u_star = 0.0;
    double v_star = 0.0;
    double min_dphi = 0.0;  ///< min of phi' on [0, 1]
    double min_dpsi = 0.0;
    double phi1 = 0.0;      ///< phi(1)
    double psi1 = 0.0;
};

FrontProfileData front_profile_data(const SemiWaveProfile& profile, const Equilibrium& eq);

/// max of (f(z)/z)' over [lo, hi] on a uniform sample including both ends.
double max_secant_slope_derivative(const Nonlinearity::Fn& f, const Nonlinearity::Fn& df, double lo,
                                   double hi, std::size_t samples = 2001);

struct Inequality {
    std::string name;
    double slack = 0.0;  ///< larger side minus smaller side
};

struct SupersolutionInputs {
    FrontProfileData profile;
    double B_psi = 0.0;  ///< max of (H(z)/z)' on [psi(1), 2 v*]
    double B_phi = 0.0;  ///< max of (G(z)/z)' on [phi(1), 2 u*]
};

struct SupersolutionParams {
    double K = 1.0;
    double sigma = 0.0;
    double delta = 0.0;
    SupersolutionInputs inputs;
    std::array<Inequality, 5> inequalities;

    bool feasible() const;
};

SupersolutionInputs supersolution_inputs(const SemiWaveProfile& profile, const Equilibrium& eq,
                                         const Nonlinearity& nl);

/// Slack of each of the five upper-solution inequalities at (K, sigma, delta).
std::array<Inequality, 5> supersolution_slack(const SupersolutionInputs& in, double K, double sigma,
                                              double delta);

/// K = 1, delta at half the smaller delta cap, sigma at twice the largest
/// sigma floor. Throws Infeasible when an input has the wrong sign.
SupersolutionParams solve_supersolution(const SupersolutionInputs& in);

SupersolutionParams supersolution_feasibility(const SemiWaveProfile& profile, const Equilibrium& eq,
                                              const Nonlinearity& nl);

/// Lower-solution counterpart in the parameters (epsilon, sigma).
struct LowerSolutionInputs {
    FrontProfileData profile;
    double C_psi = 0.0;  ///< max of (H(z)/z)' on [psi(1)/2, v*]
    double C_phi = 0.0;  ///< max of (G(z)/z)' on [phi(1)/2, u*]
};

struct LowerSolutionParams {
    double epsilon = 0.0;
    double sigma = 0.0;
    LowerSolutionInputs inputs;
    std::array<Inequality, 5> inequalities;

    bool feasible() const;
};

LowerSolutionInputs lower_solution_inputs(const SemiWaveProfile& profile, const Equilibrium& eq,
                                          const Nonlinearity& nl);

std::array<Inequality, 5> lower_solution_slack(const LowerSolutionInputs& in, double epsilon,
                                               double sigma);

/// sigma at half its smallest cap (including sigma < c0), then epsilon at
/// half its smallest cap (including c0 epsilon <= sigma).
LowerSolutionParams solve_lower_solution(const LowerSolutionInputs& in);

LowerSolutionParams lower_solution_feasibility(const SemiWaveProfile& profile, const Equilibrium& eq,
                                               const Nonlinearity& nl);

struct OutcomeReport {
    Classification classification = Classification::Undecided;
    double c_hat = 0.0;
    double c_hat_stderr = 0.0;
    double h_star_hat = 0.0;
    double drift_variation = 0.0;
    bool drift_converged = false;
    std::vector<double> profile_times;
    std::vector<double> profile_sup_error;
    InteriorFit interior_fit;
    std::vector<std::string> notes;  ///< estimates skipped and why
};

struct ReportOptions {
    double c0 = 0.0;
    const SemiWaveProfile* profile = nullptr;  ///< at c0; enables profile errors
    double window_fraction = 0.5;  ///< Dirichlet window starts at fraction * c0 * t
    double ray_lo = 0.25;          ///< interior rays as fractions of c0
    double ray_hi = 0.5;
};

/// Runs every estimate that applies to the run's classification. Estimates
/// that fail their preconditions are recorded in notes rather than thrown.
OutcomeReport build_report(const RunTrace& trace, const ModelParams& params,
                           const ClassifyThresholds& thresholds, const ReportOptions& options);

}  // namespace frontwave
