#pragma once

#include <vector>

#include "frontwave/model.hpp"

namespace frontwave {

/// Discretization and iteration controls for the half-line profile solver.
struct SemiWaveNumerics {
    double dx = 0.02;
    /// Truncation length; 0 selects max(40, 12 / beta) with beta the
    /// theoretical decay rate at the requested speed.
    double X_max = 0.0;
    double relax_tol = 1e-10;     ///< stop pseudo-time marching below this sup|w_t|
    double residual_tol = 1e-8;   ///< accept the profile below this residual
    double dtau0 = 0.5;           ///< first pseudo-time step
    int max_relax_steps = 4000;
    int max_newton = 8;
    double c0_tol = 1e-9;         ///< bisection width in c
    int c0_ladder = 32;
};

struct SemiWaveProfile {
    double c = 0.0;
    double X_max = 0.0;
    double dx = 0.0;
    std::vector<double> x;
    std::vector<double> phi;
    std::vector<double> psi;
    double slope0_phi = 0.0;
    double slope0_psi = 0.0;
    double residual_inf = 0.0;
    int iterations = 0;

    /// Node-to-node strict increase of both components. Once a component
    /// sits within a few ulps of its limit, consecutive values may round to
    /// the same double; those nodes only need to be non-decreasing.
    bool monotone(double u_star, double v_star) const;
};

struct SteadyHalfLineProfile {
    std::vector<double> x;
    std::vector<double> U;
    std::vector<double> V;
    double residual_inf = 0.0;
};

struct CStar {
    double c_star = 0.0;
    double lambda_star = 0.0;
    double P_residual = 0.0;   ///< |P(lambda*, c*)|
    double dP_residual = 0.0;  ///< |dP/dlambda(lambda*, c*)|
};

struct SpeedPair {
    double c_star = 0.0;
    double c0 = 0.0;
    double lambda_star = 0.0;
    double F_residual = 0.0;
};

struct SpeedResult {
    SpeedPair speeds;
    SemiWaveProfile profile;
};

struct DecayRate {
    double beta = 0.0;
    double p_over_q = 0.0;
};

struct DecayFit {
    double alpha_fit = 0.0;
    double r2 = 0.0;
};

/// Fractions of [0, X_max] used for the empirical tail fit. The node pinned
/// at X_max and the layer it perturbs are left out: the pinned profile
/// deviates from a pure exponential like exp(-2 beta (X_max - x)).
struct TailWindow {
    double begin = 0.6;
    double end = 0.9;
};

/// Linearization of the wave system at the origin:
/// P(lambda, c) = (d1 lambda^2 - c lambda - a)(d2 lambda^2 - c lambda - b) - H'(0)G'(0).
double characteristic_polynomial(const Nonlinearity& nl, const ModelParams& params, double lambda,
                                 double c);
double characteristic_polynomial_dlambda(const Nonlinearity& nl, const ModelParams& params,
                                         double lambda, double c);

/// Minimal wave speed from the tangency of P with a positive eigenvector.
CStar compute_cstar(const Nonlinearity& nl, const ModelParams& params);

/// Monotone solution of the semi-wave system on [0, X_max] with
/// phi(0) = psi(0) = 0 and the right end pinned to (u*, v*).
/// An optional guess on the same grid warm-starts the relaxation.
SemiWaveProfile solve_semiwave(double c, const Nonlinearity& nl, const ModelParams& params,
                               const SemiWaveNumerics& numerics = {},
                               const SemiWaveProfile* guess = nullptr);

/// F(c) = mu1 phi_c'(0) + mu2 psi_c'(0) - c for a solved profile.
double free_boundary_mismatch(const SemiWaveProfile& profile, const ModelParams& params);

/// Root c0 of F on (0, c*): ladder bracketing, then bisection.
SpeedResult find_c0(const Nonlinearity& nl, const ModelParams& params,
                    const SemiWaveNumerics& numerics = {});

/// Decay rate of (u* - phi, v* - psi) at +infinity: the root beta of
/// (d1 b^2 + c b - a)(d2 b^2 + c b - b) = H'(v*)G'(u*) with both factors
/// negative, so that the decay eigenvector (p, q) is positive.
DecayRate decay_rate_theoretical(const Nonlinearity& nl, const ModelParams& params, double c);

/// Least-squares slope of log(u* - phi + v* - psi) over the tail window.
DecayFit decay_rate_empirical(const SemiWaveProfile& profile, const Equilibrium& eq,
                              const TailWindow& window = {});

/// Bounded positive steady state of the Dirichlet half-line problem; this is
/// the c = 0 semi-wave.
SteadyHalfLineProfile solve_halfline_steady(const Nonlinearity& nl, const ModelParams& params,
                                            double X_max, const SemiWaveNumerics& numerics = {});

}  // namespace frontwave
