#pragma once

#include <limits>
#include <string>
#include <vector>

#include "frontwave/model.hpp"

namespace frontwave {

/// Densities on the immobilized grid xi_i = i / N (physical x = xi h).
struct FreeBoundaryState {
    double t = 0.0;
    double h = 0.0;
    double h_prime = 0.0;
    std::vector<double> u;
    std::vector<double> v;

    std::size_t cells() const { return u.size() - 1; }
    double dxi() const { return 1.0 / static_cast<double>(cells()); }
};

/// Coefficients of the fixed-domain system
///   u_t = (d1 / h^2) u_xixi + (xi h' / h) u_xi - a u + H(v)
/// and the same with (d2, b, G) for v.
struct ImmobilizedCoefficients {
    double diffusion_u = 0.0;
    double diffusion_v = 0.0;
    std::vector<double> advection;  ///< xi_i h' / h, shared by both components
};

ImmobilizedCoefficients immobilize(const FreeBoundaryState& state, const ModelParams& params);

/// h' = -mu1 u_x(h) - mu2 v_x(h) from the three-point one-sided stencil in xi.
double stefan_flux(const FreeBoundaryState& state, const ModelParams& params);

/// Resamples initial data onto N cells and pins the boundary values.
FreeBoundaryState initial_state(const InitialData& init, const ModelParams& params, std::size_t N);

/// One IMEX step: implicit diffusion, explicit advection/reaction, explicit
/// front update h += dt h'.
FreeBoundaryState step(const FreeBoundaryState& state, const ModelParams& params,
                       const Nonlinearity& nl, double dt);

struct FbNumerics {
    std::size_t N = 400;
    double dt_cap = 1e-3;
    double cfl = 0.4;
    double c_adv = 1e-8;           ///< floor on the advection speed in the CFL rule
    double sample_every = 0.05;    ///< trace cadence
    std::vector<double> snapshot_times;
};

struct StopRule {
    double t_end = 10.0;
    double front_budget = std::numeric_limits<double>::infinity();
    bool stop_on_vanishing = true;
    double vanishing_level = 1e-6;     ///< on sup u + sup v
    double vanishing_duration = 1.0;
    /// The vanishing stop waits for this many trace samples so the trace
    /// stays long enough to classify.
    std::size_t min_samples = 100;
};

struct TraceSample {
    double t = 0.0;
    double h = 0.0;
    double hprime = 0.0;
    double sup_u = 0.0;
    double sup_v = 0.0;
    double mass = 0.0;   ///< integral of u + v over [0, h]
    double mid_u = 0.0;  ///< u(t, h/2)
    double mid_v = 0.0;
};

struct Snapshot {
    double t = 0.0;
    double h = 0.0;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> v;
};

enum class StopReason { EndTime, Vanished, FrontBudget };

std::string to_string(StopReason reason);

struct RunTrace {
    double h0 = 0.0;
    std::vector<TraceSample> samples;
    std::vector<Snapshot> snapshots;
    double max_hprime = 0.0;
    double min_density = 0.0;  ///< smallest u or v value seen on any step
    std::size_t steps = 0;
    StopReason stop = StopReason::EndTime;
    FreeBoundaryState final_state;
};

Snapshot snapshot_of(const FreeBoundaryState& state);
TraceSample sample_of(const FreeBoundaryState& state);

/// Deterministic time integration until the stop rule fires. Errors from
/// step() are rethrown with the failing time attached.
RunTrace simulate(const ModelParams& params, const Nonlinearity& nl, const InitialData& init,
                  const FbNumerics& numerics, const StopRule& stop);

/// Same as simulate, filling a caller-owned trace so that the samples and
/// snapshots recorded before a failure survive the exception.
void simulate_into(const ModelParams& params, const Nonlinearity& nl, const InitialData& init,
                   const FbNumerics& numerics, const StopRule& stop, RunTrace& trace);

}  // namespace frontwave
