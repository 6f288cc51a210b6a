#include "frontwave/fbsolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontwave/error.hpp"
#include "frontwave/numerics.hpp"

namespace frontwave {

namespace {

constexpr double kNegativeSpeedTolerance = 1e-12;
constexpr double kNegativeDensityTolerance = 1e-10;

std::string describe(double value) {
    std::ostringstream os;
    os.precision(10);
    os << value;
    return os.str();
}

/// Reusable buffers so the time loop does not allocate.
class Stepper {
public:
    Stepper(const ModelParams& params, const Nonlinearity& nl) : p_(params), nl_(nl) {}

    void advance(const FreeBoundaryState& s, FreeBoundaryState& out, double dt) {
        const std::size_t N = s.cells();
        const double dxi = s.dxi();
        const double hp = s.h_prime;
        const double h_new = s.h + dt * hp;
        if (!(h_new > 0.0)) throw Error(ErrorKind::DegenerateFront, "front collapsed");

        out.t = s.t + dt;
        out.h = h_new;
        out.u.resize(N + 1);
        out.v.resize(N + 1);

        // Explicit part: advection (xi h'/h) w_xi and reaction, at time level n.
        const double adv_scale = hp / s.h / (2.0 * dxi);
        for (std::size_t i = 1; i < N; ++i) {
            const double xi = static_cast<double>(i) * dxi;
            const double adv = xi * adv_scale;
            out.u[i] = s.u[i] + dt * (adv * (s.u[i + 1] - s.u[i - 1]) - p_.a * s.u[i] + nl_.H(s.v[i]));
            out.v[i] = s.v[i] + dt * (adv * (s.v[i + 1] - s.v[i - 1]) - p_.b * s.v[i] + nl_.G(s.u[i]));
        }
        const bool neumann = p_.boundary == BoundaryKind::Neumann;
        if (neumann) {
            out.u[0] = s.u[0] + dt * (-p_.a * s.u[0] + nl_.H(s.v[0]));
            out.v[0] = s.v[0] + dt * (-p_.b * s.v[0] + nl_.G(s.u[0]));
        } else {
            out.u[0] = out.v[0] = 0.0;
        }
        out.u[N] = out.v[N] = 0.0;

        // Implicit diffusion with coefficient d / h_{n+1}^2.
        const double scale = dt / (h_new * h_new * dxi * dxi);
        implicit_diffusion(out.u, p_.d1 * scale, neumann);
        implicit_diffusion(out.v, p_.d2 * scale, neumann);

        double lowest = 0.0;
        for (std::size_t i = 0; i <= N; ++i) {
            if (!std::isfinite(out.u[i]) || !std::isfinite(out.v[i])) {
                throw Error(ErrorKind::NonFinite, "non-finite density at node " + std::to_string(i));
            }
            lowest = std::min({lowest, out.u[i], out.v[i]});
        }
        if (lowest < -kNegativeDensityTolerance) {
            throw Error(ErrorKind::StabilityViolation, "density " + describe(lowest) + " < 0");
        }
        min_density_ = std::min(min_density_, lowest);
        out.h_prime = stefan_flux(out, p_);
    }

    double min_density() const { return min_density_; }

private:
    void implicit_diffusion(std::vector<double>& w, double r, bool neumann) {
        const std::size_t n = w.size();
        lower_.assign(n, -r);
        diag_.assign(n, 1.0 + 2.0 * r);
        upper_.assign(n, -r);
        if (neumann) {
            // Ghost node w_{-1} = w_1.
            upper_[0] = -2.0 * r;
        } else {
            diag_[0] = 1.0;
            upper_[0] = 0.0;
            w[0] = 0.0;
        }
        diag_[n - 1] = 1.0;
        lower_[n - 1] = 0.0;
        w[n - 1] = 0.0;
        numerics::solve_tridiagonal(lower_, diag_, upper_, w);
    }

    const ModelParams& p_;
    const Nonlinearity& nl_;
    std::vector<double> lower_, diag_, upper_;
    double min_density_ = 0.0;
};

}  // namespace

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::EndTime: return "end_time";
        case StopReason::Vanished: return "vanished";
        case StopReason::FrontBudget: return "front_budget";
    }
    return "unknown";
}

ImmobilizedCoefficients immobilize(const FreeBoundaryState& state, const ModelParams& params) {
    const std::size_t N = state.cells();
    // The front must span more than ten physical cells: h > 10 dx = 10 h / N.
    if (!(state.h > 0.0) || N <= 10) {
        throw Error(ErrorKind::DegenerateFront,
                    "h = " + describe(state.h) + " with " + std::to_string(N) + " cells");
    }
    ImmobilizedCoefficients c;
    c.diffusion_u = params.d1 / (state.h * state.h);
    c.diffusion_v = params.d2 / (state.h * state.h);
    c.advection.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        c.advection[i] = static_cast<double>(i) * state.dxi() * state.h_prime / state.h;
    }
    return c;
}

double stefan_flux(const FreeBoundaryState& state, const ModelParams& params) {
    const std::size_t N = state.cells();
    const double dx = state.dxi() * state.h;
    const double ux = numerics::right_slope(state.u[N], state.u[N - 1], state.u[N - 2], dx);
    const double vx = numerics::right_slope(state.v[N], state.v[N - 1], state.v[N - 2], dx);
    const double hp = -params.mu1 * ux - params.mu2 * vx;
    if (hp < 0.0) {
        if (hp < -kNegativeSpeedTolerance) {
            throw Error(ErrorKind::NegativeSpeed, "h' = " + describe(hp));
        }
        return 0.0;
    }
    return hp;
}

FreeBoundaryState initial_state(const InitialData& init, const ModelParams& params, std::size_t N) {
    if (N < 3) throw Error(ErrorKind::Precondition, "need at least 3 cells");
    FreeBoundaryState s;
    s.t = 0.0;
    s.h = init.h0;
    s.u.resize(N + 1);
    s.v.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        const double x = init.h0 * static_cast<double>(i) / static_cast<double>(N);
        s.u[i] = numerics::interpolate(init.x, init.u0, x);
        s.v[i] = numerics::interpolate(init.x, init.v0, x);
    }
    s.u[N] = s.v[N] = 0.0;
    if (params.boundary == BoundaryKind::Dirichlet) s.u[0] = s.v[0] = 0.0;
    s.h_prime = stefan_flux(s, params);
    return s;
}

FreeBoundaryState step(const FreeBoundaryState& state, const ModelParams& params,
                       const Nonlinearity& nl, double dt) {
    Stepper stepper(params, nl);
    FreeBoundaryState out;
    stepper.advance(state, out, dt);
    return out;
}

Snapshot snapshot_of(const FreeBoundaryState& state) {
    Snapshot snap;
    snap.t = state.t;
    snap.h = state.h;
    const std::size_t N = state.cells();
    snap.x.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        snap.x[i] = state.h * static_cast<double>(i) / static_cast<double>(N);
    }
    snap.x[N] = state.h;
    snap.u = state.u;
    snap.v = state.v;
    return snap;
}

TraceSample sample_of(const FreeBoundaryState& state) {
    TraceSample s;
    s.t = state.t;
    s.h = state.h;
    s.hprime = state.h_prime;
    const std::size_t N = state.cells();
    double mass = 0.0;
    for (std::size_t i = 0; i <= N; ++i) {
        s.sup_u = std::max(s.sup_u, state.u[i]);
        s.sup_v = std::max(s.sup_v, state.v[i]);
        const double w = (i == 0 || i == N) ? 0.5 : 1.0;
        mass += w * (state.u[i] + state.v[i]);
    }
    s.mass = mass * state.dxi() * state.h;
    const double pos = 0.5 * static_cast<double>(N);
    const auto j = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(j);
    const std::size_t k = std::min(j + 1, N);
    s.mid_u = (1.0 - w) * state.u[j] + w * state.u[k];
    s.mid_v = (1.0 - w) * state.v[j] + w * state.v[k];
    return s;
}

RunTrace simulate(const ModelParams& params, const Nonlinearity& nl, const InitialData& init,
                  const FbNumerics& num, const StopRule& stop) {
    RunTrace trace;
    simulate_into(params, nl, init, num, stop, trace);
    return trace;
}

void simulate_into(const ModelParams& params, const Nonlinearity& nl, const InitialData& init,
                   const FbNumerics& num, const StopRule& stop, RunTrace& trace) {
    trace = RunTrace{};
    trace.h0 = init.h0;
    FreeBoundaryState state = initial_state(init, params, num.N);
    FreeBoundaryState next;
    Stepper stepper(params, nl);

    std::vector<double> snaps = num.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;
    while (next_snap < snaps.size() && snaps[next_snap] <= 0.0) {
        trace.snapshots.push_back(snapshot_of(state));
        ++next_snap;
    }
    trace.samples.push_back(sample_of(state));
    trace.max_hprime = state.h_prime;

    std::size_t next_sample = 1;
    double below_since = -1.0;
    const double dxi = state.dxi();

    while (state.t < stop.t_end) {
        const double sample_t = static_cast<double>(next_sample) * num.sample_every;
        double target = std::min(stop.t_end, sample_t);
        if (next_snap < snaps.size()) target = std::min(target, snaps[next_snap]);

        double dt = std::min(num.dt_cap, num.cfl * dxi * state.h / (std::abs(state.h_prime) + num.c_adv));
        bool lands = false;
        if (state.t + dt >= target - 1e-12 * std::max(1.0, target)) {
            dt = target - state.t;
            lands = true;
        }
        try {
            stepper.advance(state, next, dt);
        } catch (const Error& e) {
            trace.min_density = stepper.min_density();
            throw Error(e.kind(), e.detail() + " at t = " + describe(state.t));
        }
        if (lands) next.t = target;
        std::swap(state, next);
        ++trace.steps;
        trace.max_hprime = std::max(trace.max_hprime, state.h_prime);

        if (lands && next_snap < snaps.size() && state.t >= snaps[next_snap]) {
            trace.snapshots.push_back(snapshot_of(state));
            ++next_snap;
        }
        const bool on_sample = lands && state.t >= sample_t;
        if (on_sample) ++next_sample;
        if (on_sample || state.t >= stop.t_end) trace.samples.push_back(sample_of(state));

        const double sup_u = *std::max_element(state.u.begin(), state.u.end());
        const double sup_v = *std::max_element(state.v.begin(), state.v.end());
        if (sup_u + sup_v < stop.vanishing_level) {
            if (below_since < 0.0) below_since = state.t;
        } else {
            below_since = -1.0;
        }
        if (stop.stop_on_vanishing && below_since >= 0.0 &&
            state.t - below_since >= stop.vanishing_duration &&
            trace.samples.size() >= stop.min_samples) {
            trace.stop = StopReason::Vanished;
            if (!on_sample) trace.samples.push_back(sample_of(state));
            break;
        }
        if (state.h >= stop.front_budget) {
            trace.stop = StopReason::FrontBudget;
            if (!on_sample) trace.samples.push_back(sample_of(state));
            break;
        }
    }
    trace.min_density = stepper.min_density();
    trace.final_state = std::move(state);
}

}  // namespace frontwave
