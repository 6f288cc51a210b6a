#include "frontwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frontwave/error.hpp"
#include "frontwave/numerics.hpp"

namespace frontwave {

namespace {

std::string describe(double value) {
    std::ostringstream os;
    os.precision(6);
    os << value;
    return os.str();
}

double h_at(const std::vector<TraceSample>& samples, double t) {
    std::vector<double> ts, hs;
    ts.reserve(samples.size());
    hs.reserve(samples.size());
    for (const auto& s : samples) {
        ts.push_back(s.t);
        hs.push_back(s.h);
    }
    return numerics::interpolate(ts, hs, t);
}

/// Values of h - c0 t for samples with t in [lo, hi].
std::vector<double> drift_window(const std::vector<TraceSample>& samples, double c0, double lo,
                                 double hi) {
    const double eps = 1e-9 * std::max(1.0, hi);
    std::vector<double> out;
    for (const auto& s : samples) {
        if (s.t >= lo - eps && s.t <= hi + eps) out.push_back(s.h - c0 * s.t);
    }
    return out;
}

double spread(const std::vector<double>& w) {
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    return *hi - *lo;
}

/// min of w' over nodes with x <= x_end; one-sided at x = 0, central inside.
double min_derivative(const SemiWaveProfile& p, const std::vector<double>& w, double slope0,
                      double x_end) {
    double m = slope0;
    for (std::size_t i = 1; i + 1 < p.x.size() && p.x[i] <= x_end + 1e-12; ++i) {
        m = std::min(m, (w[i + 1] - w[i - 1]) / (p.x[i + 1] - p.x[i - 1]));
    }
    return m;
}

void require_positive(double value, const char* name) {
    if (!(value > 0.0)) {
        throw Error(ErrorKind::Infeasible, std::string(name) + " = " + describe(value) + " is not positive");
    }
}

void require_negative(double value, const char* name) {
    if (!(value < 0.0)) {
        throw Error(ErrorKind::Infeasible, std::string(name) + " = " + describe(value) + " is not negative");
    }
}

void check_profile_data(const FrontProfileData& p) {
    require_positive(p.c0, "c0");
    require_positive(p.u_star, "u*");
    require_positive(p.v_star, "v*");
    require_positive(p.min_dphi, "min phi'");
    require_positive(p.min_dpsi, "min psi'");
    require_positive(p.phi1, "phi(1)");
    require_positive(p.psi1, "psi(1)");
}

template <std::size_t N>
bool all_positive(const std::array<Inequality, N>& ineq) {
    return std::all_of(ineq.begin(), ineq.end(), [](const Inequality& i) { return i.slack > 0.0; });
}

}  // namespace

std::string to_string(Classification c) {
    switch (c) {
        case Classification::Spreading: return "Spreading";
        case Classification::Vanishing: return "Vanishing";
        case Classification::Undecided: return "Undecided";
    }
    return "Undecided";
}

Classification classify(const RunTrace& trace, const ClassifyThresholds& th) {
    const auto& s = trace.samples;
    if (s.size() < th.min_samples) {
        throw Error(ErrorKind::Precondition, "classification needs at least " +
                                                 std::to_string(th.min_samples) + " samples, got " +
                                                 std::to_string(s.size()));
    }
    const double T = s.back().t;

    // Vanishing: the density level holds on a trailing stretch of the trace.
    std::size_t first_quiet = s.size();
    while (first_quiet > 0 && s[first_quiet - 1].sup_u + s[first_quiet - 1].sup_v < th.vanishing_level) {
        --first_quiet;
    }
    if (first_quiet < s.size() && T - s[first_quiet].t >= th.vanishing_duration &&
        std::abs(s.back().h - h_at(s, 0.5 * T)) < th.stabilized) {
        return Classification::Vanishing;
    }

    const double reach = std::max(2.0 * th.l0, trace.h0 + th.growth_margin);
    const double u_band = th.interior_band * th.eq.u_star;
    const double v_band = th.interior_band * th.eq.v_star;
    for (const auto& x : s) {
        if (x.h >= reach && std::abs(x.mid_u - th.eq.u_star) <= u_band &&
            std::abs(x.mid_v - th.eq.v_star) <= v_band) {
            return Classification::Spreading;
        }
    }
    return Classification::Undecided;
}

SpeedFit front_speed(const RunTrace& trace) {
    const auto& s = trace.samples;
    if (s.empty()) throw Error(ErrorKind::WindowTooShort, "empty trace");
    const double half = 0.5 * s.back().t;
    std::vector<double> t, h;
    for (const auto& x : s) {
        if (x.t >= half) {
            t.push_back(x.t);
            h.push_back(x.h);
        }
    }
    if (t.size() < 3) {
        throw Error(ErrorKind::WindowTooShort, "trailing half holds " + std::to_string(t.size()) + " samples");
    }
    const auto fit = numerics::fit_line(t, h);
    return {fit.slope, fit.slope_stderr, fit.n};
}

DriftEstimate front_drift(const RunTrace& trace, double c0) {
    const auto& s = trace.samples;
    if (s.empty()) throw Error(ErrorKind::WindowTooShort, "empty trace");
    const double T = s.back().t;
    const auto last = drift_window(s, c0, 0.75 * T, T);
    const auto prev = drift_window(s, c0, 0.5 * T, 0.75 * T);
    if (last.size() < 2 || prev.size() < 2) {
        throw Error(ErrorKind::WindowTooShort, "drift quarters need at least 2 samples each");
    }
    DriftEstimate d;
    double sum = 0.0;
    for (double w : last) sum += w;
    d.h_star_hat = sum / static_cast<double>(last.size());
    d.drift_variation = spread(last);
    d.previous_variation = spread(prev);
    d.converged = d.drift_variation <= 0.5 * d.previous_variation;
    return d;
}

double profile_error(const Snapshot& snap, const SemiWaveProfile& profile, double x_lo) {
    if (!(x_lo >= 0.0) || x_lo > snap.h) {
        throw Error(ErrorKind::WindowOutsideDomain,
                    "window start " + describe(x_lo) + " outside [0, " + describe(snap.h) + "]");
    }
    if (snap.h - x_lo > profile.X_max) {
        throw Error(ErrorKind::WindowOutsideDomain, "window length " + describe(snap.h - x_lo) +
                                                        " exceeds profile X_max " + describe(profile.X_max));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < snap.x.size(); ++i) {
        if (snap.x[i] < x_lo) continue;
        const double s = snap.h - snap.x[i];
        const double e = std::abs(snap.u[i] - numerics::interpolate(profile.x, profile.phi, s)) +
                         std::abs(snap.v[i] - numerics::interpolate(profile.x, profile.psi, s));
        worst = std::max(worst, e);
    }
    return worst;
}

InteriorFit interior_convergence_fit(const std::vector<Snapshot>& snapshots, const Equilibrium& eq,
                                     double c1, double c2) {
    if (!(c1 > 0.0) || !(c2 > c1)) {
        throw Error(ErrorKind::Precondition, "rays need 0 < c1 < c2");
    }
    InteriorFit fit;
    std::vector<double> logs;
    for (const auto& snap : snapshots) {
        if (!(snap.t > 0.0)) continue;
        const double lo = c1 * snap.t;
        const double hi = c2 * snap.t;
        if (hi > snap.h) {
            throw Error(ErrorKind::EmptyRayWindow, "c2 t = " + describe(hi) + " beyond h = " +
                                                       describe(snap.h) + " at t = " + describe(snap.t));
        }
        bool any = false;
        double e = 0.0;
        for (std::size_t i = 0; i < snap.x.size(); ++i) {
            if (snap.x[i] < lo || snap.x[i] > hi) continue;
            any = true;
            e = std::max({e, eq.u_star - snap.u[i], eq.v_star - snap.v[i]});
        }
        if (!any) {
            throw Error(ErrorKind::EmptyRayWindow, "no grid node in [c1 t, c2 t] at t = " + describe(snap.t));
        }
        if (e > 0.0) {
            fit.t.push_back(snap.t);
            fit.deficit.push_back(e);
            logs.push_back(std::log(e));
        }
    }
    if (fit.t.size() < 3) {
        throw Error(ErrorKind::WindowTooShort, "interior fit needs 3 snapshots with a positive deficit");
    }
    const auto line = numerics::fit_line(fit.t, logs);
    fit.M_hat = std::exp(line.intercept);
    fit.delta_hat = -line.slope;
    fit.r2 = line.r2;
    return fit;
}

UpperEnvelope upper_envelope_params(const Equilibrium& eq, const ModelParams& params, double sup_u0,
                                    double sup_v0, double floor) {
    const double lo = eq.Hp_vstar / params.a;
    const double hi = params.b / eq.Gp_ustar;
    if (!(params.a * params.b > eq.Hp_vstar * eq.Gp_ustar) || !(lo > 0.0)) {
        throw Error(ErrorKind::InfeasibleBracket, "ab <= H'(v*)G'(u*): ratio bracket (" + describe(lo) +
                                                      ", " + describe(hi) + ") is empty");
    }
    UpperEnvelope env;
    env.ratio = std::sqrt(lo * hi);
    const double need_u = sup_u0 - eq.u_star;
    const double need_v = sup_v0 - eq.v_star;
    env.M2 = std::max({need_v, need_u / env.ratio, floor * std::max(eq.u_star, eq.v_star)});
    env.M1 = env.ratio * env.M2;
    env.delta = std::min(params.a - eq.Hp_vstar / env.ratio, params.b - eq.Gp_ustar * env.ratio);
    return env;
}

double envelope_excess(const RunTrace& trace, const Equilibrium& eq, const UpperEnvelope& env) {
    double worst = -std::numeric_limits<double>::infinity();
    const double M = env.M();
    for (const auto& s : trace.samples) {
        const double bump = M * std::exp(-env.delta * s.t);
        worst = std::max({worst, s.sup_u - eq.u_star - bump, s.sup_v - eq.v_star - bump});
    }
    return worst;
}

FrontProfileData front_profile_data(const SemiWaveProfile& profile, const Equilibrium& eq) {
    if (profile.x.size() < 3 || profile.x.back() < 1.0) {
        throw Error(ErrorKind::Precondition, "profile grid must cover [0, 1]");
    }
    FrontProfileData d;
    d.c0 = profile.c;
    d.u_star = eq.u_star;
    d.v_star = eq.v_star;
    d.min_dphi = min_derivative(profile, profile.phi, profile.slope0_phi, 1.0);
    d.min_dpsi = min_derivative(profile, profile.psi, profile.slope0_psi, 1.0);
    d.phi1 = numerics::interpolate(profile.x, profile.phi, 1.0);
    d.psi1 = numerics::interpolate(profile.x, profile.psi, 1.0);
    return d;
}

double max_secant_slope_derivative(const Nonlinearity::Fn& f, const Nonlinearity::Fn& df, double lo,
                                   double hi, std::size_t samples) {
    if (!(lo > 0.0) || !(hi >= lo) || samples < 2) {
        throw Error(ErrorKind::Precondition, "need 0 < lo <= hi and at least 2 samples");
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i) {
        const double z = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
        worst = std::max(worst, (z * df(z) - f(z)) / (z * z));
    }
    return worst;
}

bool SupersolutionParams::feasible() const { return all_positive(inequalities); }

bool LowerSolutionParams::feasible() const { return all_positive(inequalities); }

SupersolutionInputs supersolution_inputs(const SemiWaveProfile& profile, const Equilibrium& eq,
                                         const Nonlinearity& nl) {
    SupersolutionInputs in;
    in.profile = front_profile_data(profile, eq);
    check_profile_data(in.profile);
    in.B_psi = max_secant_slope_derivative(nl.H, nl.dH, in.profile.psi1, 2.0 * eq.v_star);
    in.B_phi = max_secant_slope_derivative(nl.G, nl.dG, in.profile.phi1, 2.0 * eq.u_star);
    return in;
}

std::array<Inequality, 5> supersolution_slack(const SupersolutionInputs& in, double K, double sigma,
                                              double delta) {
    const auto& p = in.profile;
    return {{
        {"c0*K <= sigma*delta", sigma * delta - p.c0 * K},
        {"sigma*min(phi') >= K*u*", sigma * p.min_dphi - K * p.u_star},
        {"-psi(1)^2*B_psi >= delta*K*u*", -p.psi1 * p.psi1 * in.B_psi - delta * K * p.u_star},
        {"sigma*min(psi') >= K*v*", sigma * p.min_dpsi - K * p.v_star},
        {"-phi(1)^2*B_phi >= delta*K*v*", -p.phi1 * p.phi1 * in.B_phi - delta * K * p.v_star},
    }};
}

SupersolutionParams solve_supersolution(const SupersolutionInputs& in) {
    check_profile_data(in.profile);
    require_negative(in.B_psi, "B_psi");
    require_negative(in.B_phi, "B_phi");
    const auto& p = in.profile;
    SupersolutionParams out;
    out.inputs = in;
    out.K = 1.0;
    const double delta_cap = std::min(-p.psi1 * p.psi1 * in.B_psi / (out.K * p.u_star),
                                      -p.phi1 * p.phi1 * in.B_phi / (out.K * p.v_star));
    out.delta = 0.5 * delta_cap;
    out.sigma = 2.0 * std::max({out.K * p.u_star / p.min_dphi, out.K * p.v_star / p.min_dpsi,
                                p.c0 * out.K / out.delta});
    out.inequalities = supersolution_slack(in, out.K, out.sigma, out.delta);
    return out;
}

SupersolutionParams supersolution_feasibility(const SemiWaveProfile& profile, const Equilibrium& eq,
                                              const Nonlinearity& nl) {
    return solve_supersolution(supersolution_inputs(profile, eq, nl));
}

LowerSolutionInputs lower_solution_inputs(const SemiWaveProfile& profile, const Equilibrium& eq,
                                          const Nonlinearity& nl) {
    LowerSolutionInputs in;
    in.profile = front_profile_data(profile, eq);
    check_profile_data(in.profile);
    in.C_psi = max_secant_slope_derivative(nl.H, nl.dH, 0.5 * in.profile.psi1, eq.v_star);
    in.C_phi = max_secant_slope_derivative(nl.G, nl.dG, 0.5 * in.profile.phi1, eq.u_star);
    return in;
}

std::array<Inequality, 5> lower_solution_slack(const LowerSolutionInputs& in, double epsilon,
                                               double sigma) {
    const auto& p = in.profile;
    return {{
        {"c0*epsilon <= sigma", sigma - p.c0 * epsilon},
        {"epsilon <= min(phi')/(2 phi(1))", p.min_dphi / (2.0 * p.phi1) - epsilon},
        {"epsilon <= min(psi')/(2 psi(1))", p.min_dpsi / (2.0 * p.psi1) - epsilon},
        {"sigma <= -psi(1)^2*C_psi/(2 v*)", -p.psi1 * p.psi1 * in.C_psi / (2.0 * p.v_star) - sigma},
        {"sigma <= -phi(1)^2*C_phi/(2 u*)", -p.phi1 * p.phi1 * in.C_phi / (2.0 * p.u_star) - sigma},
    }};
}

LowerSolutionParams solve_lower_solution(const LowerSolutionInputs& in) {
    check_profile_data(in.profile);
    require_negative(in.C_psi, "C_psi");
    require_negative(in.C_phi, "C_phi");
    const auto& p = in.profile;
    LowerSolutionParams out;
    out.inputs = in;
    out.sigma = 0.5 * std::min({-p.psi1 * p.psi1 * in.C_psi / (2.0 * p.v_star),
                                -p.phi1 * p.phi1 * in.C_phi / (2.0 * p.u_star), p.c0});
    out.epsilon = 0.5 * std::min({p.min_dphi / (2.0 * p.phi1), p.min_dpsi / (2.0 * p.psi1),
                                  out.sigma / p.c0});
    out.inequalities = lower_solution_slack(in, out.epsilon, out.sigma);
    return out;
}

LowerSolutionParams lower_solution_feasibility(const SemiWaveProfile& profile, const Equilibrium& eq,
                                               const Nonlinearity& nl) {
    return solve_lower_solution(lower_solution_inputs(profile, eq, nl));
}

OutcomeReport build_report(const RunTrace& trace, const ModelParams& params,
                           const ClassifyThresholds& thresholds, const ReportOptions& opt) {
    OutcomeReport rep;
    const auto attempt = [&rep](const char* what, const auto& fn) {
        try {
            fn();
        } catch (const Error& e) {
            rep.notes.push_back(std::string(what) + ": " + e.what());
        }
    };
    attempt("classification", [&] { rep.classification = classify(trace, thresholds); });
    if (rep.classification != Classification::Spreading) return rep;

    attempt("front_speed", [&] {
        const auto fit = front_speed(trace);
        rep.c_hat = fit.c_hat;
        rep.c_hat_stderr = fit.slope_stderr;
    });
    if (!(opt.c0 > 0.0)) {
        rep.notes.emplace_back("front_drift: no c0 supplied");
        return rep;
    }
    attempt("front_drift", [&] {
        const auto d = front_drift(trace, opt.c0);
        rep.h_star_hat = d.h_star_hat;
        rep.drift_variation = d.drift_variation;
        rep.drift_converged = d.converged;
    });
    if (opt.profile != nullptr) {
        attempt("profile_error", [&] {
            for (const auto& snap : trace.snapshots) {
                if (!(snap.t > 0.0)) continue;
                const double x_lo = params.boundary == BoundaryKind::Dirichlet
                                        ? opt.window_fraction * opt.c0 * snap.t
                                        : 0.0;
                const double e = profile_error(snap, *opt.profile, x_lo);
                rep.profile_times.push_back(snap.t);
                rep.profile_sup_error.push_back(e);
            }
        });
    }
    attempt("interior_fit", [&] {
        rep.interior_fit = interior_convergence_fit(trace.snapshots, thresholds.eq, opt.ray_lo * opt.c0,
                                                    opt.ray_hi * opt.c0);
    });
    return rep;
}

}  // namespace frontwave
