#include "frontwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "frontwave/error.hpp"
#include "frontwave/numerics.hpp"

namespace frontwave {

namespace {

void saturating_branch(double p, double q, Nonlinearity::Fn& f, Nonlinearity::Fn& df,
                       Nonlinearity::Fn& d2f) {
    f = [p, q](double z) { return p * z / (1.0 + q * z); };
    df = [p, q](double z) {
        const double s = 1.0 + q * z;
        return p / (s * s);
    };
    d2f = [p, q](double z) {
        const double s = 1.0 + q * z;
        return -2.0 * p * q / (s * s * s);
    };
}

std::string describe(double value) {
    std::ostringstream os;
    os.precision(6);
    os << value;
    return os.str();
}

}  // namespace

Nonlinearity saturating(double pH, double qH, double pG, double qG) {
    Nonlinearity nl;
    nl.name = "saturating";
    saturating_branch(pH, qH, nl.H, nl.dH, nl.d2H);
    saturating_branch(pG, qG, nl.G, nl.dG, nl.d2G);
    return nl;
}

Nonlinearity cholera(double k, double pG, double qG) {
    Nonlinearity nl;
    nl.name = "cholera";
    nl.H = [k](double z) { return k * z; };
    nl.dH = [k](double) { return k; };
    nl.d2H = [](double) { return 0.0; };
    saturating_branch(pG, qG, nl.G, nl.dG, nl.d2G);
    nl.weak_concavity = true;
    return nl;
}

std::string to_string(BoundaryKind kind) {
    return kind == BoundaryKind::Dirichlet ? "dirichlet" : "neumann";
}

BoundaryKind boundary_from_string(const std::string& name) {
    if (name == "dirichlet") return BoundaryKind::Dirichlet;
    if (name == "neumann") return BoundaryKind::Neumann;
    throw Error(ErrorKind::Config, "unknown boundary operator '" + name + "'");
}

std::vector<std::string> ModelParams::validate() const {
    std::vector<std::string> issues;
    const auto positive = [&](double v, const char* name) {
        if (!(v > 0.0)) issues.push_back(std::string(name) + " must be > 0");
    };
    positive(d1, "d1");
    positive(d2, "d2");
    positive(a, "a");
    positive(b, "b");
    if (mu1 < 0.0) issues.emplace_back("mu1 must be >= 0");
    if (mu2 < 0.0) issues.emplace_back("mu2 must be >= 0");
    if (!(mu1 + mu2 > 0.0)) issues.emplace_back("mu1 + mu2 must be > 0");
    return issues;
}

bool HypothesisReport::passed() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const auto& c) { return c.passed; });
}

void HypothesisReport::require() const {
    for (const auto& c : clauses) {
        if (!c.passed) throw Error(ErrorKind::NonCompliant, c.name + " (" + c.detail + ")");
    }
}

HypothesisReport check_hypotheses(const Nonlinearity& nl, const ModelParams& params, double z_max,
                                  const HypothesisOptions& opts) {
    if (!(z_max > opts.z_min)) {
        throw Error(ErrorKind::Precondition, "z_max must exceed the sampling floor");
    }
    std::vector<double> z(opts.samples);
    const double lmin = std::log(opts.z_min);
    const double lmax = std::log(z_max);
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = std::exp(lmin + (lmax - lmin) * static_cast<double>(i) /
                                   static_cast<double>(z.size() - 1));
    }

    HypothesisReport rep;
    rep.weak_concavity = nl.weak_concavity;
    rep.min_dH = nl.dH(0.0);
    rep.min_dG = nl.dG(0.0);
    rep.max_d2H = -std::numeric_limits<double>::infinity();
    rep.max_d2G = -std::numeric_limits<double>::infinity();
    for (double zi : z) {
        rep.min_dH = std::min(rep.min_dH, nl.dH(zi));
        rep.min_dG = std::min(rep.min_dG, nl.dG(zi));
        rep.max_d2H = std::max(rep.max_d2H, nl.d2H(zi));
        rep.max_d2G = std::max(rep.max_d2G, nl.d2G(zi));
        if (!rep.witness && nl.G(nl.H(zi) / params.a) < params.b * zi) rep.witness = zi;
    }

    const double h0 = nl.H(0.0);
    const double g0 = nl.G(0.0);
    rep.clauses.push_back({"H(0)=G(0)=0", h0 == 0.0 && g0 == 0.0,
                           "H(0)=" + describe(h0) + ", G(0)=" + describe(g0)});
    rep.clauses.push_back({"dH>0", rep.min_dH > 0.0, "min dH=" + describe(rep.min_dH)});
    rep.clauses.push_back({"dG>0", rep.min_dG > 0.0, "min dG=" + describe(rep.min_dG)});
    // A weak-concavity nonlinearity is admitted with H'' = 0 (or G'' = 0).
    const auto concave = [&](double m) { return m < 0.0 || (nl.weak_concavity && m <= 0.0); };
    rep.clauses.push_back({"d2H<0", concave(rep.max_d2H), "max d2H=" + describe(rep.max_d2H)});
    rep.clauses.push_back({"d2G<0", concave(rep.max_d2G), "max d2G=" + describe(rep.max_d2G)});
    rep.clauses.push_back({"G(H(z)/a)<b z", rep.witness.has_value(),
                           rep.witness ? "witness z=" + describe(*rep.witness)
                                       : "no sampled z up to " + describe(z_max)});
    return rep;
}

double compute_R0(const Nonlinearity& nl, const ModelParams& params) {
    return nl.dH(0.0) * nl.dG(0.0) / (params.a * params.b);
}

Equilibrium compute_equilibrium(const Nonlinearity& nl, const ModelParams& params,
                                const EquilibriumOptions& opts) {
    const double r0 = compute_R0(nl, params);
    if (!(r0 > 1.0)) {
        throw Error(ErrorKind::NoPositiveRoot, "R0 = " + describe(r0) + " <= 1");
    }
    const auto g = [&](double v) { return params.b * v - nl.G(nl.H(v) / params.a); };

    double lo = opts.lower;
    double hi = std::max(opts.upper, 2.0 * lo);
    if (!(g(lo) < 0.0)) {
        throw Error(ErrorKind::BracketingFailure, "g(v) is not negative at the lower bracket end");
    }
    int doublings = 0;
    while (!(g(hi) > 0.0)) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > opts.max_doublings) {
            throw Error(ErrorKind::BracketingFailure,
                        "no sign change of g(v) up to v = " + describe(hi));
        }
    }
    while (hi - lo > opts.width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    const double v = 0.5 * (lo + hi);
    Equilibrium eq;
    eq.v_star = v;
    eq.u_star = nl.H(v) / params.a;
    eq.Hp_vstar = nl.dH(eq.v_star);
    eq.Gp_ustar = nl.dG(eq.u_star);
    return eq;
}

double compute_l0(const Nonlinearity& nl, const ModelParams& params) {
    const double hg = nl.dH(0.0) * nl.dG(0.0);
    const double ab = params.a * params.b;
    if (!(hg > ab)) {
        throw Error(ErrorKind::InvalidRegime, "H'(0)G'(0) <= ab");
    }
    const double ad = params.a * params.d2;
    const double bd = params.b * params.d1;
    const double num = ad + bd + std::sqrt((ad - bd) * (ad - bd) + 4.0 * params.d1 * params.d2 * hg);
    const double dirichlet = std::numbers::pi * std::sqrt(num / (2.0 * (hg - ab)));
    return params.boundary == BoundaryKind::Dirichlet ? dirichlet : 0.5 * dirichlet;
}

InitialData InitialData::sample(double h0, std::size_t nodes, const std::function<double(double)>& u,
                                const std::function<double(double)>& v) {
    InitialData init;
    init.h0 = h0;
    init.x.resize(nodes);
    init.u0.resize(nodes);
    init.v0.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double x = h0 * static_cast<double>(i) / static_cast<double>(nodes - 1);
        init.x[i] = x;
        init.u0[i] = u(x);
        init.v0[i] = v(x);
    }
    // Endpoint sampling of sin/cos leaves O(1e-17) residue; the front is pinned exactly.
    init.x.back() = h0;
    return init;
}

ValidationReport validate_initial_data(const InitialData& init, const ModelParams& params,
                                       const InitialDataTolerances& tol) {
    ValidationReport rep;
    const std::size_t n = init.x.size();
    if (n < 3 || init.u0.size() != n || init.v0.size() != n) {
        throw Error(ErrorKind::Precondition, "initial data must be sampled on >= 3 nodes");
    }
    const double dx = init.h0 / static_cast<double>(n - 1);
    const bool dirichlet = params.boundary == BoundaryKind::Dirichlet;

    const auto check = [&](const std::vector<double>& w, const char* name) {
        double sup = 0.0;
        for (double wi : w) sup = std::max(sup, std::abs(wi));
        const double zero_tol = tol.zero * std::max(sup, 1.0);
        if (std::abs(w[n - 1]) > zero_tol) rep.violations.push_back({"w(h0)=0", name, n - 1});
        const double slope = numerics::left_slope(w[0], w[1], w[2], dx);
        if (dirichlet) {
            if (std::abs(w[0]) > zero_tol) rep.violations.push_back({"w(0)=0", name, 0});
            if (!(slope > 0.0)) rep.violations.push_back({"w'(0)>0", name, 0});
        } else {
            if (std::abs(slope) > tol.flat_slope * sup / init.h0) {
                rep.violations.push_back({"w'(0)=0", name, 0});
            }
        }
        const std::size_t first = dirichlet ? 1 : 0;
        for (std::size_t i = first; i + 1 < n; ++i) {
            if (!(w[i] > 0.0)) rep.violations.push_back({"w>0", name, i});
        }
    };
    check(init.u0, "u0");
    check(init.v0, "v0");
    return rep;
}

}  // namespace frontwave
