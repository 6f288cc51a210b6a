#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace frontwave {

/// Reaction pair (H, G) with analytic first and second derivatives.
/// H drives u from v, G drives v from u. All callables must be pure.
struct Nonlinearity {
    using Fn = std::function<double(double)>;

    std::string name;
    Fn H, dH, d2H;
    Fn G, dG, d2G;
    /// Set when H'' or G'' vanishes identically (linear cholera-type H), so
    /// strict concavity is knowingly relaxed.
    bool weak_concavity = false;
};

/// H(z) = pH z / (1 + qH z), G(z) = pG z / (1 + qG z).
Nonlinearity saturating(double pH, double qH, double pG, double qG);

/// H(v) = k v with saturating G; flagged weak_concavity.
Nonlinearity cholera(double k, double pG, double qG);

enum class BoundaryKind { Dirichlet, Neumann };

std::string to_string(BoundaryKind kind);
BoundaryKind boundary_from_string(const std::string& name);

struct ModelParams {
    double d1 = 1.0;
    double d2 = 1.0;
    double a = 1.0;
    double b = 1.0;
    double mu1 = 1.0;
    double mu2 = 1.0;
    BoundaryKind boundary = BoundaryKind::Neumann;

    /// Human-readable violations of the structural invariants; empty when valid.
    /// The solver itself does not enforce these (degenerate checks such as
    /// mu1 = mu2 = 0 are legitimate test inputs).
    std::vector<std::string> validate() const;
};

struct Equilibrium {
    double u_star = 0.0;
    double v_star = 0.0;
    double Hp_vstar = 0.0;  ///< H'(v*)
    double Gp_ustar = 0.0;  ///< G'(u*)
};

struct HypothesisClause {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct HypothesisReport {
    double min_dH = 0.0;
    double min_dG = 0.0;
    double max_d2H = 0.0;
    double max_d2G = 0.0;
    std::optional<double> witness;  ///< smallest sampled z with G(H(z)/a) < b z
    bool weak_concavity = false;
    std::vector<HypothesisClause> clauses;

    bool passed() const;
    /// Throws Error(NonCompliant) naming the first failing clause.
    void require() const;
};

struct HypothesisOptions {
    double z_min = 1e-8;
    std::size_t samples = 512;
};

HypothesisReport check_hypotheses(const Nonlinearity& nl, const ModelParams& params, double z_max,
                                  const HypothesisOptions& opts = {});

double compute_R0(const Nonlinearity& nl, const ModelParams& params);

struct EquilibriumOptions {
    double lower = 1e-8;   ///< left end of the initial bracket
    double upper = 1.0;    ///< right end, doubled until g changes sign
    double width = 1e-14;  ///< final bracket width
    int max_doublings = 200;
};

/// Positive root of a u = H(v), b v = G(u), by bisection on
/// g(v) = b v - G(H(v)/a).
Equilibrium compute_equilibrium(const Nonlinearity& nl, const ModelParams& params,
                                const EquilibriumOptions& opts = {});

/// Threshold habitat length; the Neumann value is half the Dirichlet one.
double compute_l0(const Nonlinearity& nl, const ModelParams& params);

/// Initial data sampled on a uniform grid over [0, h0].
struct InitialData {
    double h0 = 0.0;
    std::vector<double> x;
    std::vector<double> u0;
    std::vector<double> v0;

    static InitialData sample(double h0, std::size_t nodes, const std::function<double(double)>& u,
                              const std::function<double(double)>& v);
};

struct Violation {
    std::string clause;
    std::string component;  ///< "u0" or "v0"
    std::size_t node = 0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

struct InitialDataTolerances {
    double zero = 1e-12;        ///< |w| allowed at pinned nodes, relative to sup|w|
    double flat_slope = 1e-3;   ///< |w'(0)| allowed for Neumann, in units of sup|w| / h0
};

ValidationReport validate_initial_data(const InitialData& init, const ModelParams& params,
                                       const InitialDataTolerances& tol = {});

}  // namespace frontwave
