#include "frontwave/semiwave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frontwave/error.hpp"
#include "frontwave/numerics.hpp"

namespace frontwave {

namespace {

using numerics::Block2;
using numerics::Vec2;

std::string describe(double value) {
    std::ostringstream os;
    os.precision(10);
    os << value;
    return os.str();
}

/// Discrete wave system on x_i = i dx, i = 0..M, with both ends held fixed.
/// Only interior nodes are unknowns.
class WaveSystem {
public:
    WaveSystem(double c, const Nonlinearity& nl, const ModelParams& params, std::size_t M, double dx)
        : c_(c), nl_(nl), p_(params), M_(M), dx_(dx) {}

    double residual(const std::vector<double>& phi, const std::vector<double>& psi,
                    std::vector<Vec2>& r) const {
        const double inv2 = 1.0 / (dx_ * dx_);
        const double inv1 = 1.0 / (2.0 * dx_);
        double sup = 0.0;
        r.resize(M_ - 1);
        for (std::size_t i = 1; i < M_; ++i) {
            const double r1 = p_.d1 * (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) * inv2 -
                              c_ * (phi[i + 1] - phi[i - 1]) * inv1 - p_.a * phi[i] + nl_.H(psi[i]);
            const double r2 = p_.d2 * (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) * inv2 -
                              c_ * (psi[i + 1] - psi[i - 1]) * inv1 - p_.b * psi[i] + nl_.G(phi[i]);
            r[i - 1] = {r1, r2};
            sup = std::max({sup, std::abs(r1), std::abs(r2)});
        }
        if (!std::isfinite(sup)) return std::numeric_limits<double>::infinity();
        return sup;
    }

    /// Solves (I / dtau - J) delta = r; inv_dtau = 0 gives the Newton step.
    void solve_step(const std::vector<double>& phi, const std::vector<double>& psi, double inv_dtau,
                    std::vector<Vec2>& r) const {
        const std::size_t n = M_ - 1;
        const double inv2 = 1.0 / (dx_ * dx_);
        const double adv = c_ / (2.0 * dx_);
        lower_.assign(n, {-(p_.d1 * inv2 + adv), -(p_.d2 * inv2 + adv)});
        upper_.assign(n, {-(p_.d1 * inv2 - adv), -(p_.d2 * inv2 - adv)});
        diag_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t i = k + 1;
            diag_[k] = {inv_dtau + 2.0 * p_.d1 * inv2 + p_.a, -nl_.dH(psi[i]), -nl_.dG(phi[i]),
                        inv_dtau + 2.0 * p_.d2 * inv2 + p_.b};
        }
        numerics::solve_block_tridiagonal(lower_, diag_, upper_, r);
    }

private:
    double c_;
    const Nonlinearity& nl_;
    const ModelParams& p_;
    std::size_t M_;
    double dx_;
    mutable std::vector<Vec2> lower_, upper_;
    mutable std::vector<Block2> diag_;
};

struct Relaxed {
    std::vector<double> phi, psi;
    double residual = 0.0;
    int iterations = 0;
};

void apply(const std::vector<Vec2>& delta, std::vector<double>& phi, std::vector<double>& psi) {
    for (std::size_t k = 0; k < delta.size(); ++k) {
        phi[k + 1] += delta[k][0];
        psi[k + 1] += delta[k][1];
    }
}

/// Pseudo-transient continuation: linearly implicit Euler marching of
/// w_tau = R(w) with a step that grows as the residual falls, followed by
/// Newton polish once the marching has settled.
Relaxed relax(double c, const Nonlinearity& nl, const ModelParams& params, std::size_t M, double dx,
              std::vector<double> phi, std::vector<double> psi, const SemiWaveNumerics& num) {
    WaveSystem sys(c, nl, params, M, dx);
    std::vector<Vec2> r, r_trial;
    double res = sys.residual(phi, psi, r);
    if (!std::isfinite(res)) {
        throw Error(ErrorKind::NoConvergence, "initial guess has a non-finite residual");
    }

    double dtau = num.dtau0;
    int it = 0;
    std::vector<double> phi_t, psi_t;
    while (res > num.relax_tol) {
        if (++it > num.max_relax_steps) {
            throw Error(ErrorKind::NoConvergence,
                        "relaxation stalled after " + std::to_string(it - 1) +
                            " iterations, residual " + describe(res));
        }
        std::vector<Vec2> delta = r;
        sys.solve_step(phi, psi, 1.0 / dtau, delta);
        phi_t = phi;
        psi_t = psi;
        apply(delta, phi_t, psi_t);
        const double res_t = sys.residual(phi_t, psi_t, r_trial);
        if (!std::isfinite(res_t) || res_t > 10.0 * res) {
            dtau *= 0.25;
            if (dtau < 1e-12) {
                throw Error(ErrorKind::NoConvergence,
                            "pseudo-time step collapsed after " + std::to_string(it) +
                                " iterations");
            }
            continue;
        }
        const double growth = std::clamp(res / res_t, 0.5, 10.0);
        dtau = std::min(dtau * growth, 1e14);
        phi.swap(phi_t);
        psi.swap(psi_t);
        r.swap(r_trial);
        res = res_t;
    }

    // Newton polish on the steady system.
    for (int k = 0; k < num.max_newton && res > 0.0; ++k) {
        std::vector<Vec2> delta = r;
        sys.solve_step(phi, psi, 0.0, delta);
        phi_t = phi;
        psi_t = psi;
        apply(delta, phi_t, psi_t);
        const double res_t = sys.residual(phi_t, psi_t, r_trial);
        ++it;
        if (!(res_t < res)) break;
        phi.swap(phi_t);
        psi.swap(psi_t);
        r.swap(r_trial);
        res = res_t;
    }
    if (!(res <= num.residual_tol)) {
        throw Error(ErrorKind::NoConvergence, "residual " + describe(res) + " after " +
                                                  std::to_string(it) + " iterations");
    }
    return {std::move(phi), std::move(psi), res, it};
}

std::size_t grid_cells(double X_max, double dx) {
    const auto M = static_cast<std::size_t>(std::llround(X_max / dx));
    if (M < 4) throw Error(ErrorKind::Precondition, "profile grid needs at least 4 cells");
    return M;
}

}  // namespace

bool SemiWaveProfile::monotone(double u_star, double v_star) const {
    const auto check = [](const std::vector<double>& w, double limit) {
        const double saturated = 64.0 * std::numeric_limits<double>::epsilon() * limit;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            if (w[i + 1] > w[i]) continue;
            if (w[i + 1] == w[i] && limit - w[i] <= saturated) continue;
            return false;
        }
        return true;
    };
    return check(phi, u_star) && check(psi, v_star);
}

double characteristic_polynomial(const Nonlinearity& nl, const ModelParams& p, double lambda,
                                 double c) {
    const double f1 = p.d1 * lambda * lambda - c * lambda - p.a;
    const double f2 = p.d2 * lambda * lambda - c * lambda - p.b;
    return f1 * f2 - nl.dH(0.0) * nl.dG(0.0);
}

double characteristic_polynomial_dlambda(const Nonlinearity&, const ModelParams& p, double lambda,
                                         double c) {
    const double f1 = p.d1 * lambda * lambda - c * lambda - p.a;
    const double f2 = p.d2 * lambda * lambda - c * lambda - p.b;
    return (2.0 * p.d1 * lambda - c) * f2 + f1 * (2.0 * p.d2 * lambda - c);
}

CStar compute_cstar(const Nonlinearity& nl, const ModelParams& p) {
    const double K = nl.dH(0.0) * nl.dG(0.0);
    if (!(K > p.a * p.b)) {
        throw Error(ErrorKind::NoTangency, "R0 <= 1: no positive growth mode at the origin");
    }
    // For fixed lambda, s = c lambda solves (alpha + s)(beta + s) = K on the
    // branch where both factors are positive (positive eigenvector).
    struct Branch {
        double s, ds;
    };
    const auto branch = [&](double lambda) {
        const double alpha = p.a - p.d1 * lambda * lambda;
        const double beta = p.b - p.d2 * lambda * lambda;
        const double s = 0.5 * (-(alpha + beta) + std::sqrt((alpha - beta) * (alpha - beta) + 4.0 * K));
        const double A = alpha + s;
        const double B = beta + s;
        const double ds = 2.0 * lambda * (p.d1 * B + p.d2 * A) / (A + B);
        return Branch{s, ds};
    };
    // c(lambda) = s / lambda is minimal where lambda s' - s changes sign.
    const auto slope = [&](double lambda) {
        const Branch br = branch(lambda);
        return lambda * br.ds - br.s;
    };

    double lo = 1e-8;
    double hi = lo;
    bool found = false;
    for (int k = 0; k < 400; ++k) {
        hi = lo * 1.1;
        if (slope(hi) > 0.0) {
            found = true;
            break;
        }
        lo = hi;
    }
    if (!found || !(slope(lo) < 0.0)) {
        throw Error(ErrorKind::NoTangency, "c(lambda) has no interior minimum");
    }
    for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    const double lambda = std::abs(slope(lo)) < std::abs(slope(hi)) ? lo : hi;
    const Branch br = branch(lambda);
    CStar out;
    out.lambda_star = lambda;
    out.c_star = br.s / lambda;
    out.P_residual = std::abs(characteristic_polynomial(nl, p, lambda, out.c_star));
    out.dP_residual = std::abs(characteristic_polynomial_dlambda(nl, p, lambda, out.c_star));
    return out;
}

DecayRate decay_rate_theoretical(const Nonlinearity& nl, const ModelParams& p, double c) {
    const Equilibrium eq = compute_equilibrium(nl, p);
    const double k = eq.Hp_vstar * eq.Gp_ustar;
    if (!(p.a * p.b > k)) {
        throw Error(ErrorKind::NoAdmissibleRoot, "ab <= H'(v*)G'(u*)");
    }
    const auto f1 = [&](double beta) { return p.a - p.d1 * beta * beta - c * beta; };
    const auto f2 = [&](double beta) { return p.b - p.d2 * beta * beta - c * beta; };
    // Both factors stay positive on (0, beta_max), where the product falls
    // monotonically from ab to 0.
    const double r1 = (-c + std::sqrt(c * c + 4.0 * p.d1 * p.a)) / (2.0 * p.d1);
    const double r2 = (-c + std::sqrt(c * c + 4.0 * p.d2 * p.b)) / (2.0 * p.d2);
    double lo = 0.0;
    double hi = std::min(r1, r2);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (f1(mid) * f2(mid) > k ? lo : hi) = mid;
    }
    const double beta = 0.5 * (lo + hi);
    return {beta, eq.Hp_vstar / f1(beta)};
}

SemiWaveProfile solve_semiwave(double c, const Nonlinearity& nl, const ModelParams& params,
                               const SemiWaveNumerics& numerics, const SemiWaveProfile* guess) {
    const CStar cs = compute_cstar(nl, params);
    if (!(c >= 0.0) || !(c < cs.c_star)) {
        throw Error(ErrorKind::SpeedOutOfRange,
                    "c = " + describe(c) + " outside [0, c*) with c* = " + describe(cs.c_star));
    }
    const Equilibrium eq = compute_equilibrium(nl, params);
    double X = numerics.X_max;
    if (X <= 0.0) X = std::max(40.0, 12.0 / decay_rate_theoretical(nl, params, c).beta);
    const std::size_t M = grid_cells(X, numerics.dx);
    const double dx = X / static_cast<double>(M);

    std::vector<double> phi(M + 1), psi(M + 1);
    if (guess && guess->phi.size() == M + 1) {
        phi = guess->phi;
        psi = guess->psi;
    } else {
        for (std::size_t i = 0; i <= M; ++i) {
            const double t = std::tanh(static_cast<double>(i) * dx);
            phi[i] = eq.u_star * t;
            psi[i] = eq.v_star * t;
        }
    }
    phi[0] = psi[0] = 0.0;
    phi[M] = eq.u_star;
    psi[M] = eq.v_star;

    Relaxed sol = relax(c, nl, params, M, dx, std::move(phi), std::move(psi), numerics);

    SemiWaveProfile prof;
    prof.c = c;
    prof.X_max = X;
    prof.dx = dx;
    prof.x.resize(M + 1);
    for (std::size_t i = 0; i <= M; ++i) prof.x[i] = static_cast<double>(i) * dx;
    prof.x[M] = X;
    prof.phi = std::move(sol.phi);
    prof.psi = std::move(sol.psi);
    prof.slope0_phi = numerics::left_slope(prof.phi[0], prof.phi[1], prof.phi[2], dx);
    prof.slope0_psi = numerics::left_slope(prof.psi[0], prof.psi[1], prof.psi[2], dx);
    prof.residual_inf = sol.residual;
    prof.iterations = sol.iterations;
    return prof;
}

double free_boundary_mismatch(const SemiWaveProfile& profile, const ModelParams& params) {
    return params.mu1 * profile.slope0_phi + params.mu2 * profile.slope0_psi - profile.c;
}

SpeedResult find_c0(const Nonlinearity& nl, const ModelParams& params,
                    const SemiWaveNumerics& numerics) {
    if (!(params.mu1 + params.mu2 > 0.0)) {
        throw Error(ErrorKind::Precondition, "mu1 + mu2 must be positive");
    }
    const CStar cs = compute_cstar(nl, params);
    // One truncation length for the whole search keeps warm starts on a
    // common grid.
    SemiWaveNumerics num = numerics;
    if (num.X_max <= 0.0) {
        num.X_max = std::max(40.0, 12.0 / decay_rate_theoretical(nl, params, 0.0).beta);
    }

    SemiWaveProfile left = solve_semiwave(0.0, nl, params, num);
    double f_left = free_boundary_mismatch(left, params);
    if (!(f_left > 0.0)) {
        throw Error(ErrorKind::NoSignChange, "F(0) = " + describe(f_left) + " is not positive");
    }
    const double c_top = 0.999 * cs.c_star;
    SemiWaveProfile right;
    double f_right = f_left;
    bool bracketed = false;
    for (int k = 1; k <= num.c0_ladder; ++k) {
        const double ck = c_top * static_cast<double>(k) / static_cast<double>(num.c0_ladder);
        right = solve_semiwave(ck, nl, params, num, &left);
        f_right = free_boundary_mismatch(right, params);
        if (f_right <= 0.0) {
            bracketed = true;
            break;
        }
        left = right;
        f_left = f_right;
    }
    if (!bracketed) {
        throw Error(ErrorKind::NoSignChange, "F stays positive up to 0.999 c*");
    }

    if (f_right == 0.0) {
        return {{cs.c_star, right.c, cs.lambda_star, 0.0}, std::move(right)};
    }
    while (right.c - left.c > num.c0_tol) {
        const double mid = 0.5 * (left.c + right.c);
        SemiWaveProfile pm = solve_semiwave(mid, nl, params, num, &left);
        const double fm = free_boundary_mismatch(pm, params);
        if (fm > 0.0) {
            left = std::move(pm);
            f_left = fm;
        } else {
            right = std::move(pm);
            f_right = fm;
        }
    }
    // Final evaluation at the secant point inside the bracket.
    const double cs_point = left.c + (right.c - left.c) * f_left / (f_left - f_right);
    SemiWaveProfile best = solve_semiwave(cs_point, nl, params, num, &left);
    const double fb = free_boundary_mismatch(best, params);
    SpeedPair sp{cs.c_star, cs_point, cs.lambda_star, std::abs(fb)};
    return {sp, std::move(best)};
}

DecayFit decay_rate_empirical(const SemiWaveProfile& profile, const Equilibrium& eq,
                              const TailWindow& window) {
    const double X = profile.X_max;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < profile.x.size(); ++i) {
        const double x = profile.x[i];
        if (x < window.begin * X || x > window.end * X) continue;
        const double deficit = eq.u_star - profile.phi[i] + eq.v_star - profile.psi[i];
        if (!(deficit >= 1e-13)) {
            throw Error(ErrorKind::TailUnderflow,
                        "tail deficit " + describe(deficit) + " at x = " + describe(x));
        }
        xs.push_back(x);
        ys.push_back(std::log(deficit));
    }
    if (xs.size() < 3) throw Error(ErrorKind::Precondition, "tail window holds fewer than 3 nodes");
    const numerics::LineFit fit = numerics::fit_line(xs, ys);
    return {-fit.slope, fit.r2};
}

SteadyHalfLineProfile solve_halfline_steady(const Nonlinearity& nl, const ModelParams& params,
                                            double X_max, const SemiWaveNumerics& numerics) {
    SteadyHalfLineProfile out;
    if (!(compute_R0(nl, params) > 1.0)) {
        // Only the trivial bounded solution exists; relax toward it from a
        // small positive guess to report what the solver finds.
        const std::size_t M = grid_cells(X_max, numerics.dx);
        const double dx = X_max / static_cast<double>(M);
        std::vector<double> phi(M + 1), psi(M + 1);
        for (std::size_t i = 0; i <= M; ++i) {
            phi[i] = psi[i] = 0.1 * std::tanh(static_cast<double>(i) * dx);
        }
        phi[0] = psi[0] = phi[M] = psi[M] = 0.0;
        Relaxed sol = relax(0.0, nl, params, M, dx, std::move(phi), std::move(psi), numerics);
        double sup = 0.0;
        for (std::size_t i = 0; i <= M; ++i) sup = std::max({sup, sol.phi[i], sol.psi[i]});
        throw Error(ErrorKind::NotPositive,
                    "R0 <= 1: half-line solution relaxes to zero (sup " + describe(sup) + ")");
    }
    SemiWaveNumerics num = numerics;
    num.X_max = X_max;
    SemiWaveProfile prof = solve_semiwave(0.0, nl, params, num);
    out.x = std::move(prof.x);
    out.U = std::move(prof.phi);
    out.V = std::move(prof.psi);
    out.residual_inf = prof.residual_inf;
    return out;
}

}  // namespace frontwave
