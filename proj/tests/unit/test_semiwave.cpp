#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "frontwave/error.hpp"
#include "frontwave/numerics.hpp"
#include "frontwave/semiwave.hpp"
#include "s1.hpp"

using namespace frontwave;
using frontwave::testing::s1_nonlinearity;
using frontwave::testing::s1_params;

namespace {

// Admissible growth modes at the origin are lambda > 0 with
// A = a + c lambda - d1 lambda^2 > 0, B = b + c lambda - d2 lambda^2 > 0 and
// A B = K. A B starts at ab < K and vanishes at the first root of A or B, so
// the mode exists iff the maximum of A B on that interval reaches K. That
// maximum grows with c, so c* is found by bisection on c over a grid scan.
double cstar_by_scan(const ModelParams& p, double K) {
    const auto reaches = [&](double c) {
        const double ra = (c + std::sqrt(c * c + 4.0 * p.d1 * p.a)) / (2.0 * p.d1);
        const double rb = (c + std::sqrt(c * c + 4.0 * p.d2 * p.b)) / (2.0 * p.d2);
        const double top = std::min(ra, rb);
        const auto prod = [&](double l) {
            return (p.a + c * l - p.d1 * l * l) * (p.b + c * l - p.d2 * l * l);
        };
        const int n = 4000;
        int best = 0;
        for (int i = 1; i < n; ++i)
            if (prod(top * i / n) > prod(top * best / n)) best = i;
        double lo = top * std::max(best - 1, 0) / n, hi = top * std::min(best + 1, n) / n;
        for (int it = 0; it < 100; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            (prod(m1) < prod(m2) ? lo : hi) = (prod(m1) < prod(m2) ? m1 : m2);
        }
        return prod(0.5 * (lo + hi)) >= K;
    };
    double lo = 0.0, hi = 1.0;
    while (!reaches(hi)) hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (lo + hi);
        (reaches(m) ? hi : lo) = m;
    }
    return 0.5 * (lo + hi);
}

// For c = 0 and H = G the profile solves d phi'' = phi - H(phi), whose first
// integral gives phi'^2 = (2/d) int_phi^1 (H(s) - s) ds.
double s1_energy(double s) {
    const auto P = [](double r) { return 2.0 * r - 2.0 * std::log1p(r) - 0.5 * r * r; };
    return 2.0 * (P(1.0) - P(s));
}

double crossing(const SemiWaveProfile& prof, double level) {
    for (std::size_t i = 1; i < prof.x.size(); ++i) {
        if (prof.phi[i] >= level) {
            const double w = (level - prof.phi[i - 1]) / (prof.phi[i] - prof.phi[i - 1]);
            return prof.x[i - 1] + w * (prof.x[i] - prof.x[i - 1]);
        }
    }
    return NAN;
}

}  // namespace

TEST(CharacteristicPolynomial, FactorsAsProductMinusCoupling) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params();
    // (l^2 - c l - 1)^2 - 4
    for (double l : {0.3, 1.0, 2.5}) {
        for (double c : {0.0, 1.0, 2.0}) {
            const double f = l * l - c * l - 1.0;
            EXPECT_NEAR(characteristic_polynomial(nl, p, l, c), f * f - 4.0, 1e-13);
            EXPECT_NEAR(characteristic_polynomial_dlambda(nl, p, l, c), 2.0 * f * (2.0 * l - c), 1e-13);
        }
    }
}

TEST(MinimalSpeed, SymmetricClosedForm) {
    const auto cs = compute_cstar(s1_nonlinearity(), s1_params());
    // l^2 - c l + 1 = 0 has a double root at c = 2, l = 1.
    EXPECT_NEAR(cs.c_star, 2.0, 1e-9);
    EXPECT_NEAR(cs.lambda_star, 1.0, 1e-6);
    EXPECT_LE(cs.P_residual, 1e-9);
    EXPECT_LE(cs.dP_residual, 1e-6);
}

TEST(MinimalSpeed, AsymmetricMatchesGridScan) {
    ModelParams p = s1_params();
    p.d1 = 1.0;
    p.d2 = 2.0;
    p.a = 1.0;
    p.b = 2.0;
    const auto cs = compute_cstar(saturating(3.0, 1.0, 2.0, 1.0), p);
    EXPECT_NEAR(cs.c_star, cstar_by_scan(p, 6.0), 1e-6);
    EXPECT_LE(cs.P_residual, 1e-9);
}

TEST(MinimalSpeed, NoTangencyAtThreshold) {
    try {
        compute_cstar(saturating(1.0, 1.0, 1.0, 1.0), s1_params());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoTangency);
    }
}

TEST(SemiWave, StandingProfileMatchesFirstIntegral) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params();
    const auto eq = compute_equilibrium(nl, p);
    const auto prof = solve_semiwave(0.0, nl, p);
    EXPECT_LE(prof.residual_inf, 1e-8);
    EXPECT_TRUE(prof.monotone(eq.u_star, eq.v_star));
    EXPECT_EQ(prof.phi.front(), 0.0);
    EXPECT_EQ(prof.psi.front(), 0.0);

    const double slope = std::sqrt(s1_energy(0.0));
    EXPECT_NEAR(slope, 0.4768773, 1e-6);
    EXPECT_NEAR(prof.slope0_phi, slope, 1e-4);
    EXPECT_NEAR(prof.slope0_psi, slope, 1e-4);

    const double x_half =
        frontwave::testing::simpson([](double s) { return 1.0 / std::sqrt(s1_energy(s)); }, 0.0, 0.5, 2000);
    EXPECT_NEAR(crossing(prof, 0.5), x_half, 1e-3);
    for (std::size_t i = 0; i < prof.x.size(); ++i) EXPECT_NEAR(prof.phi[i], prof.psi[i], 1e-10);
}

TEST(SemiWave, ProfileStaysBelowEquilibrium) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params();
    const auto eq = compute_equilibrium(nl, p);
    for (double c : {0.0, 0.5, 1.5}) {
        const auto prof = solve_semiwave(c, nl, p);
        EXPECT_LE(prof.residual_inf, 1e-8);
        EXPECT_TRUE(prof.monotone(eq.u_star, eq.v_star)) << "c = " << c;
        for (std::size_t i = 0; i + 1 < prof.x.size(); ++i) {
            ASSERT_GE(prof.phi[i], 0.0);
            ASSERT_LT(prof.phi[i], eq.u_star);
            ASSERT_LT(prof.psi[i], eq.v_star);
        }
    }
}

TEST(SemiWave, BoundarySlopeFallsWithSpeed) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params();
    double prev = INFINITY;
    for (double frac : {0.0, 0.25, 0.5, 0.75}) {
        const auto prof = solve_semiwave(2.0 * frac, nl, p);
        EXPECT_LT(prof.slope0_phi, prev);
        prev = prof.slope0_phi;
    }
}

TEST(SemiWave, RejectsSpeedsOutsideRange) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params();
    for (double c : {-0.1, 2.0, 3.0}) {
        try {
            solve_semiwave(c, nl, p);
            FAIL() << c;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::SpeedOutOfRange);
        }
    }
}

TEST(SemiWave, TruncationErrorDecaysExponentially) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params();
    SemiWaveNumerics a;
    a.X_max = 20.0;
    SemiWaveNumerics b = a;
    b.X_max = 40.0;
    const auto pa = solve_semiwave(0.0, nl, p, a);
    const auto pb = solve_semiwave(0.0, nl, p, b);
    const double beta = decay_rate_theoretical(nl, p, 0.0).beta;
    EXPECT_LT(std::abs(pa.slope0_phi - pb.slope0_phi), 10.0 * std::exp(-beta * a.X_max));
}

TEST(FreeBoundarySpeed, PositiveMismatchAtRest) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params();
    const auto prof = solve_semiwave(0.0, nl, p);
    EXPECT_NEAR(free_boundary_mismatch(prof, p), 2.0 * std::sqrt(s1_energy(0.0)), 2e-4);
}

TEST(FreeBoundarySpeed, RootLiesBelowMinimalSpeed) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params();
    const auto r = find_c0(nl, p);
    EXPECT_GT(r.speeds.c0, 0.0);
    EXPECT_LT(r.speeds.c0, 2.0);
    EXPECT_LE(r.speeds.F_residual, 1e-8);
    EXPECT_NEAR(r.speeds.c_star, 2.0, 1e-9);
    EXPECT_NEAR(r.profile.c, r.speeds.c0, 0.0);
    EXPECT_NEAR(r.speeds.c0, 0.468688759, 1e-6);
}

TEST(FreeBoundarySpeed, SecondOrderInGridSpacing) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params();
    double c[3];
    const double dx[3] = {0.04, 0.02, 0.01};
    for (int k = 0; k < 3; ++k) {
        SemiWaveNumerics num;
        num.dx = dx[k];
        c[k] = find_c0(nl, p, num).speeds.c0;
    }
    const double order = std::log2(std::abs(c[0] - c[1]) / std::abs(c[1] - c[2]));
    EXPECT_GE(order, 1.5);
    EXPECT_LE(order, 2.5);
}

TEST(FreeBoundarySpeed, IncreasesWithFrontCoefficients) {
    const auto nl = s1_nonlinearity();
    double prev = INFINITY;
    for (double mu : {1.0, 0.1, 0.01}) {
        ModelParams p = s1_params();
        p.mu1 = p.mu2 = mu;
        const double c0 = find_c0(nl, p).speeds.c0;
        EXPECT_LT(c0, prev) << "mu = " << mu;
        EXPECT_GT(c0, 0.0);
        prev = c0;
    }
}

TEST(FreeBoundarySpeed, NeedsPositiveFrontCoefficient) {
    ModelParams p = s1_params();
    p.mu1 = p.mu2 = 0.0;
    try {
        find_c0(s1_nonlinearity(), p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Precondition);
    }
}

TEST(DecayRate, AdmissibleRootHasPositiveEigenvector) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params();
    // (b^2 + c b - 1)^2 = 1/4 with both factors negative: b^2 + c b = 1/2.
    for (double c : {0.0, 0.5, 1.2}) {
        const auto d = decay_rate_theoretical(nl, p, c);
        EXPECT_NEAR(d.beta, 0.5 * (-c + std::sqrt(c * c + 2.0)), 1e-12);
        EXPECT_GT(d.p_over_q, 0.0);
        EXPECT_NEAR(d.p_over_q, 1.0, 1e-9);
    }
    // The other positive root of the quartic at c = 0, sqrt(3/2), makes both
    // factors positive and the eigenvector mixed-sign.
    const double r = std::sqrt(1.5);
    const double f = r * r - 1.0;
    EXPECT_NEAR(f * f, 0.25, 1e-14);
    EXPECT_LT(0.5 / (-f), 0.0);
    EXPECT_GT(std::abs(decay_rate_theoretical(nl, p, 0.0).beta - r), 0.5);
}

TEST(DecayRate, NoAdmissibleRootWhenCouplingTooStrong) {
    Nonlinearity nl = s1_nonlinearity();
    nl.dH = [](double) { return 3.0; };  // H'(v*) G'(u*) = 1.5 > ab
    try {
        decay_rate_theoretical(nl, s1_params(), 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoAdmissibleRoot);
    }
}

TEST(DecayRate, EmpiricalFitOnSyntheticTail) {
    SemiWaveProfile prof;
    prof.X_max = 10.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = 0.01 * i;
        prof.x.push_back(x);
        prof.phi.push_back(1.0 - std::exp(-2.0 * x));
        prof.psi.push_back(1.0 - 0.5 * std::exp(-2.0 * x));
    }
    Equilibrium eq{1.0, 1.0, 0.5, 0.5};
    const auto fit = decay_rate_empirical(prof, eq);
    EXPECT_NEAR(fit.alpha_fit, 2.0, 1e-9);
    EXPECT_NEAR(fit.r2, 1.0, 1e-12);

    std::fill(prof.phi.begin() + 500, prof.phi.end(), 1.0);
    std::fill(prof.psi.begin() + 500, prof.psi.end(), 1.0);
    try {
        decay_rate_empirical(prof, eq);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TailUnderflow);
    }
}

TEST(DecayRate, SolvedProfileDecaysAtCharacteristicRate) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params();
    const auto eq = compute_equilibrium(nl, p);
    for (double c : {0.0, 0.4686887}) {
        const auto prof = solve_semiwave(c, nl, p);
        const double beta = decay_rate_theoretical(nl, p, c).beta;
        const auto fit = decay_rate_empirical(prof, eq);
        EXPECT_NEAR(fit.alpha_fit / beta, 1.0, 0.05) << "c = " << c;
    }
}

TEST(HalfLineSteadyState, IsTheStandingSemiWave) {
    const auto nl = s1_nonlinearity();
    const auto p = s1_params(BoundaryKind::Dirichlet);
    const auto st = solve_halfline_steady(nl, p, 40.0);
    SemiWaveNumerics num;
    num.X_max = 40.0;
    const auto prof = solve_semiwave(0.0, nl, p, num);
    ASSERT_EQ(st.U.size(), prof.phi.size());
    for (std::size_t i = 0; i < st.U.size(); ++i) {
        EXPECT_NEAR(st.U[i], prof.phi[i], 1e-9);
        EXPECT_NEAR(st.V[i], prof.psi[i], 1e-9);
    }
    const double U30 = numerics::interpolate(st.x, st.U, 30.0);
    EXPECT_NEAR(U30, 1.0, 1e-8);
}

TEST(HalfLineSteadyState, TrivialBelowThreshold) {
    try {
        solve_halfline_steady(saturating(0.9, 1.0, 0.9, 1.0), s1_params(), 20.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPositive);
    }
}
