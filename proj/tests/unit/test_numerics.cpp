#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "frontwave/numerics.hpp"

namespace fw = frontwave::numerics;

namespace {

// Gaussian elimination with partial pivoting on a dense copy.
std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[p][k])) p = i;
        std::swap(A[k], A[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = A[i][k] / A[k][k];
            for (std::size_t j = k; j < n; ++j) A[i][j] -= m * A[k][j];
            b[i] -= m * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    return x;
}

}  // namespace

TEST(Tridiagonal, MatchesDenseElimination) {
    const std::size_t n = 17;
    std::vector<double> lo(n), di(n), up(n), rhs(n);
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = -0.3 - 0.01 * i;
        up[i] = -0.7 + 0.02 * i;
        di[i] = 2.5 + 0.1 * std::sin(double(i));
        rhs[i] = std::cos(0.4 * i);
        A[i][i] = di[i];
        if (i > 0) A[i][i - 1] = lo[i];
        if (i + 1 < n) A[i][i + 1] = up[i];
    }
    const auto ref = dense_solve(A, rhs);
    fw::solve_tridiagonal(lo, di, up, rhs);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(rhs[i], ref[i], 1e-13);
}

TEST(BlockTridiagonal, MatchesDenseElimination) {
    const std::size_t n = 9;
    std::vector<fw::Vec2> lo(n), up(n), rhs(n);
    std::vector<fw::Block2> di(n);
    std::vector<std::vector<double>> A(2 * n, std::vector<double>(2 * n, 0.0));
    std::vector<double> b(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = {-1.0, -0.5};
        up[i] = {-0.8, -1.1};
        di[i] = {3.0 + 0.1 * i, -0.4, -0.6, 3.5};
        rhs[i] = {std::sin(double(i)), std::cos(double(i))};
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) A[2 * i + r][2 * i + c] = di[i][2 * r + c];
            if (i > 0) A[2 * i + r][2 * (i - 1) + r] = lo[i][r];
            if (i + 1 < n) A[2 * i + r][2 * (i + 1) + r] = up[i][r];
            b[2 * i + r] = rhs[i][r];
        }
    }
    const auto ref = dense_solve(A, b);
    fw::solve_block_tridiagonal(lo, di, up, rhs);
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(rhs[i][0], ref[2 * i], 1e-13);
        EXPECT_NEAR(rhs[i][1], ref[2 * i + 1], 1e-13);
    }
}

TEST(FitLine, RecoversExactLine) {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(0.5 * i);
        y.push_back(3.0 - 0.25 * x.back());
    }
    const auto f = fw::fit_line(x, y);
    EXPECT_NEAR(f.slope, -0.25, 1e-14);
    EXPECT_NEAR(f.intercept, 3.0, 1e-13);
    EXPECT_NEAR(f.r2, 1.0, 1e-14);
    EXPECT_LT(f.slope_stderr, 1e-14);
    EXPECT_EQ(f.n, 20u);
}

TEST(FitLine, StandardErrorMatchesTextbookFormula) {
    const std::vector<double> x = {0, 1, 2, 3, 4};
    const std::vector<double> y = {0.1, 0.9, 2.2, 2.8, 4.1};
    const auto f = fw::fit_line(x, y);
    // slope = Sxy / Sxx, se^2 = SSE / ((n - 2) Sxx)
    const double xm = 2.0, ym = 2.02;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < 5; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    const double slope = sxy / sxx;
    double sse = 0;
    for (int i = 0; i < 5; ++i) {
        const double r = y[i] - (ym + slope * (x[i] - xm));
        sse += r * r;
    }
    EXPECT_NEAR(f.slope, slope, 1e-14);
    EXPECT_NEAR(f.slope_stderr, std::sqrt(sse / (3.0 * sxx)), 1e-14);
}

TEST(Interpolate, LinearInsideAndClampedOutside) {
    const std::vector<double> x = {0.0, 1.0, 3.0};
    const std::vector<double> y = {1.0, 3.0, -1.0};
    EXPECT_DOUBLE_EQ(fw::interpolate(x, y, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(fw::interpolate(x, y, 2.0), 1.0);
    EXPECT_DOUBLE_EQ(fw::interpolate(x, y, -4.0), 1.0);
    EXPECT_DOUBLE_EQ(fw::interpolate(x, y, 9.0), -1.0);
}

TEST(FormatDouble, RoundTripsBitExactly) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.46868875909909}) {
        EXPECT_EQ(std::stod(fw::format_double(v)), v);
    }
    EXPECT_EQ(fw::format_double(2.0), "2");
}

TEST(OneSidedSlopes, ExactOnQuadratics) {
    auto f = [](double x) { return 2.0 - 3.0 * x + 0.7 * x * x; };
    const double dx = 0.1, x0 = 1.3;
    EXPECT_NEAR(fw::left_slope(f(x0), f(x0 + dx), f(x0 + 2 * dx), dx), -3.0 + 1.4 * x0, 1e-12);
    EXPECT_NEAR(fw::right_slope(f(x0), f(x0 - dx), f(x0 - 2 * dx), dx), -3.0 + 1.4 * x0, 1e-12);
}
