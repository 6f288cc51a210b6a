#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace frontwave::numerics {

/// Solves a tridiagonal system in place (Thomas algorithm, no pivoting).
/// lower[0] and upper[n-1] are ignored. The matrix must be diagonally
/// dominant; every caller in this library assembles M-matrices.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

using Block2 = std::array<double, 4>;  // row-major 2x2
using Vec2 = std::array<double, 2>;

/// Block Thomas algorithm for a tridiagonal system with 2x2 blocks.
/// The off-diagonal blocks are diagonal matrices (lower/upper hold their
/// two diagonal entries). Solution overwrites rhs.
void solve_block_tridiagonal(std::span<const Vec2> lower, std::span<const Block2> diag,
                             std::span<const Vec2> upper, std::span<Vec2> rhs);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x. Requires n >= 2;
/// slope_stderr is 0 for n == 2.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Linear interpolation on an increasing grid; clamps outside [x.front(), x.back()].
double interpolate(std::span<const double> x, std::span<const double> y, double at);

/// 17 significant digits, locale-independent ('.' decimal point).
std::string format_double(double value);

/// One-sided three-point derivative at the left end of a uniform grid.
inline double left_slope(double f0, double f1, double f2, double dx) {
    return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * dx);
}

/// One-sided three-point derivative at the right end of a uniform grid
/// (f0 is the end value, f1 and f2 step inward).
inline double right_slope(double f0, double f1, double f2, double dx) {
    return (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * dx);
}

}  // namespace frontwave::numerics
