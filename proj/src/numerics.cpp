#include "frontwave/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace frontwave::numerics {

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    std::vector<double> c(n);
    double denom = diag[0];
    c[0] = n > 1 ? upper[0] / denom : 0.0;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower[i] * c[i - 1];
        c[i] = i + 1 < n ? upper[i] / denom : 0.0;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

namespace {

Block2 inverse(const Block2& m) {
    const double det = m[0] * m[3] - m[1] * m[2];
    return {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
}

Vec2 mul(const Block2& m, const Vec2& v) {
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

}  // namespace

void solve_block_tridiagonal(std::span<const Vec2> lower, std::span<const Block2> diag,
                             std::span<const Vec2> upper, std::span<Vec2> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    // Forward sweep keeps C_i = D'_i^{-1} U_i as a full 2x2 block.
    std::vector<Block2> c(n);
    Block2 dinv = inverse(diag[0]);
    c[0] = {dinv[0] * upper[0][0], dinv[1] * upper[0][1], dinv[2] * upper[0][0],
            dinv[3] * upper[0][1]};
    rhs[0] = mul(dinv, rhs[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const Vec2& l = lower[i];
        // D'_i = D_i - L_i C_{i-1}, with L_i = diag(l)
        Block2 d = diag[i];
        d[0] -= l[0] * c[i - 1][0];
        d[1] -= l[0] * c[i - 1][1];
        d[2] -= l[1] * c[i - 1][2];
        d[3] -= l[1] * c[i - 1][3];
        dinv = inverse(d);
        const Vec2 r{rhs[i][0] - l[0] * rhs[i - 1][0], rhs[i][1] - l[1] * rhs[i - 1][1]};
        rhs[i] = mul(dinv, r);
        if (i + 1 < n) {
            const Vec2& u = upper[i];
            c[i] = {dinv[0] * u[0], dinv[1] * u[1], dinv[2] * u[0], dinv[3] * u[1]};
        }
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        const Vec2 cx = mul(c[i], rhs[i + 1]);
        rhs[i][0] -= cx[0];
        rhs[i][1] -= cx[1];
    }
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) {
        throw std::invalid_argument("fit_line: need at least two paired samples");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LineFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    fit.slope_stderr = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
    return fit;
}

double interpolate(std::span<const double> x, std::span<const double> y, double at) {
    if (at <= x.front()) return y.front();
    if (at >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    const double w = (at - x[j - 1]) / (x[j] - x[j - 1]);
    return (1.0 - w) * y[j - 1] + w * y[j];
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace frontwave::numerics
