#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "frontwave/model.hpp"

namespace frontwave::testing {

// d1 = d2 = a = b = 1, H = G = 2z/(1+z), mu1 = mu2 = 1.
inline Nonlinearity s1_nonlinearity() { return saturating(2.0, 1.0, 2.0, 1.0); }

inline ModelParams s1_params(BoundaryKind boundary = BoundaryKind::Neumann) {
    ModelParams p;
    p.boundary = boundary;
    return p;
}

inline InitialData cosine_bump(double h0, double amp, std::size_t nodes = 801) {
    auto f = [h0, amp](double x) { return amp * std::cos(std::numbers::pi * x / (2.0 * h0)); };
    return InitialData::sample(h0, nodes, f, f);
}

inline InitialData sine_bump(double h0, double amp, std::size_t nodes = 801) {
    auto f = [h0, amp](double x) { return amp * std::sin(std::numbers::pi * x / h0); };
    return InitialData::sample(h0, nodes, f, f);
}

// Composite Simpson rule on [lo, hi] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace frontwave::testing
