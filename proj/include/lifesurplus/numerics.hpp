#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lifesurplus/errors.hpp"
#include "lifesurplus/mesh.hpp"

namespace lifesurplus {

/// Running integral of uniformly sampled values: result[k] ~= integral of f
/// over [t0, t0 + k h] given f at the nodes only. Each panel integrates the
/// cubic through the four nearest nodes, so the rule is exact for cubics and
/// O(h^4) globally, the same order as the RK4 solvers it feeds.
inline std::vector<double> cumulative_from_samples(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return std::vector<double>(n, 0.0);
    std::vector<double> out(n, 0.0);
    if (n == 2) {  // degenerate mesh, trapezoid is all we have
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    if (n == 3) {  // Simpson on the pair, quadratic sub-panels
        out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
        out[2] = out[1] + h / 12.0 * (-f[0] + 8.0 * f[1] + 5.0 * f[2]);
        return out;
    }
    const double w = h / 24.0;
    out[1] = out[0] + w * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    for (std::size_t k = 1; k + 2 < n; ++k)
        out[k + 1] = out[k] + w * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]);
    out[n - 1] = out[n - 2] + w * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
    return out;
}

/// Classical RK4, marching forward from g(start) = initial over `steps`
/// steps of width h. deriv(t, g) is dg/dt.
template <typename F>
Curve rk4_forward(F&& deriv, double start, double initial, std::size_t steps, double h) {
    Curve out;
    out.step = h;
    out.start = start;
    out.values.resize(steps + 1);
    out.values[0] = initial;
    double g = initial;
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = start + h * static_cast<double>(i);
        const double k1 = deriv(t, g);
        const double k2 = deriv(t + 0.5 * h, g + 0.5 * h * k1);
        const double k3 = deriv(t + 0.5 * h, g + 0.5 * h * k2);
        const double k4 = deriv(t + h, g + h * k3);
        g += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(g)) throw numerical_error("forward solve produced a non-finite value");
        out.values[i + 1] = g;
    }
    return out;
}

/// Classical RK4 run in reverse time from g(start + steps*h) = terminal.
template <typename F>
Curve rk4_backward(F&& deriv, double start, double terminal, std::size_t steps, double h) {
    Curve out;
    out.step = h;
    out.start = start;
    out.values.resize(steps + 1);
    out.values[steps] = terminal;
    double g = terminal;
    for (std::size_t i = steps; i > 0; --i) {
        const double t = start + h * static_cast<double>(i);
        const double k1 = deriv(t, g);
        const double k2 = deriv(t - 0.5 * h, g - 0.5 * h * k1);
        const double k3 = deriv(t - 0.5 * h, g - 0.5 * h * k2);
        const double k4 = deriv(t - h, g - h * k3);
        g -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(g)) throw numerical_error("backward solve produced a non-finite value");
        out.values[i - 1] = g;
    }
    return out;
}

}  // namespace lifesurplus
