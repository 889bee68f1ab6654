#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lifesurplus {

/// A real function sampled on a uniform time mesh.
///
/// Node i sits at time start + i*step. Most curves start at 0; curves
/// produced by paid-up or bonus valuations may start at an interior time.
struct Curve {
    double step = 0.0;
    double start = 0.0;
    std::vector<double> values;

    // Set by the solvers when the solution (or the premium that produced it)
    // goes negative somewhere. Negative values are legitimate, just unusual.
    bool warn_negative = false;

    std::size_t size() const { return values.size(); }
    double time_at(std::size_t i) const { return start + step * static_cast<double>(i); }
    double end_time() const { return time_at(values.size() - 1); }

    double operator[](std::size_t i) const { return values[i]; }

    /// Index of the mesh node at time t; throws if t is not a node.
    std::size_t index_of(double t) const {
        const double x = (t - start) / step;
        const double r = std::round(x);
        if (r < 0.0 || r >= static_cast<double>(values.size()) ||
            std::abs(x - r) > 1e-9 * (1.0 + std::abs(x))) {
            throw std::domain_error("time is not a node of this mesh");
        }
        return static_cast<std::size_t>(r);
    }

    double at(double t) const { return values[index_of(t)]; }
};

/// Index of time t on the mesh {0, h, ..., term}; throws if t is not a node.
inline std::size_t node_index(double t, double term, double h) {
    const double x = t / h;
    const double r = std::round(x);
    if (r < 0.0 || t > term + 1e-9 * term || std::abs(x - r) > 1e-9 * (1.0 + std::abs(x)))
        throw std::domain_error("time is not a node of the mesh");
    return static_cast<std::size_t>(r);
}

/// Number of mesh nodes on [0, term] with step h; throws unless h divides term.
inline std::size_t node_count(double term, double h) {
    if (!(term > 0.0) || !(h > 0.0)) throw std::domain_error("term and step must be positive");
    const double x = term / h;
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-9 * x) throw std::domain_error("mesh step must divide the term");
    return static_cast<std::size_t>(r) + 1;
}

}  // namespace lifesurplus
