#pragma once

#include <memory>
#include <string>
#include <vector>

namespace lifesurplus {

/// Deterministic per-annum rate as a function of policy time t >= 0.
///
/// A curve is an immutable expression tree; evaluation is pure, so curves
/// can be shared freely across threads. Table curves are left-continuous
/// step functions (the value at a node applies on the interval ending at
/// that node), matching a left-continuous force of interest.
class RateCurve {
public:
    RateCurve() = default;

    static RateCurve constant(double rate);

    /// a + b * c^(entry_age + t). The usual Gompertz-Makeham hazard with the
    /// entry age bound into the curve.
    static RateCurve makeham(double a, double b, double c, double entry_age);

    static RateCurve scaled(RateCurve base, double factor);
    static RateCurve shifted(RateCurve base, double offset);

    /// Step function: value values[i] applies on (times[i-1], times[i]], and
    /// values[0] at times[0]. Evaluation outside [times.front(), times.back()]
    /// is a domain error.
    static RateCurve table(std::vector<double> times, std::vector<double> values);

    /// Evaluate at time t.
    double operator()(double t) const;

    bool valid() const { return node_ != nullptr; }

private:
    struct Node;
    explicit RateCurve(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// The Danish G82M first-order mortality basis,
/// mu(x+t) = 0.0005 + 10^(5.728 - 10 + 0.038 (x+t)).
/// A convenience default only; nothing downstream assumes it.
RateCurve danish_g82m(double entry_age);

/// A pair (force of interest, force of mortality). Induces the discount and
/// survival factors below and, through the hazard, a law for the death time.
struct TechnicalBasis {
    RateCurve delta;
    RateCurve mu;
    std::string label;
};

/// Discount/survival factors at a fixed time: v = exp(-int delta),
/// p = exp(-int mu), phi = v * p.
struct Factors {
    double v = 1.0;
    double p = 1.0;
    double phi = 1.0;
};

/// Composite-Simpson approximation of the integral of `curve` over [t0, t1],
/// with panel width at most quad_step. Exact for constant curves.
double cumulative(const RateCurve& curve, double t0, double t1, double quad_step);

/// Running integral of `curve` at the mesh nodes start, start+h, ...,
/// start+panels*h, one Simpson panel per step. Increments are nonnegative
/// for nonnegative curves, so cumulative hazards stay monotone.
std::vector<double> cumulative_nodes(const RateCurve& curve, double start, std::size_t panels,
                                     double h);

/// Factors of `basis` at time t, integrating from 0.
Factors factors(const TechnicalBasis& basis, double t, double quad_step);

}  // namespace lifesurplus
