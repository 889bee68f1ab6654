#include "lifesurplus/thiele.hpp"

#include <algorithm>
#include <cmath>

#include "lifesurplus/numerics.hpp"

namespace lifesurplus {

namespace {

// dg/dt for the Thiele equation of `basis`.
auto thiele_rhs(const ActuarialBasis& basis) {
    return [&basis](double t, double g) {
        return basis.technical.delta(t) * g + basis.cashflows.premium(t) -
               basis.technical.mu(t) * (basis.cashflows.death_benefit(t) - g);
    };
}

// Negative beyond rounding noise at a zero boundary value.
bool materially_negative(const std::vector<double>& v) {
    double scale = 1.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    return std::any_of(v.begin(), v.end(), [&](double x) { return x < -1e-9 * scale; });
}

}  // namespace

Curve solve_backward(const ActuarialBasis& basis, double terminal, double h) {
    const std::size_t steps = node_count(basis.cashflows.term, h) - 1;
    Curve out = rk4_backward(thiele_rhs(basis), 0.0, terminal, steps, h);
    out.warn_negative = materially_negative(out.values) || basis.cashflows.premium(0.0) < 0.0;
    return out;
}

Curve solve_forward(const ActuarialBasis& basis, double initial, double h) {
    const std::size_t steps = node_count(basis.cashflows.term, h) - 1;
    Curve out = rk4_forward(thiele_rhs(basis), 0.0, initial, steps, h);
    out.warn_negative = materially_negative(out.values) || basis.cashflows.premium(0.0) < 0.0;
    return out;
}

double equivalence_premium(const TechnicalBasis& tb, const CashflowSpec& benefits, double h) {
    ActuarialBasis trial{tb, benefits, tb.label};
    const auto value_at_zero = [&](double level) {
        trial.cashflows.premium = RateCurve::constant(level);
        return solve_backward(trial, benefits.maturity_benefit, h).values.front();
    };

    const double v0 = value_at_zero(0.0);
    const double v1 = value_at_zero(1.0);
    const double slope = v1 - v0;  // minus the premium annuity factor, always < 0
    if (v0 == 0.0) return 0.0;
    if (slope == 0.0) throw numerical_error("degenerate contract: premium has no effect on V_0");

    double level = -v0 / slope;
    const double scale = std::max({1.0, std::abs(benefits.maturity_benefit), std::abs(v0)});
    if (std::abs(value_at_zero(level)) <= 1e-12 * scale) return level;

    // Affinity did not hold to rounding; V_0 is still monotone decreasing in
    // the level rate, so bracket and bisect.
    double lo = level, hi = level;
    double width = std::max(1.0, std::abs(level));
    while (value_at_zero(lo) < 0.0) lo -= width, width *= 2.0;
    width = std::max(1.0, std::abs(level));
    while (value_at_zero(hi) > 0.0) hi += width, width *= 2.0;
    for (int i = 0; i < 200; ++i) {
        level = 0.5 * (lo + hi);
        const double r = value_at_zero(level);
        if (std::abs(r) <= 1e-12 * scale) break;
        (r > 0.0 ? lo : hi) = level;
    }
    return level;
}

namespace {

// Integral over [t, n] of weight(r) * exp(-int_t^r (delta + mu)) plus the
// equally discounted terminal value, one Simpson panel per mesh step. The
// exponent advances by half-panel Simpson rules so panel midpoints carry
// discount factors of the same order as the panel quadrature.
template <typename W>
double discounted_integral(const ActuarialBasis& basis, double t, double h, W&& weight,
                           double terminal) {
    const double n = basis.cashflows.term;
    if (t < 0.0 || t > n + 1e-9 * n) throw std::domain_error("time outside contract term");
    if (t >= n - 1e-12 * n) return terminal;

    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((n - t) / h - 1e-9)));
    const double w = (n - t) / static_cast<double>(panels);
    const auto force = [&](double r) { return basis.technical.delta(r) + basis.technical.mu(r); };

    double sum = 0.0;
    double exp_a = 0.0;   // int_t^a (delta + mu)
    double disc_a = 1.0;  // exp(-exp_a)
    double fa = force(t);
    double ga = weight(t);
    for (std::size_t i = 0; i < panels; ++i) {
        const double a = t + w * static_cast<double>(i);
        const double b = (i + 1 == panels) ? n : a + w;
        const double m = 0.5 * (a + b);
        const double fm = force(m);
        const double fb = force(b);
        const double exp_m = exp_a + (m - a) / 6.0 * (fa + 4.0 * force(0.5 * (a + m)) + fm);
        const double exp_b = exp_m + (b - m) / 6.0 * (fm + 4.0 * force(0.5 * (m + b)) + fb);
        const double disc_m = std::exp(-exp_m);
        const double disc_b = std::exp(-exp_b);
        const double gb = weight(b);
        sum += (b - a) / 6.0 * (ga * disc_a + 4.0 * weight(m) * disc_m + gb * disc_b);
        ga = gb;
        exp_a = exp_b;
        disc_a = disc_b;
        fa = fb;
    }
    return sum + disc_a * terminal;
}

}  // namespace

double passivum(const ActuarialBasis& basis, double t, double h) {
    const auto& cf = basis.cashflows;
    return discounted_integral(
        basis, t, h, [&](double r) { return basis.technical.mu(r) * cf.death_benefit(r); },
        cf.maturity_benefit);
}

double activum(const ActuarialBasis& basis, double t, double h) {
    return discounted_integral(
        basis, t, h, [&](double r) { return basis.cashflows.premium(r); }, 0.0);
}

namespace {

// phi at every node of the mesh [0, term].
std::vector<double> phi_nodes(const TechnicalBasis& tb, double term, double h) {
    const std::size_t steps = node_count(term, h) - 1;
    const auto cum_delta = cumulative_nodes(tb.delta, 0.0, steps, h);
    const auto cum_mu = cumulative_nodes(tb.mu, 0.0, steps, h);
    std::vector<double> phi(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) phi[i] = std::exp(-(cum_delta[i] + cum_mu[i]));
    return phi;
}

template <typename W>
Curve discounted_integral_curve(const ActuarialBasis& basis, double h, W&& weight,
                                double terminal) {
    const double term = basis.cashflows.term;
    const auto phi = phi_nodes(basis.technical, term, h);
    const std::size_t count = phi.size();
    std::vector<double> integrand(count);
    for (std::size_t i = 0; i < count; ++i)
        integrand[i] = phi[i] * weight(h * static_cast<double>(i));
    const auto running = cumulative_from_samples(integrand, h);
    Curve out;
    out.step = h;
    out.values.resize(count);
    const double tail = phi.back() * terminal;
    for (std::size_t i = 0; i < count; ++i)
        out.values[i] = (running.back() - running[i] + tail) / phi[i];
    return out;
}

}  // namespace

Curve passivum_curve(const ActuarialBasis& basis, double h) {
    const auto& cf = basis.cashflows;
    return discounted_integral_curve(
        basis, h, [&](double r) { return basis.technical.mu(r) * cf.death_benefit(r); },
        cf.maturity_benefit);
}

Curve activum_curve(const ActuarialBasis& basis, double h) {
    return discounted_integral_curve(
        basis, h, [&](double r) { return basis.cashflows.premium(r); }, 0.0);
}

}  // namespace lifesurplus
