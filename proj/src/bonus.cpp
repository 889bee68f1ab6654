#include "lifesurplus/bonus.hpp"

#include <cmath>

#include "lifesurplus/numerics.hpp"

namespace lifesurplus {

double bonus_accum(const RateCurve& beta, double t, double h) {
    return std::exp(cumulative(beta, 0.0, t, h));
}

namespace {

// Valuation-side quantities sampled on the half mesh (nodes and midpoints),
// so the RK4 stages and Simpson panels read exact samples.
struct BonusTables {
    double h = 0.0;
    double term = 0.0;
    std::size_t nodes = 0;  // full mesh node count

    std::vector<double> delta, mu, premium, benefit_accum;  // half mesh
    std::vector<double> accum_anticipated;                  // half mesh, exp(int beta_L)
    std::vector<double> accum_declared;                     // half mesh, exp(int beta_M)

    BonusTables(const ActuarialBasis& valuation, const BonusPair& bonus, double mesh) {
        h = mesh;
        term = valuation.cashflows.term;
        nodes = node_count(term, h);
        const std::size_t half = 2 * (nodes - 1);

        const auto cum_l = cumulative_nodes(bonus.anticipated, 0.0, half, 0.5 * h);
        const auto cum_m = cumulative_nodes(bonus.declared, 0.0, half, 0.5 * h);
        delta.resize(half + 1);
        mu.resize(half + 1);
        premium.resize(half + 1);
        benefit_accum.resize(half + 1);
        accum_anticipated.resize(half + 1);
        accum_declared.resize(half + 1);
        for (std::size_t j = 0; j <= half; ++j) {
            const double r = 0.5 * h * static_cast<double>(j);
            if (bonus.anticipated(r) < 0.0 || bonus.declared(r) < 0.0)
                throw std::domain_error("force of bonus must be nonnegative");
            delta[j] = valuation.technical.delta(r);
            mu[j] = valuation.technical.mu(r);
            premium[j] = valuation.cashflows.premium(r);
            accum_anticipated[j] = std::exp(cum_l[j]);
            accum_declared[j] = std::exp(cum_m[j]);
            benefit_accum[j] = valuation.cashflows.death_benefit(r) * accum_anticipated[j];
        }
    }

    // accum_declared(t) / accum_anticipated(t) at full-mesh node i.
    double declared_over_anticipated(std::size_t i) const {
        return accum_declared[2 * i] / accum_anticipated[2 * i];
    }

    // Backward scalar solve of the bonus Thiele equation from n down to
    // full-mesh node `stop`; returns values for nodes stop..last when
    // `curve_out` is given, else just the value at `stop`.
    double solve_diagonal(double terminal_benefit, std::size_t stop, double factor,
                          std::vector<double>* curve_out) const {
        const std::size_t last = nodes - 1;
        double g = terminal_benefit * accum_anticipated[2 * last] * factor;
        if (curve_out) {
            curve_out->resize(last - stop + 1);
            curve_out->back() = g;
        }
        const auto deriv = [&](std::size_t j, double value) {
            return delta[j] * value + premium[j] - mu[j] * (factor * benefit_accum[j] - value);
        };
        for (std::size_t i = last; i > stop; --i) {
            const std::size_t j = 2 * i;  // half-mesh index of node i
            const double k1 = deriv(j, g);
            const double k2 = deriv(j - 1, g - 0.5 * h * k1);
            const double k3 = deriv(j - 1, g - 0.5 * h * k2);
            const double k4 = deriv(j - 2, g - h * k3);
            g -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!std::isfinite(g))
                throw numerical_error("bonus policy value solve produced a non-finite value");
            if (curve_out) (*curve_out)[i - 1 - stop] = g;
        }
        return g;
    }
};

}  // namespace

Curve bonus_policy_value(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                         const BonusPair& bonus, double t, double h) {
    (void)experience;  // the experience basis enters only through declared bonus
    const BonusTables tables(valuation, bonus, h);
    const std::size_t at = node_index(t, tables.term, h);

    Curve out;
    out.step = h;
    out.start = tables.h * static_cast<double>(at);
    tables.solve_diagonal(valuation.cashflows.maturity_benefit, at,
                          tables.declared_over_anticipated(at), &out.values);
    return out;
}

double bonus_passivum(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                      const BonusPair& bonus, double t, double h) {
    (void)experience;
    const BonusTables tables(valuation, bonus, h);
    const std::size_t at = node_index(t, tables.term, h);
    const std::size_t last = tables.nodes - 1;

    // One Simpson panel per step of phi-discounted inflated benefits.
    double sum = 0.0;
    double exponent = 0.0;  // int_t^r (delta + mu)
    for (std::size_t i = at; i < last; ++i) {
        const std::size_t j = 2 * i;
        const auto weight = [&](std::size_t jj) {
            return tables.mu[jj] * tables.benefit_accum[jj];
        };
        const double force_a = tables.delta[j] + tables.mu[j];
        const double force_m = tables.delta[j + 1] + tables.mu[j + 1];
        const double force_b = tables.delta[j + 2] + tables.mu[j + 2];
        // Half-panel Simpson needs quarter points; the local quadratic
        // through the three half-mesh samples supplies them.
        const double force_q1 = 0.375 * force_a + 0.75 * force_m - 0.125 * force_b;
        const double force_q3 = -0.125 * force_a + 0.75 * force_m + 0.375 * force_b;
        const double exp_m = exponent + h / 12.0 * (force_a + 4.0 * force_q1 + force_m);
        const double exp_b = exp_m + h / 12.0 * (force_m + 4.0 * force_q3 + force_b);
        sum += h / 6.0 * (weight(j) * std::exp(-exponent) + 4.0 * weight(j + 1) * std::exp(-exp_m) +
                          weight(j + 2) * std::exp(-exp_b));
        exponent = exp_b;
    }
    const double maturity = valuation.cashflows.maturity_benefit *
                            tables.accum_anticipated[2 * last] * std::exp(-exponent);
    return tables.declared_over_anticipated(at) * (sum + maturity);
}

BonusSystematicRate bonus_systematic(const ActuarialBasis& valuation,
                                     const ActuarialBasis& experience, const BonusPair& bonus,
                                     double t, double h) {
    const double value_diag =
        bonus_policy_value(valuation, experience, bonus, t, h).values.front();
    const double benefits_value = bonus_passivum(valuation, experience, bonus, t, h);
    const double declared_accum = bonus_accum(bonus.declared, t, h);

    BonusSystematicRate r;
    const double sum_at_risk = valuation.cashflows.death_benefit(t) * declared_accum - value_diag;
    r.technical = (experience.technical.delta(t) - valuation.technical.delta(t)) * value_diag -
                  (experience.technical.mu(t) - valuation.technical.mu(t)) * sum_at_risk;
    r.cashflow = (experience.cashflows.premium(t) - valuation.cashflows.premium(t)) -
                 experience.technical.mu(t) *
                     (experience.cashflows.death_benefit(t) -
                      valuation.cashflows.death_benefit(t)) *
                     declared_accum;
    r.cost_of_bonus = (bonus.declared(t) - bonus.anticipated(t)) * benefits_value;
    r.total = r.technical + r.cashflow - r.cost_of_bonus;
    return r;
}

BonusSurplusReport bonus_modeled_surplus(const ActuarialBasis& valuation,
                                         const ActuarialBasis& experience, const BonusPair& bonus,
                                         double h) {
    if (std::abs(valuation.cashflows.term - experience.cashflows.term) > 1e-9)
        throw std::domain_error("bases must share the contract term");
    const BonusTables tables(valuation, bonus, h);
    const std::size_t count = tables.nodes;
    const std::size_t last = count - 1;

    // Benefits-only values at every node from running integrals.
    const auto cum_delta_l = cumulative_nodes(valuation.technical.delta, 0.0, last, h);
    const auto cum_mu_l = cumulative_nodes(valuation.technical.mu, 0.0, last, h);
    std::vector<double> phi_l(count), weighted(count);
    for (std::size_t i = 0; i < count; ++i) {
        phi_l[i] = std::exp(-(cum_delta_l[i] + cum_mu_l[i]));
        weighted[i] = phi_l[i] * tables.mu[2 * i] * tables.benefit_accum[2 * i];
    }
    const auto running_benefit = cumulative_from_samples(weighted, h);
    const double maturity_term = phi_l.back() * valuation.cashflows.maturity_benefit *
                                 tables.accum_anticipated[2 * last];

    BonusSurplusReport rep;
    rep.base.step = h;
    rep.value_diagonal.step = h;
    rep.value_diagonal.values.resize(count);
    rep.benefits_value.step = h;
    rep.benefits_value.values.resize(count);
    rep.base.c_technical.resize(count);
    rep.base.c_cashflow.resize(count);
    rep.base.c_total.resize(count);
    rep.cost_of_bonus.resize(count);

    const auto cum_delta_m = cumulative_nodes(experience.technical.delta, 0.0, last, h);
    const auto cum_mu_m = cumulative_nodes(experience.technical.mu, 0.0, last, h);

    std::vector<double> integrand(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = h * static_cast<double>(i);
        const double factor = tables.declared_over_anticipated(i);
        const double value_diag =
            tables.solve_diagonal(valuation.cashflows.maturity_benefit, i, factor, nullptr);
        const double benefits_value =
            factor * ((running_benefit.back() - running_benefit[i] + maturity_term) / phi_l[i]);
        rep.value_diagonal.values[i] = value_diag;
        rep.benefits_value.values[i] = benefits_value;

        const double declared_accum = tables.accum_declared[2 * i];
        const double sum_at_risk =
            valuation.cashflows.death_benefit(t) * declared_accum - value_diag;
        const double technical =
            (experience.technical.delta(t) - valuation.technical.delta(t)) * value_diag -
            (experience.technical.mu(t) - valuation.technical.mu(t)) * sum_at_risk;
        const double cashflow =
            (experience.cashflows.premium(t) - valuation.cashflows.premium(t)) -
            experience.technical.mu(t) *
                (experience.cashflows.death_benefit(t) - valuation.cashflows.death_benefit(t)) *
                declared_accum;
        const double cost =
            (bonus.declared(t) - bonus.anticipated(t)) * benefits_value;
        rep.base.c_technical[i] = technical;
        rep.base.c_cashflow[i] = cashflow;
        rep.cost_of_bonus[i] = cost;
        rep.base.c_total[i] = technical + cashflow - cost;
        integrand[i] = std::exp(-(cum_delta_m[i] + cum_mu_m[i])) * rep.base.c_total[i];
    }

    rep.base.v0_valuation = rep.value_diagonal.values.front();
    rep.base.terminal_adjustment =
        -std::exp(-(cum_delta_m.back() + cum_mu_m.back())) *
        (experience.cashflows.maturity_benefit - valuation.cashflows.maturity_benefit) *
        tables.accum_declared[2 * last];

    const auto running = cumulative_from_samples(integrand, h);
    rep.base.theta_discounted.resize(count);
    rep.base.theta.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        double td = -rep.base.v0_valuation + running[i];
        if (i == last) td += rep.base.terminal_adjustment;
        rep.base.theta_discounted[i] = td;
        rep.base.theta[i] = td * std::exp(cum_delta_m[i]);
    }
    return rep;
}

}  // namespace lifesurplus
