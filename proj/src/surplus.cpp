#include "lifesurplus/surplus.hpp"

#include <cmath>
#include <sstream>

#include "lifesurplus/numerics.hpp"

namespace lifesurplus {

namespace {

void check_shared_term(const ActuarialBasis& a, const ActuarialBasis& b) {
    if (std::abs(a.cashflows.term - b.cashflows.term) > 1e-9)
        throw std::domain_error("bases must share the contract term");
}

SystematicRate systematic_at(const ActuarialBasis& val, const ActuarialBasis& exp, double t,
                             double policy_value, SystematicMode mode) {
    SystematicRate r;
    const double sum_at_risk = val.cashflows.death_benefit(t) - policy_value;
    r.technical = (exp.technical.delta(t) - val.technical.delta(t)) * policy_value -
                  (exp.technical.mu(t) - val.technical.mu(t)) * sum_at_risk;
    if (mode == SystematicMode::augmented) {
        r.cashflow = (exp.cashflows.premium(t) - val.cashflows.premium(t)) -
                     exp.technical.mu(t) *
                         (exp.cashflows.death_benefit(t) - val.cashflows.death_benefit(t));
    }
    r.total = r.technical + r.cashflow;
    return r;
}

}  // namespace

SystematicRate systematic_rate(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                               const Curve& policy_value, double t, SystematicMode mode) {
    check_shared_term(valuation, experience);
    if (std::abs(policy_value.end_time() - valuation.cashflows.term) > 1e-9)
        throw std::domain_error("policy value mesh does not cover the contract term");
    const std::size_t i = policy_value.index_of(t);  // throws if t is off the mesh
    return systematic_at(valuation, experience, policy_value.time_at(i), policy_value[i], mode);
}

SurplusReport modeled_surplus(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                              double h) {
    check_shared_term(valuation, experience);
    const double term = valuation.cashflows.term;
    const std::size_t count = node_count(term, h);

    const Curve value = solve_backward(valuation, valuation.cashflows.maturity_benefit, h);
    const auto cum_delta = cumulative_nodes(experience.technical.delta, 0.0, count - 1, h);
    const auto cum_mu = cumulative_nodes(experience.technical.mu, 0.0, count - 1, h);

    SurplusReport rep;
    rep.step = h;
    rep.v0_valuation = value.values.front();
    rep.c_technical.resize(count);
    rep.c_cashflow.resize(count);
    rep.c_total.resize(count);

    std::vector<double> integrand(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = h * static_cast<double>(i);
        const SystematicRate r =
            systematic_at(valuation, experience, t, value[i], SystematicMode::augmented);
        rep.c_technical[i] = r.technical;
        rep.c_cashflow[i] = r.cashflow;
        rep.c_total[i] = r.total;
        integrand[i] = std::exp(-(cum_delta[i] + cum_mu[i])) * r.total;
    }

    rep.terminal_adjustment =
        -std::exp(-(cum_delta.back() + cum_mu.back())) *
        (experience.cashflows.maturity_benefit - valuation.cashflows.maturity_benefit);

    const auto running = cumulative_from_samples(integrand, h);
    rep.theta_discounted.resize(count);
    rep.theta.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        double td = -rep.v0_valuation + running[i];
        if (i + 1 == count) td += rep.terminal_adjustment;
        rep.theta_discounted[i] = td;
        rep.theta[i] = td * std::exp(cum_delta[i]);
    }
    return rep;
}

PremiumLoadings loading_split(const RateCurve& contractual_premium,
                              const RateCurve& valuation_premium, double pure_premium, double t) {
    PremiumLoadings out;
    out.emerging = contractual_premium(t) - valuation_premium(t);
    out.capitalized = valuation_premium(t) - pure_premium;
    return out;
}

double initial_surplus(const ActuarialBasis& valuation, double pure_premium, double h) {
    const double from_solver =
        -solve_backward(valuation, valuation.cashflows.maturity_benefit, h).values.front();

    const double term = valuation.cashflows.term;
    const std::size_t count = node_count(term, h);
    const auto cum_delta = cumulative_nodes(valuation.technical.delta, 0.0, count - 1, h);
    const auto cum_mu = cumulative_nodes(valuation.technical.mu, 0.0, count - 1, h);
    std::vector<double> integrand(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = h * static_cast<double>(i);
        integrand[i] = std::exp(-(cum_delta[i] + cum_mu[i])) *
                       (valuation.cashflows.premium(t) - pure_premium);
    }
    const double from_loadings = cumulative_from_samples(integrand, h).back();

    const double scale = std::max({1.0, std::abs(from_solver), std::abs(from_loadings)});
    if (std::abs(from_solver - from_loadings) > 1e-6 * scale) {
        std::ostringstream msg;
        msg << "initial surplus routes disagree: solver " << from_solver << " vs loadings "
            << from_loadings;
        throw consistency_error(msg.str());
    }
    return from_solver;
}

double total_surplus_epv(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                         double h) {
    return modeled_surplus(valuation, experience, h).theta_discounted.back();
}

}  // namespace lifesurplus
