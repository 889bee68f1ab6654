#include "lifesurplus/paidup.hpp"

#include <cmath>

#include "lifesurplus/numerics.hpp"

namespace lifesurplus {

namespace {

// Experience technical basis valuing the valuation basis' benefit shape:
// the benefits frozen at conversion keep their contractual shape.
ActuarialBasis frozen_benefit_basis(const ActuarialBasis& valuation,
                                    const ActuarialBasis& experience) {
    ActuarialBasis mixed = experience;
    mixed.cashflows = valuation.cashflows;
    return mixed;
}

double kappa_from(const Curve& value, const Curve& benefits_value, std::size_t i) {
    const double k = benefits_value[i];
    if (!(k > 0.0)) throw std::domain_error("paid-up factor undefined: no future benefits");
    return value[i] / k;
}

}  // namespace

double paidup_factor(const ActuarialBasis& valuation, double t, double h) {
    const Curve value = solve_backward(valuation, valuation.cashflows.maturity_benefit, h);
    const Curve k = passivum_curve(valuation, h);
    return kappa_from(value, k, value.index_of(t));
}

double paidup_value(const ActuarialBasis& valuation, const ActuarialBasis& experience, double t,
                    double r, PaidUpOrder order, double h) {
    if (r < t - 1e-12) throw std::domain_error("paid-up value queried before the conversion time");
    const double kappa = paidup_factor(valuation, t, h);
    const ActuarialBasis& basis =
        order == PaidUpOrder::first ? valuation : frozen_benefit_basis(valuation, experience);
    return kappa * passivum(basis, r, h);
}

PaidUpState paidup_state(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                         double t, double h) {
    const Curve value = solve_backward(valuation, valuation.cashflows.maturity_benefit, h);
    const Curve k_val = passivum_curve(valuation, h);
    const Curve k_exp = passivum_curve(frozen_benefit_basis(valuation, experience), h);
    const std::size_t at = value.index_of(t);

    PaidUpState st;
    st.t = value.time_at(at);
    st.kappa = kappa_from(value, k_val, at);

    const std::size_t tail = value.size() - at;
    st.first_order_values.step = h;
    st.first_order_values.start = st.t;
    st.first_order_values.values.resize(tail);
    st.second_order_values = st.first_order_values;
    for (std::size_t j = 0; j < tail; ++j) {
        st.first_order_values.values[j] = st.kappa * k_val[at + j];
        st.second_order_values.values[j] = st.kappa * k_exp[at + j];
    }
    return st;
}

namespace {

// dkappa/dt by finite differences on the mesh: central in the interior,
// one-sided at the ends.
double kappa_derivative(const Curve& value, const Curve& k, std::size_t i, double h) {
    const std::size_t last = value.size() - 1;
    if (i > 0 && i < last)
        return (kappa_from(value, k, i + 1) - kappa_from(value, k, i - 1)) / (2.0 * h);
    if (i == 0) return (kappa_from(value, k, 1) - kappa_from(value, k, 0)) / h;
    return (kappa_from(value, k, last) - kappa_from(value, k, last - 1)) / h;
}

}  // namespace

PaidUpPremiumSplit paidup_premium_decomposition(const ActuarialBasis& valuation, double t,
                                                double h) {
    const Curve value = solve_backward(valuation, valuation.cashflows.maturity_benefit, h);
    const Curve k = passivum_curve(valuation, h);
    const std::size_t i = value.index_of(t);
    const double kappa = kappa_from(value, k, i);
    const double pure = equivalence_premium(valuation.technical, valuation.cashflows, h);
    const double benefit = valuation.cashflows.death_benefit(t);

    PaidUpPremiumSplit out;
    out.growth = kappa_derivative(value, k, i, h) * k[i];
    out.mortality = valuation.technical.mu(t) * (benefit - kappa * benefit);
    out.residual = pure - out.growth - out.mortality;
    return out;
}

SecondOrderPaidUpPremium second_order_paidup_premium(const ActuarialBasis& valuation,
                                                     const ActuarialBasis& experience, double t,
                                                     double h) {
    const Curve value = solve_backward(valuation, valuation.cashflows.maturity_benefit, h);
    const Curve k_val = passivum_curve(valuation, h);
    const Curve k_exp = passivum_curve(frozen_benefit_basis(valuation, experience), h);
    const std::size_t i = value.index_of(t);
    const double kappa = kappa_from(value, k_val, i);
    const double dkappa = kappa_derivative(value, k_val, i, h);
    const double benefit = valuation.cashflows.death_benefit(t);
    const double pure = equivalence_premium(valuation.technical, valuation.cashflows, h);

    SecondOrderPaidUpPremium out;
    out.rate = dkappa * k_exp[i] + experience.technical.mu(t) * (benefit - kappa * benefit);
    out.loading = pure - out.rate;
    return out;
}

}  // namespace lifesurplus
