#pragma once

#include "lifesurplus/surplus.hpp"

namespace lifesurplus {

/// Forces of compound reversionary bonus: the rate the valuation basis
/// anticipates for the future, and the rate the experience actually
/// declares. Both must be nonnegative (bonus, once declared, never
/// reverses). Zero rates mean a non-participating contract.
struct BonusPair {
    RateCurve anticipated;  // valuation-side force of bonus
    RateCurve declared;     // experience-side force of bonus
};

/// Bonus accumulation factor exp(int_0^t beta); exactly 1 at t = 0.
double bonus_accum(const RateCurve& beta, double t, double h);

/// Policy value curve on [t, n] under the valuation basis at conversion
/// time t: declared bonus is factual up to t, anticipated thereafter, so
/// the assumed death benefit at r >= t is
/// S_r * accum_declared(t) * exp(int_t^r anticipated). t must be a node.
Curve bonus_policy_value(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                         const BonusPair& bonus, double t, double h);

/// EPV at t of the bonus-inflated future benefits alone (no premiums).
double bonus_passivum(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                      const BonusPair& bonus, double t, double h);

/// Systematic surplus rate allowing for bonus. cost_of_bonus is the rate
/// (declared - anticipated) * bonus_passivum; it is subtracted in total, so
/// declaring more bonus than anticipated drags the surplus down.
struct BonusSystematicRate {
    double technical = 0.0;
    double cashflow = 0.0;
    double cost_of_bonus = 0.0;
    double total = 0.0;  // technical + cashflow - cost_of_bonus
};

BonusSystematicRate bonus_systematic(const ActuarialBasis& valuation,
                                     const ActuarialBasis& experience, const BonusPair& bonus,
                                     double t, double h);

/// Modeled surplus when the valuation basis is re-struck continuously to
/// recognize declared bonus. base.c_cashflow holds the cashflow component
/// alone; the cost-of-bonus rate is kept separately.
struct BonusSurplusReport {
    SurplusReport base;
    std::vector<double> cost_of_bonus;
    Curve value_diagonal;  // V at t of the basis re-struck at t, per node
    Curve benefits_value;  // bonus_passivum at every node
};

BonusSurplusReport bonus_modeled_surplus(const ActuarialBasis& valuation,
                                         const ActuarialBasis& experience, const BonusPair& bonus,
                                         double h);

}  // namespace lifesurplus
