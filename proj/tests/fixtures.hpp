// Contracts and bases shared across the test suites: a 20-year contract on
// a life aged 40, first-order basis (delta 0.05, G82M mortality) and the
// second-order basis scaling those forces by 1.5 and 0.8.
#pragma once

#include "lifesurplus/thiele.hpp"

namespace fixtures {

using namespace lifesurplus;

inline TechnicalBasis first_order() {
    return {RateCurve::constant(0.05), danish_g82m(40.0), "first"};
}

inline TechnicalBasis second_order() {
    return {RateCurve::scaled(RateCurve::constant(0.05), 1.5),
            RateCurve::scaled(danish_g82m(40.0), 0.8), "second"};
}

inline CashflowSpec benefits_only(double death_benefit, double maturity, double term = 20.0) {
    CashflowSpec cf;
    cf.premium = RateCurve::constant(0.0);
    cf.death_benefit = RateCurve::constant(death_benefit);
    cf.maturity_benefit = maturity;
    cf.term = term;
    return cf;
}

// Term insurance, sum assured 1, no maturity benefit.
inline CashflowSpec term_benefits() { return benefits_only(1.0, 0.0); }

// Endowment assurance, unit death and maturity benefits.
inline CashflowSpec endowment_benefits() { return benefits_only(1.0, 1.0); }

inline ActuarialBasis with_premium(const TechnicalBasis& tb, CashflowSpec cf, double level,
                                   const std::string& label) {
    cf.premium = RateCurve::constant(level);
    return ActuarialBasis{tb, std::move(cf), label};
}

// Special valuation basis: premium from the equivalence principle.
inline ActuarialBasis special_basis(const TechnicalBasis& tb, const CashflowSpec& benefits,
                                    double h, const std::string& label) {
    return with_premium(tb, benefits, equivalence_premium(tb, benefits, h), label);
}

}  // namespace fixtures
