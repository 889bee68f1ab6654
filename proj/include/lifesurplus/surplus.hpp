#pragma once

#include <vector>

#include "lifesurplus/thiele.hpp"

namespace lifesurplus {

/// Per-annum drift of surplus at one instant, split into the part driven by
/// the gap between the technical bases and the part driven by the gap
/// between the assumed cashflows (valuation premium and benefit loadings).
struct SystematicRate {
    double technical = 0.0;
    double cashflow = 0.0;
    double total = 0.0;
};

enum class SystematicMode { plain, augmented };

/// Systematic surplus rate at mesh node t of `policy_value`.
///   technical = (delta_M - delta_L) V_t - (mu_M - mu_L)(S_L - V_t)
///   cashflow  = (tau_M - tau_L) - mu_M (S_M - S_L)      (augmented only)
/// `policy_value` must be the backward solution under `valuation`.
SystematicRate systematic_rate(const ActuarialBasis& valuation,
                               const ActuarialBasis& experience, const Curve& policy_value,
                               double t, SystematicMode mode);

/// Deterministic evolution of the modeled surplus of `valuation` against
/// `experience`, per node of the shared mesh.
struct SurplusReport {
    double step = 0.0;
    std::vector<double> c_technical;
    std::vector<double> c_cashflow;
    std::vector<double> c_total;
    std::vector<double> theta;             // undiscounted, theta_discounted / v_M
    std::vector<double> theta_discounted;  // -V0_L + int_0^t phi_M c_total
    double v0_valuation = 0.0;
    // -phi_M(n) (maturity_M - maturity_L), applied only at the last node.
    double terminal_adjustment = 0.0;
};

SurplusReport modeled_surplus(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                              double h);

/// Split of the pure premium loading at time t. `emerging` falls into
/// surplus as the premium is received; `capitalized` was capitalized into
/// surplus at outset.
struct PremiumLoadings {
    double emerging = 0.0;     // contractual - valuation premium
    double capitalized = 0.0;  // valuation - pure premium
};

PremiumLoadings loading_split(const RateCurve& contractual_premium,
                              const RateCurve& valuation_premium, double pure_premium, double t);

/// Initial surplus -V_0 of `valuation`, computed both from the backward
/// solve and from the loading integral int phi_L (tau_L - pure_premium);
/// throws consistency_error if the two routes disagree beyond 1e-6 relative.
double initial_surplus(const ActuarialBasis& valuation, double pure_premium, double h);

/// EPV under the experience basis of the total surplus over the whole term,
/// including the terminal benefit adjustment. Independent of the valuation
/// basis.
double total_surplus_epv(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                         double h);

}  // namespace lifesurplus
