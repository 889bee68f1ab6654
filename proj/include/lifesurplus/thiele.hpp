#pragma once

#include <optional>
#include <string>

#include "lifesurplus/curves.hpp"
#include "lifesurplus/mesh.hpp"

namespace lifesurplus {

/// The cashflow side of an actuarial basis: a premium rate, a death benefit
/// rate, and a maturity benefit paid at the term if alive. The only lump sum
/// is the maturity benefit; it enters solvers as a boundary value, never as
/// a mesh cashflow. An absent bonus rate means a non-participating contract.
struct CashflowSpec {
    RateCurve premium;
    RateCurve death_benefit;
    double maturity_benefit = 0.0;
    double term = 0.0;
    std::optional<RateCurve> bonus_rate;
};

/// A technical basis plus assumed cashflows. This pair parametrizes exactly
/// one Thiele equation dg/dt = delta g + premium - mu (death_benefit - g).
struct ActuarialBasis {
    TechnicalBasis technical;
    CashflowSpec cashflows;
    std::string label;
};

/// Backward solution of the basis' Thiele equation from g(term) = terminal,
/// on the mesh with step h. terminal is normally the maturity benefit; the
/// result is then the policy value curve V_t.
Curve solve_backward(const ActuarialBasis& basis, double terminal, double h);

/// Forward solution from g(0) = initial; with initial = 0 the result is the
/// accumulation curve W_t.
Curve solve_forward(const ActuarialBasis& basis, double initial, double h);

/// The level premium rate giving V_0 = 0 for the benefits in `benefits`
/// (its premium field is ignored) under technical basis `tb`. V_0 is affine
/// in the level rate, so two solves and a linear solve are exact; a bisection
/// fallback guards against any detected departure from affinity. A contract
/// with no benefits prices to 0.
double equivalence_premium(const TechnicalBasis& tb, const CashflowSpec& benefits, double h);

/// EPV at time t of the future benefit cashflows of `basis`, per policy then
/// in force: int_t^n (phi_r/phi_t) mu_r S_r dr + (phi_n/phi_t) * maturity.
double passivum(const ActuarialBasis& basis, double t, double h);

/// EPV at time t of the future premium cashflows of `basis`:
/// int_t^n (phi_r/phi_t) tau_r dr.
double activum(const ActuarialBasis& basis, double t, double h);

/// passivum / activum sampled at every mesh node on [0, term].
Curve passivum_curve(const ActuarialBasis& basis, double h);
Curve activum_curve(const ActuarialBasis& basis, double h);

}  // namespace lifesurplus
