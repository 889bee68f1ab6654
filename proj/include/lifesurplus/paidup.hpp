#pragma once

#include "lifesurplus/thiele.hpp"

namespace lifesurplus {

/// Benefit reduction factor kappa(t) = V_t / k(t) when the policy is made
/// paid-up at t: the reserve funds pro-rata reduced, premium-free benefits.
/// t must be a mesh node; throws on a degenerate contract (k(t) <= 0).
double paidup_factor(const ActuarialBasis& valuation, double t, double h);

enum class PaidUpOrder { first, second };

/// Paid-up policy value at r >= t for a policy made paid-up at t.
/// first:  kappa(t) k_L(r), the value under the valuation basis.
/// second: kappa(t) k_M(r), the EPV under the experience technical basis of
///         the same frozen benefits (the valuation basis' benefit shape).
double paidup_value(const ActuarialBasis& valuation, const ActuarialBasis& experience, double t,
                    double r, PaidUpOrder order, double h);

/// The full paid-up picture at one conversion time.
struct PaidUpState {
    double t = 0.0;
    double kappa = 0.0;
    Curve first_order_values;   // on [t, n]
    Curve second_order_values;  // on [t, n]
};

PaidUpState paidup_state(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                         double t, double h);

/// Split of the pure premium rate at t into the part buying growth of the
/// paid-up benefit and the part meeting mortality cost above it; the
/// residual is the finite-difference defect of the identity
/// pi = (dkappa/dt) k(t) + mu (S - kappa S). It vanishes (up to O(h^2))
/// when the valuation premium is the pure premium.
struct PaidUpPremiumSplit {
    double growth = 0.0;
    double mortality = 0.0;
    double residual = 0.0;
};

PaidUpPremiumSplit paidup_premium_decomposition(const ActuarialBasis& valuation, double t,
                                                double h);

/// Premium rate that sustains the paid-up benefit trajectory under the
/// experience basis, (dkappa/dt) k_M(t) + mu_M (S - kappa S), and the
/// balance pi_L - rate that emerges as expected surplus.
struct SecondOrderPaidUpPremium {
    double rate = 0.0;
    double loading = 0.0;
};

SecondOrderPaidUpPremium second_order_paidup_premium(const ActuarialBasis& valuation,
                                                     const ActuarialBasis& experience, double t,
                                                     double h);

}  // namespace lifesurplus
