#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lifesurplus/thiele.hpp"

namespace lifesurplus {

/// SplitMix64 (Steele, Lea & Flood): a counter-based 64-bit generator.
/// State advances by a fixed gamma, output is a bijective scramble of the
/// counter, so streams never share state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard exponential.
    double exponential();

private:
    std::uint64_t state_;
};

/// Stream seed for one path: seed xor path index, scrambled once so that
/// adjacent indices land far apart in state space.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// One sampled life history: the death time in (0, term], or absent when
/// the life survives to the term.
struct Scenario {
    std::optional<double> death_time;
    std::uint64_t seed = 0;
};

/// Inverse-transform sampler for the death time under a hazard curve:
/// draws E ~ Exp(1) and inverts the cumulative hazard on the mesh.
class LifetimeSampler {
public:
    LifetimeSampler(const RateCurve& mu, double term, double h);

    Scenario sample(std::uint64_t stream_seed) const;

    /// Death time given the exponential draw directly, conditional on being
    /// alive at time `from`; absent when the draw outlives the term.
    std::optional<double> invert(double exponential_draw, double from) const;

    double term() const { return term_; }

private:
    double term_;
    double step_;
    std::vector<double> cumulative_hazard_;
};

Scenario sample_lifetime(const RateCurve& mu, double term, std::uint64_t seed, double h);

/// One path of the discounted stochastic surplus and its martingale part.
struct PathResult {
    /// v_M(t) E_L[X(t)|F_t] at every node; constant from the death node on.
    std::vector<double> theta_discounted;
    /// Increment over each mesh panel of -int v_M R_L dM_M; index 0 is 0.
    std::vector<double> martingale_increment;
    /// int_0^n v_M dB_M realized over the whole path.
    double discounted_cashflow_total = 0.0;
    std::optional<double> death_time;
};

/// Evaluate one scenario against valuation policy values `policy_value`
/// (the backward solution under `valuation`) with cashflows and discounting
/// generated by `experience`.
PathResult path_surplus(const Scenario& scenario, const ActuarialBasis& valuation,
                        const ActuarialBasis& experience, const Curve& policy_value, double h);

struct Interval {
    double a = 0.0;
    double b = 0.0;
};

struct MonteCarloSettings {
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> checkpoints;
    std::vector<Interval> intervals;
    double h = 0.005;
};

struct CheckpointStat {
    double t = 0.0;
    std::size_t alive = 0;
    bool skipped = false;
    /// Nested-simulation estimate (under the valuation technical basis) of
    /// the EPV at t of future benefits less premiums, per policy in force.
    double future_outgo_mean = 0.0;
    double future_outgo_se = 0.0;
    /// Mean discounted stochastic surplus at t, with its standard error.
    double theta_mean = 0.0;
    double theta_se = 0.0;
};

struct IntervalCovariance {
    Interval first;
    Interval second;
    double covariance = 0.0;
    double se = 0.0;
};

struct MCReport {
    std::size_t n_paths = 0;
    double step = 0.0;
    double term = 0.0;
    std::vector<double> mean_theta_discounted;
    std::vector<double> se_theta_discounted;
    std::vector<CheckpointStat> checkpoints;
    std::vector<IntervalCovariance> covariances;
    /// Sample mean/se of the realized martingale integral over [0, n].
    double martingale_mean = 0.0;
    double martingale_se = 0.0;
};

/// Monte Carlo over death scenarios drawn under the experience basis.
/// Deterministic: the same settings produce bit-identical reports.
MCReport monte_carlo(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                     const MonteCarloSettings& settings);

}  // namespace lifesurplus
