#include "lifesurplus/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "lifesurplus/numerics.hpp"

namespace lifesurplus {

double SplitMix64::exponential() { return -std::log1p(-uniform01()); }

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(seed ^ index).next();
}

LifetimeSampler::LifetimeSampler(const RateCurve& mu, double term, double h)
    : term_(term), step_(h) {
    const std::size_t steps = node_count(term, h) - 1;
    for (std::size_t i = 0; i <= steps; ++i)
        if (mu(h * static_cast<double>(i)) < 0.0)
            throw std::domain_error("hazard curve is negative on the mesh");
    cumulative_hazard_ = cumulative_nodes(mu, 0.0, steps, h);
}

std::optional<double> LifetimeSampler::invert(double exponential_draw, double from) const {
    const auto& H = cumulative_hazard_;
    const std::size_t from_idx =
        static_cast<std::size_t>(std::round(from / step_));
    const double target = H[from_idx] + exponential_draw;
    if (target >= H.back()) return std::nullopt;
    const auto it = std::upper_bound(H.begin() + static_cast<std::ptrdiff_t>(from_idx), H.end(),
                                     target);
    const std::size_t k = static_cast<std::size_t>(it - H.begin());  // first node with H > target
    const double rise = H[k] - H[k - 1];
    const double frac = rise > 0.0 ? (target - H[k - 1]) / rise : 1.0;
    const double t = step_ * (static_cast<double>(k - 1) + frac);
    return std::min(std::max(t, from > 0.0 ? from : std::nextafter(0.0, 1.0)), term_);
}

Scenario LifetimeSampler::sample(std::uint64_t stream_seed) const {
    SplitMix64 rng(stream_seed);
    Scenario sc;
    sc.seed = stream_seed;
    sc.death_time = invert(rng.exponential(), 0.0);
    return sc;
}

Scenario sample_lifetime(const RateCurve& mu, double term, std::uint64_t seed, double h) {
    return LifetimeSampler(mu, term, h).sample(seed);
}

namespace {

double lerp_nodes(const std::vector<double>& nodes, double t, double h) {
    const double x = t / h;
    const auto k = std::min(static_cast<std::size_t>(x), nodes.size() - 2);
    const double frac = x - static_cast<double>(k);
    return nodes[k] + frac * (nodes[k + 1] - nodes[k]);
}

// Everything deterministic a path evaluation needs, precomputed on the mesh.
struct SimContext {
    const ActuarialBasis* valuation = nullptr;
    const ActuarialBasis* experience = nullptr;
    const Curve* policy_value = nullptr;
    double h = 0.0;
    double term = 0.0;
    std::size_t count = 0;

    std::vector<double> cum_delta;    // int_0^t delta_M
    std::vector<double> v;            // exp(-cum_delta)
    std::vector<double> vtau;         // v_M * tau_M at nodes
    std::vector<double> premium;      // int_0^t v_M tau_M
    std::vector<double> v_value;      // v_M * V_L at nodes
    std::vector<double> comp_rate;    // v_M (S_L - V_L) mu_M at nodes
    std::vector<double> compensator;  // running integral of comp_rate
    double alive_terminal = 0.0;      // theta at n for a surviving path

    SimContext(const ActuarialBasis& val, const ActuarialBasis& exp, const Curve& value,
               double mesh) {
        valuation = &val;
        experience = &exp;
        policy_value = &value;
        h = mesh;
        term = val.cashflows.term;
        if (std::abs(exp.cashflows.term - term) > 1e-9)
            throw std::domain_error("bases must share the contract term");
        count = node_count(term, h);
        if (value.size() != count || std::abs(value.step - h) > 1e-12)
            throw std::domain_error("policy value curve does not match the mesh");

        cum_delta = cumulative_nodes(exp.technical.delta, 0.0, count - 1, h);
        v.resize(count);
        vtau.resize(count);
        v_value.resize(count);
        comp_rate.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double t = h * static_cast<double>(i);
            v[i] = std::exp(-cum_delta[i]);
            vtau[i] = v[i] * exp.cashflows.premium(t);
            v_value[i] = v[i] * value[i];
            comp_rate[i] =
                v[i] * (val.cashflows.death_benefit(t) - value[i]) * exp.technical.mu(t);
        }
        premium = cumulative_from_samples(vtau, h);
        compensator = cumulative_from_samples(comp_rate, h);
        alive_terminal = premium.back() - v.back() * exp.cashflows.maturity_benefit;
    }

    // First node at or after the death time; death lies in (node-1, node].
    std::size_t death_node(double t) const {
        auto k = static_cast<std::size_t>(std::ceil(t / h - 1e-9));
        return std::min(std::max<std::size_t>(k, 1), count - 1);
    }

    double v_at(double t) const { return std::exp(-lerp_nodes(cum_delta, t, h)); }
    double value_at(double t) const { return lerp_nodes(policy_value->values, t, h); }

    // Discounted premium received up to the death time.
    double premium_until(double t) const {
        const std::size_t k = death_node(t);
        const double t0 = h * static_cast<double>(k - 1);
        const double tail = 0.5 * (vtau[k - 1] + v_at(t) * experience->cashflows.premium(t)) *
                            (t - t0);
        return premium[k - 1] + tail;
    }

    // Theta is constant from the death node on; this is that constant.
    double dead_constant(double t) const {
        return premium_until(t) - v_at(t) * experience->cashflows.death_benefit(t);
    }

    double theta_at(std::size_t k, const std::optional<double>& death, double dead_const) const {
        if (death && death_node(*death) <= k) return dead_const;
        if (k + 1 == count) return alive_terminal;
        return premium[k] - v_value[k];
    }

    // Realized -int v_M R_L dM_M over the whole path.
    double martingale_total(const std::optional<double>& death) const {
        if (!death) return compensator.back();
        const std::size_t k = death_node(*death);
        const double t0 = h * static_cast<double>(k - 1);
        const double rate_at_death = v_at(*death) *
                                     (valuation->cashflows.death_benefit(*death) -
                                      value_at(*death)) *
                                     experience->technical.mu(*death);
        const double partial = 0.5 * (comp_rate[k - 1] + rate_at_death) * (*death - t0);
        const double jump = v_at(*death) * (valuation->cashflows.death_benefit(*death) -
                                            value_at(*death));
        return compensator[k - 1] + partial - jump;
    }
};

}  // namespace

PathResult path_surplus(const Scenario& scenario, const ActuarialBasis& valuation,
                        const ActuarialBasis& experience, const Curve& policy_value, double h) {
    const SimContext ctx(valuation, experience, policy_value, h);
    PathResult out;
    out.death_time = scenario.death_time;
    out.theta_discounted.resize(ctx.count);
    out.martingale_increment.assign(ctx.count, 0.0);

    const double dead_const = scenario.death_time ? ctx.dead_constant(*scenario.death_time) : 0.0;
    const std::size_t dead_k =
        scenario.death_time ? ctx.death_node(*scenario.death_time) : ctx.count;

    for (std::size_t k = 0; k < ctx.count; ++k)
        out.theta_discounted[k] = ctx.theta_at(k, scenario.death_time, dead_const);

    for (std::size_t k = 1; k < ctx.count; ++k) {
        if (k < dead_k) {
            out.martingale_increment[k] = ctx.compensator[k] - ctx.compensator[k - 1];
        } else if (k == dead_k) {
            const double before = ctx.compensator[k - 1];
            out.martingale_increment[k] =
                ctx.martingale_total(scenario.death_time) - before;
        }
    }
    out.discounted_cashflow_total = out.theta_discounted.back();
    return out;
}

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(double sum, double sum_sq, std::size_t n) {
    MeanSe out;
    if (n == 0) return out;
    out.mean = sum / static_cast<double>(n);
    if (n > 1) {
        const double var =
            std::max(0.0, (sum_sq - sum * out.mean) / static_cast<double>(n - 1));
        out.se = std::sqrt(var / static_cast<double>(n));
    }
    return out;
}

}  // namespace

MCReport monte_carlo(const ActuarialBasis& valuation, const ActuarialBasis& experience,
                     const MonteCarloSettings& settings) {
    if (settings.n_paths < 2) throw std::domain_error("need at least two paths");
    const double h = settings.h;
    const Curve value = solve_backward(valuation, valuation.cashflows.maturity_benefit, h);
    const SimContext ctx(valuation, experience, value, h);
    const LifetimeSampler sampler(experience.technical.mu, ctx.term, h);

    // Checkpoint and interval endpoints must be mesh nodes.
    std::vector<std::size_t> cp_nodes;
    for (double t : settings.checkpoints) cp_nodes.push_back(value.index_of(t));
    std::vector<std::pair<std::size_t, std::size_t>> iv_nodes;
    for (const Interval& iv : settings.intervals) {
        if (!(iv.a < iv.b)) throw std::domain_error("interval must have a < b");
        iv_nodes.emplace_back(value.index_of(iv.a), value.index_of(iv.b));
    }
    for (std::size_t i = 0; i < iv_nodes.size(); ++i)
        for (std::size_t j = i + 1; j < iv_nodes.size(); ++j)
            if (iv_nodes[i].second > iv_nodes[j].first && iv_nodes[j].second > iv_nodes[i].first)
                throw std::domain_error("covariance intervals must be disjoint");

    // Nested-simulation machinery for the conditional-EPV checkpoints: the
    // continuations run under the *valuation* technical basis, because the
    // conditional expectation being estimated is taken under it.
    const LifetimeSampler val_sampler(valuation.technical.mu, ctx.term, h);
    const auto cum_delta_L = cumulative_nodes(valuation.technical.delta, 0.0, ctx.count - 1, h);
    std::vector<double> vtau_L(ctx.count);
    for (std::size_t i = 0; i < ctx.count; ++i)
        vtau_L[i] = std::exp(-cum_delta_L[i]) *
                    valuation.cashflows.premium(h * static_cast<double>(i));
    const auto premium_L = cumulative_from_samples(vtau_L, h);
    const auto v_L_at = [&](double t) { return std::exp(-lerp_nodes(cum_delta_L, t, h)); };
    const auto premium_L_until = [&](double t) {
        const std::size_t k = ctx.death_node(t);
        return premium_L[k - 1] + 0.5 *
                                      (vtau_L[k - 1] +
                                       v_L_at(t) * valuation.cashflows.premium(t)) *
                                      (t - h * static_cast<double>(k - 1));
    };
    // Discounted future outgo seen from node c, for a continuation dying at
    // `death` (or surviving when absent).
    const auto future_outgo = [&](std::size_t c, const std::optional<double>& death) {
        const double v_c = std::exp(-cum_delta_L[c]);
        if (death) {
            return (v_L_at(*death) * valuation.cashflows.death_benefit(*death) -
                    (premium_L_until(*death) - premium_L[c])) /
                   v_c;
        }
        return (std::exp(-cum_delta_L.back()) * valuation.cashflows.maturity_benefit -
                (premium_L.back() - premium_L[c])) /
               v_c;
    };

    const std::size_t n = settings.n_paths;
    const std::size_t count = ctx.count;

    // Sequential accumulation in path order keeps the report bit-identical
    // for a given seed. Dead paths are summarized by their death node and
    // trailing constant; alive paths all share one deterministic curve.
    std::vector<std::size_t> deaths_at(count, 0);
    std::vector<double> dead_sum(count, 0.0), dead_sum_sq(count, 0.0);
    std::size_t survivors = 0;
    double mart_sum = 0.0, mart_sum_sq = 0.0;
    const double mart_alive = ctx.compensator.back();

    std::vector<std::vector<double>> increments(iv_nodes.size(),
                                                std::vector<double>(n, 0.0));
    std::vector<double> cp_sum(cp_nodes.size(), 0.0), cp_sum_sq(cp_nodes.size(), 0.0);
    std::vector<std::size_t> cp_alive(cp_nodes.size(), 0);
    std::vector<std::uint64_t> cp_tags(cp_nodes.size());
    for (std::size_t c = 0; c < cp_nodes.size(); ++c)
        cp_tags[c] = substream_seed(settings.seed, 0xC8EC4000u + c);

    for (std::size_t p = 0; p < n; ++p) {
        const Scenario sc = sampler.sample(substream_seed(settings.seed, p));
        const bool died = sc.death_time.has_value();
        const std::size_t dead_k = died ? ctx.death_node(*sc.death_time) : count;
        const double dead_const = died ? ctx.dead_constant(*sc.death_time) : 0.0;

        if (died) {
            deaths_at[dead_k] += 1;
            dead_sum[dead_k] += dead_const;
            dead_sum_sq[dead_k] += dead_const * dead_const;
            const double m = ctx.martingale_total(sc.death_time);
            mart_sum += m;
            mart_sum_sq += m * m;
        } else {
            ++survivors;
        }

        for (std::size_t i = 0; i < iv_nodes.size(); ++i) {
            const double da = ctx.theta_at(iv_nodes[i].first, sc.death_time, dead_const);
            const double db = ctx.theta_at(iv_nodes[i].second, sc.death_time, dead_const);
            increments[i][p] = db - da;
        }

        for (std::size_t c = 0; c < cp_nodes.size(); ++c) {
            if (dead_k <= cp_nodes[c]) continue;  // not alive at the checkpoint
            ++cp_alive[c];
            SplitMix64 rng(substream_seed(cp_tags[c], p));
            const double t_c = h * static_cast<double>(cp_nodes[c]);
            const auto cont_death = val_sampler.invert(rng.exponential(), t_c);
            const double outgo = future_outgo(cp_nodes[c], cont_death);
            cp_sum[c] += outgo;
            cp_sum_sq[c] += outgo * outgo;
        }
    }
    mart_sum += static_cast<double>(survivors) * mart_alive;
    mart_sum_sq += static_cast<double>(survivors) * mart_alive * mart_alive;

    MCReport rep;
    rep.n_paths = n;
    rep.step = h;
    rep.term = ctx.term;
    rep.mean_theta_discounted.resize(count);
    rep.se_theta_discounted.resize(count);

    std::size_t alive_here = n;
    double const_sum = 0.0, const_sum_sq = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        alive_here -= deaths_at[k];
        const_sum += dead_sum[k];
        const_sum_sq += dead_sum_sq[k];
        const double live_value = ctx.theta_at(k, std::nullopt, 0.0);
        const double sum = static_cast<double>(alive_here) * live_value + const_sum;
        const double sum_sq =
            static_cast<double>(alive_here) * live_value * live_value + const_sum_sq;
        const MeanSe ms = mean_se(sum, sum_sq, n);
        rep.mean_theta_discounted[k] = ms.mean;
        rep.se_theta_discounted[k] = ms.se;
    }

    for (std::size_t c = 0; c < cp_nodes.size(); ++c) {
        CheckpointStat st;
        st.t = h * static_cast<double>(cp_nodes[c]);
        st.alive = cp_alive[c];
        st.skipped = cp_alive[c] == 0;
        if (!st.skipped) {
            const MeanSe ms = mean_se(cp_sum[c], cp_sum_sq[c], cp_alive[c]);
            st.future_outgo_mean = ms.mean;
            st.future_outgo_se = ms.se;
        }
        st.theta_mean = rep.mean_theta_discounted[cp_nodes[c]];
        st.theta_se = rep.se_theta_discounted[cp_nodes[c]];
        rep.checkpoints.push_back(st);
    }

    for (std::size_t i = 0; i < iv_nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < iv_nodes.size(); ++j) {
            double mi = 0.0, mj = 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                mi += increments[i][p];
                mj += increments[j][p];
            }
            mi /= static_cast<double>(n);
            mj /= static_cast<double>(n);
            double w_sum = 0.0, w_sum_sq = 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                const double w = (increments[i][p] - mi) * (increments[j][p] - mj);
                w_sum += w;
                w_sum_sq += w * w;
            }
            IntervalCovariance cov;
            cov.first = settings.intervals[i];
            cov.second = settings.intervals[j];
            cov.covariance = w_sum / static_cast<double>(n - 1);
            const MeanSe ms = mean_se(w_sum, w_sum_sq, n);
            cov.se = ms.se;
            rep.covariances.push_back(cov);
        }
    }

    const MeanSe mart = mean_se(mart_sum, mart_sum_sq, n);
    rep.martingale_mean = mart.mean;
    rep.martingale_se = mart.se;
    return rep;
}

}  // namespace lifesurplus
