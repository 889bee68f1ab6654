#include "lifesurplus/curves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

namespace lifesurplus {

struct RateCurve::Node {
    struct Constant {
        double rate;
    };
    struct Makeham {
        double a, b, c, entry_age;
    };
    struct Scaled {
        std::shared_ptr<const Node> base;
        double factor;
    };
    struct Shifted {
        std::shared_ptr<const Node> base;
        double offset;
    };
    struct Table {
        std::vector<double> times;
        std::vector<double> values;
    };
    std::variant<Constant, Makeham, Scaled, Shifted, Table> impl;

    double eval(double t) const {
        return std::visit(
            [t](const auto& n) -> double {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Constant>) {
                    return n.rate;
                } else if constexpr (std::is_same_v<T, Makeham>) {
                    return n.a + n.b * std::exp((n.entry_age + t) * std::log(n.c));
                } else if constexpr (std::is_same_v<T, Scaled>) {
                    return n.factor * n.base->eval(t);
                } else if constexpr (std::is_same_v<T, Shifted>) {
                    return n.offset + n.base->eval(t);
                } else {
                    // Left-continuous step: the value at a node covers the
                    // interval ending at that node.
                    if (t < n.times.front() - 1e-12 || t > n.times.back() + 1e-12)
                        throw std::domain_error("table curve evaluated outside its domain");
                    auto it = std::lower_bound(n.times.begin(), n.times.end(), t - 1e-12);
                    if (it == n.times.end()) --it;
                    return n.values[static_cast<std::size_t>(it - n.times.begin())];
                }
            },
            impl);
    }
};

RateCurve RateCurve::constant(double rate) {
    return RateCurve(std::make_shared<Node>(Node{Node::Constant{rate}}));
}

RateCurve RateCurve::makeham(double a, double b, double c, double entry_age) {
    if (!(c > 0.0)) throw std::domain_error("makeham growth base must be positive");
    return RateCurve(std::make_shared<Node>(Node{Node::Makeham{a, b, c, entry_age}}));
}

RateCurve RateCurve::scaled(RateCurve base, double factor) {
    if (!base.valid()) throw std::domain_error("scaled curve needs a base curve");
    return RateCurve(std::make_shared<Node>(Node{Node::Scaled{std::move(base.node_), factor}}));
}

RateCurve RateCurve::shifted(RateCurve base, double offset) {
    if (!base.valid()) throw std::domain_error("shifted curve needs a base curve");
    return RateCurve(std::make_shared<Node>(Node{Node::Shifted{std::move(base.node_), offset}}));
}

RateCurve RateCurve::table(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.empty())
        throw std::domain_error("table curve needs equally many times and values");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::domain_error("table curve times must be strictly increasing");
    return RateCurve(
        std::make_shared<Node>(Node{Node::Table{std::move(times), std::move(values)}}));
}

double RateCurve::operator()(double t) const {
    if (!node_) throw std::domain_error("evaluating an empty rate curve");
    return node_->eval(t);
}

RateCurve danish_g82m(double entry_age) {
    return RateCurve::makeham(0.0005, std::pow(10.0, 5.728 - 10.0), std::pow(10.0, 0.038),
                              entry_age);
}

double cumulative(const RateCurve& curve, double t0, double t1, double quad_step) {
    if (!(t0 >= 0.0) || !(t1 >= t0)) throw std::domain_error("invalid integration interval");
    if (!(quad_step > 0.0)) throw std::domain_error("quadrature step must be positive");
    if (t1 == t0) return 0.0;
    const auto panels =
        static_cast<std::size_t>(std::max(1.0, std::ceil((t1 - t0) / quad_step - 1e-12)));
    const double w = (t1 - t0) / static_cast<double>(panels);
    double sum = 0.0;
    double fa = curve(t0);
    for (std::size_t i = 0; i < panels; ++i) {
        const double a = t0 + w * static_cast<double>(i);
        const double b = (i + 1 == panels) ? t1 : a + w;
        const double fm = curve(0.5 * (a + b));
        const double fb = curve(b);
        sum += (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        fa = fb;
    }
    return sum;
}

std::vector<double> cumulative_nodes(const RateCurve& curve, double start, std::size_t panels,
                                     double h) {
    std::vector<double> out(panels + 1, 0.0);
    double fa = curve(start);
    for (std::size_t i = 0; i < panels; ++i) {
        const double a = start + h * static_cast<double>(i);
        const double fm = curve(a + 0.5 * h);
        const double fb = curve(a + h);
        out[i + 1] = out[i] + h / 6.0 * (fa + 4.0 * fm + fb);
        fa = fb;
    }
    return out;
}

Factors factors(const TechnicalBasis& basis, double t, double quad_step) {
    Factors f;
    f.v = std::exp(-cumulative(basis.delta, 0.0, t, quad_step));
    f.p = std::exp(-cumulative(basis.mu, 0.0, t, quad_step));
    f.phi = f.v * f.p;
    return f;
}

}  // namespace lifesurplus
