#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pnkit/base_cdf.hpp"
#include "pnkit/numeric.hpp"

namespace pnkit {

/// A distance distribution function defined by evaluation rather than a table.
///
/// Implementations must be nondecreasing and left-continuous with F(0) = 0.
/// Derived constructions (compositions, minima, convolutions) live behind this
/// interface so the closed-form variants of Ddf stay a small closed set.
class DdfSource {
public:
    virtual ~DdfSource() = default;

    /// Value at a finite x > 0.
    virtual double eval(double x) const = 0;

    virtual double eval_right(double x) const { return eval(x + right_nudge(x)); }

    /// lim_{x -> inf} F(x), known analytically.
    virtual double tail() const = 0;

    /// True when the value 1 is reached at a finite argument.
    virtual bool attains_one() const { return false; }

    /// sup{u : F(u) < t}. Generic bisection; overridden where a closed route exists.
    virtual double quasi_inverse(double t) const {
        if (!(t > 0.0)) return 0.0;
        if (t > tail()) return kInf;
        const double big = std::numeric_limits<double>::max();
        if (eval(big) < t) return kInf;
        return sup_true(0.0, big, [&](double u) { return u <= 0.0 || eval(u) < t; });
    }

    /// Points where the function may jump or change slope.
    virtual std::vector<double> knots() const { return {}; }

    virtual std::string describe() const = 0;
};

/// Distance distribution function: nondecreasing, left-continuous, F(0) = 0,
/// values in [0, 1]. By the usual convention F(+inf) = 1.
class Ddf {
public:
    struct Step {
        double a;  ///< jump location; +inf gives the identically-zero function
    };
    struct Scaled {
        BaseCdf base;
        double scale;  ///< x -> base(x / scale)
    };
    struct Breakpoints {
        PiecewiseLinear table;
    };
    struct Lazy {
        std::shared_ptr<const DdfSource> source;
    };
    using Repr = std::variant<Step, Scaled, Breakpoints, Lazy>;

    static Ddf step(double a) {
        if (!(a >= 0.0)) throw std::invalid_argument("step location must be nonnegative");
        return Ddf(Step{a});
    }
    static Ddf scaled(BaseCdf base, double scale) {
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw std::invalid_argument("scale must be positive and finite");
        return Ddf(Scaled{std::move(base), scale});
    }
    static Ddf breakpoints(PiecewiseLinear table) { return Ddf(Breakpoints{std::move(table)}); }
    static Ddf lazy(std::shared_ptr<const DdfSource> source) { return Ddf(Lazy{std::move(source)}); }

    const Repr& repr() const { return repr_; }

    double operator()(double x) const {
        if (!(x > 0.0)) return 0.0;
        if (is_inf(x)) return 1.0;
        return std::visit(
            [x](const auto& r) -> double {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Step>)
                    return x > r.a ? 1.0 : 0.0;
                else if constexpr (std::is_same_v<T, Scaled>)
                    return r.base(x / r.scale);
                else if constexpr (std::is_same_v<T, Breakpoints>)
                    return r.table(x);
                else
                    return r.source->eval(x);
            },
            repr_);
    }

    /// lim_{y -> x+} F(y).
    double right_limit(double x) const {
        if (x < 0.0) return 0.0;
        if (is_inf(x)) return 1.0;
        return std::visit(
            [x](const auto& r) -> double {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Step>)
                    return x >= r.a ? 1.0 : 0.0;
                else if constexpr (std::is_same_v<T, Scaled>)
                    return r.base.right_limit(x / r.scale);
                else if constexpr (std::is_same_v<T, Breakpoints>)
                    return r.table.right_limit(x);
                else
                    return r.source->eval_right(x);
            },
            repr_);
    }

    double tail() const {
        return std::visit(
            [](const auto& r) -> double {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Step>)
                    return is_inf(r.a) ? 0.0 : 1.0;
                else if constexpr (std::is_same_v<T, Scaled>)
                    return r.base.tail();
                else if constexpr (std::is_same_v<T, Breakpoints>)
                    return r.table.tail();
                else
                    return r.source->tail();
            },
            repr_);
    }

    bool attains_one() const {
        return std::visit(
            [](const auto& r) -> bool {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Step>)
                    return !is_inf(r.a);
                else if constexpr (std::is_same_v<T, Scaled>)
                    return r.base.attains_one();
                else if constexpr (std::is_same_v<T, Breakpoints>)
                    return r.table.attains_one();
                else
                    return r.source->attains_one();
            },
            repr_);
    }

    /// sup{u : F(u) < t} for t in (0, 1]; 0 at t = 0.
    double quasi_inverse(double t) const {
        if (!(t > 0.0)) return 0.0;
        return std::visit(
            [t](const auto& r) -> double {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Step>)
                    return r.a;
                else if constexpr (std::is_same_v<T, Scaled>)
                    return r.scale * r.base.quasi_inverse(t);
                else if constexpr (std::is_same_v<T, Breakpoints>)
                    return r.table.quasi_inverse(t);
                else
                    return r.source->quasi_inverse(t);
            },
            repr_);
    }

    std::vector<double> knots() const {
        std::vector<double> out = std::visit(
            [](const auto& r) -> std::vector<double> {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Step>) {
                    if (is_inf(r.a)) return {};
                    return {r.a};
                } else if constexpr (std::is_same_v<T, Scaled>) {
                    auto k = r.base.knots();
                    for (auto& v : k) v *= r.scale;
                    return k;
                } else if constexpr (std::is_same_v<T, Breakpoints>) {
                    std::vector<double> k;
                    for (const auto& kn : r.table.knots()) k.push_back(kn.x);
                    return k;
                } else {
                    return r.source->knots();
                }
            },
            repr_);
        std::erase_if(out, [](double v) { return !std::isfinite(v) || v < 0.0; });
        sort_unique(out);
        return out;
    }

    bool is_step() const { return std::holds_alternative<Step>(repr_); }
    bool is_eps0() const {
        const auto* s = std::get_if<Step>(&repr_);
        return s != nullptr && s->a == 0.0;
    }
    bool in_dplus() const { return tail() == 1.0; }

    std::string describe() const {
        return std::visit(
            [](const auto& r) -> std::string {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Step>)
                    return "step(" + (is_inf(r.a) ? std::string("inf") : std::to_string(r.a)) + ")";
                else if constexpr (std::is_same_v<T, Scaled>)
                    return "scaled(" + r.base.name() + ", " + std::to_string(r.scale) + ")";
                else if constexpr (std::is_same_v<T, Breakpoints>)
                    return "breakpoints(" + std::to_string(r.table.knots().size()) + ")";
                else
                    return r.source->describe();
            },
            repr_);
    }

private:
    explicit Ddf(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

/// The unit step at a: 0 for x <= a, 1 for x > a.
inline Ddf make_eps(double a) { return Ddf::step(a); }

inline double eval(const Ddf& f, double x) { return f(x); }

inline bool is_in_dplus(const Ddf& f) { return f.in_dplus(); }

/// Left-continuous quasi-inverse of a distribution function, as a callable on [0, 1].
class QuasiInverse {
public:
    explicit QuasiInverse(Ddf source) : source_(std::move(source)) {}
    double operator()(double t) const { return source_.quasi_inverse(t); }
    const Ddf& source() const { return source_; }

private:
    Ddf source_;
};

inline QuasiInverse quasi_inverse(const Ddf& f) { return QuasiInverse(f); }

namespace detail {

class PointwiseMinSource final : public DdfSource {
public:
    explicit PointwiseMinSource(std::vector<Ddf> parts) : parts_(std::move(parts)) {}

    double eval(double x) const override {
        double v = 1.0;
        for (const auto& p : parts_) v = std::min(v, p(x));
        return v;
    }
    double eval_right(double x) const override {
        double v = 1.0;
        for (const auto& p : parts_) v = std::min(v, p.right_limit(x));
        return v;
    }
    double tail() const override {
        double v = 1.0;
        for (const auto& p : parts_) v = std::min(v, p.tail());
        return v;
    }
    bool attains_one() const override {
        return std::all_of(parts_.begin(), parts_.end(), [](const Ddf& p) { return p.attains_one(); });
    }
    double quasi_inverse(double t) const override {
        // {u : min F_i(u) < t} is the union of the individual sets.
        double v = 0.0;
        for (const auto& p : parts_) v = std::max(v, p.quasi_inverse(t));
        return v;
    }
    std::vector<double> knots() const override {
        std::vector<double> out;
        for (const auto& p : parts_) {
            auto k = p.knots();
            out.insert(out.end(), k.begin(), k.end());
        }
        return out;
    }
    std::string describe() const override { return "min(" + std::to_string(parts_.size()) + ")"; }

private:
    std::vector<Ddf> parts_;
};

}  // namespace detail

/// Pointwise minimum of finitely many DDFs. Steps and same-base scalings collapse
/// to a single closed form; anything else is evaluated lazily.
inline Ddf pointwise_min(std::vector<Ddf> parts) {
    if (parts.empty()) throw std::invalid_argument("pointwise_min of an empty family");
    if (parts.size() == 1) return parts.front();
    bool all_steps = std::all_of(parts.begin(), parts.end(), [](const Ddf& f) { return f.is_step(); });
    if (all_steps) {
        double a = 0.0;
        for (const auto& f : parts) a = std::max(a, std::get<Ddf::Step>(f.repr()).a);
        return Ddf::step(a);
    }
    if (const auto* first = std::get_if<Ddf::Scaled>(&parts.front().repr())) {
        bool same_base = std::all_of(parts.begin(), parts.end(), [&](const Ddf& f) {
            const auto* s = std::get_if<Ddf::Scaled>(&f.repr());
            return s != nullptr && s->base == first->base;
        });
        if (same_base) {
            double c = 0.0;
            for (const auto& f : parts) c = std::max(c, std::get<Ddf::Scaled>(f.repr()).scale);
            return Ddf::scaled(first->base, c);
        }
    }
    return Ddf::lazy(std::make_shared<detail::PointwiseMinSource>(std::move(parts)));
}

/// Evaluation abscissae that resolve the given DDFs: quantiles at evenly spaced
/// levels, every knot, and the point just to the right of each knot.
inline std::vector<double> evaluation_grid(std::span<const Ddf> fs, int levels = 16) {
    std::vector<double> xs;
    for (const auto& f : fs) {
        for (int i = 1; i <= levels; ++i) {
            double t = static_cast<double>(i) / (levels + 1);
            double q = f.quasi_inverse(t);
            if (std::isfinite(q) && q > 0.0) xs.push_back(q);
        }
        for (double k : f.knots()) {
            if (k > 0.0) xs.push_back(k);
            xs.push_back(k + right_nudge(k));
        }
    }
    if (xs.empty()) xs = {0.5, 1.0, 2.0};
    // pad each end so flat regions are covered too
    auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    double a = *lo, b = *hi;
    xs.push_back(a / 4.0);
    xs.push_back(b * 2.0);
    xs.push_back(b * 8.0);
    std::erase_if(xs, [](double v) { return !(v > 0.0) || !std::isfinite(v); });
    sort_unique(xs);
    return xs;
}

namespace detail {

/// One side of the modified Levy condition at step h:
/// F(x-h) - h <= G(x) <= F(x+h) + h for x in (0, 1/h). Returns the largest violation.
inline double levy_violation(const Ddf& f, const Ddf& g, double h, const std::vector<double>& seeds) {
    const double xmax = 1.0 / h;
    auto left_gap = [&](double x) {  // left values, valid on (0, 1/h]
        if (!(x > 0.0) || x > xmax) return -kInf;
        double lower = f(x - h) - h - g(x);
        double upper = g(x) - f(x + h) - h;
        return std::max(lower, upper);
    };
    auto right_gap = [&](double x) {  // right limits, valid on [0, 1/h)
        if (x < 0.0 || !(x < xmax)) return -kInf;
        double lower = f.right_limit(x - h) - h - g.right_limit(x);
        double upper = g.right_limit(x) - f.right_limit(x + h) - h;
        return std::max(lower, upper);
    };
    auto gap = [&](double x) { return std::max(left_gap(x), right_gap(x)); };

    std::vector<double> xs;
    xs.reserve(seeds.size() * 3 + 1100);
    for (double s : seeds) {
        xs.push_back(s);
        xs.push_back(s + h);
        xs.push_back(s - h);
    }
    const int n = 1024;
    double span_hi = std::min(xmax, seeds.empty() ? xmax : std::max(seeds.back() + 2.0 * h, 1.0));
    for (int i = 0; i <= n; ++i) xs.push_back(span_hi * i / n);
    for (int i = 0; i <= 64; ++i) xs.push_back(xmax * std::pow(2.0, -i / 4.0));
    xs.push_back(xmax);
    std::erase_if(xs, [&](double v) { return v < 0.0 || v > xmax || !std::isfinite(v); });
    sort_unique(xs);

    double worst = -kInf;
    std::size_t best = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double v = gap(xs[i]);
        if (v > worst) {
            worst = v;
            best = i;
        }
    }
    // refine around the best abscissa for smooth parts
    if (xs.size() > 2) {
        double a = xs[best == 0 ? 0 : best - 1];
        double b = xs[std::min(best + 1, xs.size() - 1)];
        if (b > a) worst = std::max(worst, golden_extremum(a, b, left_gap, true, 40));
    }
    return worst;
}

}  // namespace detail

/// Modified Levy (Sibley) distance: the infimum of h in (0, 1] for which both
/// one-sided conditions hold in both directions. Bisection on h to within tol.
inline double sibley_distance(const Ddf& f, const Ddf& g, double tol = Tolerances{}.metric) {
    std::vector<double> seeds = f.knots();
    auto kg = g.knots();
    seeds.insert(seeds.end(), kg.begin(), kg.end());
    std::vector<Ddf> both{f, g};
    auto grid = evaluation_grid(both, 32);
    seeds.insert(seeds.end(), grid.begin(), grid.end());
    seeds.push_back(0.0);
    sort_unique(seeds);

    auto holds = [&](double h) {
        return detail::levy_violation(f, g, h, seeds) <= 0.0 &&
               detail::levy_violation(g, f, h, seeds) <= 0.0;
    };
    // h = 1 satisfies both conditions for any pair of DDFs.
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol / 4.0) {
        double mid = 0.5 * (lo + hi);
        if (holds(mid))
            hi = mid;
        else
            lo = mid;
    }
    if (lo == 0.0 && holds(tol / 8.0)) return 0.0;
    return hi;
}

}  // namespace pnkit
