#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pnkit/numeric.hpp"

namespace pnkit {

/// A knot of a piecewise-linear distribution function: value at x (left value)
/// and the limit from the right.
struct Knot {
    double x;
    double left;
    double right;

    friend bool operator==(const Knot&, const Knot&) = default;
};

/// Nondecreasing left-continuous piecewise-linear function on [0, inf).
///
/// Between knots x_i < x_{i+1} the function runs linearly from right_i to
/// left_{i+1}; beyond the last knot it stays at right_n. The first knot must be
/// (0, 0, w) so that F(0) = 0; a positive w encodes a jump at the origin.
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;

    explicit PiecewiseLinear(std::vector<Knot> knots) : knots_(std::move(knots)) {
        if (knots_.empty()) throw std::invalid_argument("piecewise table needs at least one knot");
        if (knots_.front().x != 0.0 || knots_.front().left != 0.0)
            throw std::invalid_argument("piecewise table must start at (0, 0, w)");
        double prev_x = -1.0;
        double prev_v = 0.0;
        for (const auto& k : knots_) {
            if (!(k.x > prev_x) || !std::isfinite(k.x))
                throw std::invalid_argument("knot abscissae must be finite and strictly increasing");
            if (k.left < prev_v || k.right < k.left || k.right > 1.0 || k.left < 0.0)
                throw std::invalid_argument("knot values must be nondecreasing within [0, 1]");
            prev_x = k.x;
            prev_v = k.right;
        }
    }

    const std::vector<Knot>& knots() const { return knots_; }

    double operator()(double x) const {
        if (!(x > 0.0)) return 0.0;
        auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                                   [](const Knot& k, double v) { return k.x < v; });
        if (it == knots_.end()) return knots_.back().right;
        if (it->x == x) return it->left;
        const Knot& hi = *it;
        const Knot& lo = *(it - 1);
        double w = (x - lo.x) / (hi.x - lo.x);
        return lo.right + w * (hi.left - lo.right);
    }

    double right_limit(double x) const {
        if (x < 0.0) return 0.0;
        auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                                   [](const Knot& k, double v) { return k.x < v; });
        if (it != knots_.end() && it->x == x) return it->right;
        return (*this)(x);
    }

    double tail() const { return knots_.back().right; }

    /// inf{u : F(u) >= t}, which equals sup{u : F(u) < t}.
    double quasi_inverse(double t) const {
        if (!(t > 0.0)) return 0.0;
        if (t > tail()) return kInf;
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            const Knot& k = knots_[i];
            if (k.left >= t) {
                // crossing inside (x_{i-1}, x_i]
                const Knot& lo = knots_[i - 1];
                if (lo.right >= t) return lo.x;
                double w = (t - lo.right) / (k.left - lo.right);
                return lo.x + w * (k.x - lo.x);
            }
            if (k.right >= t) return k.x;
        }
        return kInf;
    }

    /// Continuous, and strictly rising until it reaches its tail value.
    bool strictly_increasing() const {
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            if (knots_[i].left != knots_[i].right) return false;
            if (i + 1 < knots_.size() && !(knots_[i + 1].left > knots_[i].right)) return false;
        }
        return knots_.size() > 1;
    }

    bool attains_one() const {
        return std::any_of(knots_.begin(), knots_.end(), [](const Knot& k) { return k.right >= 1.0; });
    }

    friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;

private:
    std::vector<Knot> knots_;
};

/// Base distribution functions G used by simple and alpha-simple spaces.
class BaseCdf {
public:
    struct Exponential {
        friend bool operator==(Exponential, Exponential) { return true; }
    };
    struct UniformUnit {
        friend bool operator==(UniformUnit, UniformUnit) { return true; }
    };
    struct HalfExponential {
        friend bool operator==(HalfExponential, HalfExponential) { return true; }
    };
    struct Custom {
        PiecewiseLinear table;
        friend bool operator==(const Custom&, const Custom&) = default;
    };
    using Repr = std::variant<Exponential, UniformUnit, HalfExponential, Custom>;

    static BaseCdf exponential() { return BaseCdf(Exponential{}); }
    static BaseCdf uniform_unit() { return BaseCdf(UniformUnit{}); }
    static BaseCdf half_exponential() { return BaseCdf(HalfExponential{}); }
    static BaseCdf custom(PiecewiseLinear table) { return BaseCdf(Custom{std::move(table)}); }

    const Repr& repr() const { return repr_; }

    double operator()(double y) const {
        if (!(y > 0.0)) return 0.0;
        return std::visit(
            [y](const auto& g) -> double {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, Exponential>)
                    return -std::expm1(-y);
                else if constexpr (std::is_same_v<T, UniformUnit>)
                    return std::min(y, 1.0);
                else if constexpr (std::is_same_v<T, HalfExponential>)
                    return -0.5 * std::expm1(-y);
                else
                    return g.table(y);
            },
            repr_);
    }

    double right_limit(double y) const {
        if (const auto* c = std::get_if<Custom>(&repr_)) return c->table.right_limit(y);
        return y < 0.0 ? 0.0 : (*this)(y);
    }

    /// lim_{y -> inf} G(y).
    double tail() const {
        return std::visit(
            [](const auto& g) -> double {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, HalfExponential>)
                    return 0.5;
                else if constexpr (std::is_same_v<T, Custom>)
                    return g.table.tail();
                else
                    return 1.0;
            },
            repr_);
    }

    /// Left-continuous quasi-inverse sup{u : G(u) < t}; +inf above the tail value.
    double quasi_inverse(double t) const {
        if (!(t > 0.0)) return 0.0;
        return std::visit(
            [t](const auto& g) -> double {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, Exponential>)
                    return t >= 1.0 ? kInf : -std::log1p(-t);
                else if constexpr (std::is_same_v<T, UniformUnit>)
                    return t > 1.0 ? kInf : t;
                else if constexpr (std::is_same_v<T, HalfExponential>)
                    return t >= 0.5 ? kInf : -std::log1p(-2.0 * t);
                else
                    return g.table.quasi_inverse(t);
            },
            repr_);
    }

    /// Continuous and strictly increasing on the set where it is below its tail.
    bool strictly_increasing() const {
        if (const auto* c = std::get_if<Custom>(&repr_)) return c->table.strictly_increasing();
        return true;
    }

    bool attains_one() const {
        if (std::holds_alternative<UniformUnit>(repr_)) return true;
        if (const auto* c = std::get_if<Custom>(&repr_)) return c->table.attains_one();
        return false;
    }

    std::vector<double> knots() const {
        if (std::holds_alternative<UniformUnit>(repr_)) return {1.0};
        std::vector<double> out;
        if (const auto* c = std::get_if<Custom>(&repr_))
            for (const auto& k : c->table.knots())
                if (k.x > 0.0) out.push_back(k.x);
        return out;
    }

    std::string name() const {
        return std::visit(
            [](const auto& g) -> std::string {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, Exponential>)
                    return "exponential";
                else if constexpr (std::is_same_v<T, UniformUnit>)
                    return "uniform";
                else if constexpr (std::is_same_v<T, HalfExponential>)
                    return "half_exponential";
                else
                    return "custom";
            },
            repr_);
    }

    friend bool operator==(const BaseCdf&, const BaseCdf&) = default;

private:
    explicit BaseCdf(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

}  // namespace pnkit
