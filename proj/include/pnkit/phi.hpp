#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pnkit/ddf.hpp"
#include "pnkit/numeric.hpp"

namespace pnkit {

/// A continuous piecewise-linear map through (0, 0) and the given knots,
/// continued past the last knot with a fixed slope.
struct PhiKnot {
    double x;
    double y;
    friend bool operator==(const PhiKnot&, const PhiKnot&) = default;
};

/// Nondecreasing left-continuous map phi: [0, inf] -> [0, inf] with phi(0) = 0,
/// phi(inf) = inf and phi(x) > 0 for x > 0.
class PhiMap {
public:
    struct Power {
        double alpha;  ///< x -> x^(1/alpha)
        friend bool operator==(const Power&, const Power&) = default;
    };
    struct Linear {
        double k;
        friend bool operator==(const Linear&, const Linear&) = default;
    };
    /// x on [0, b], inf on (b, inf].
    struct Capped {
        double b;
        friend bool operator==(const Capped&, const Capped&) = default;
    };
    /// min(y, b) for finite y, inf at inf. Quasi-inverse of Capped.
    struct Clamp {
        double b;
        friend bool operator==(const Clamp&, const Clamp&) = default;
    };
    struct Piecewise {
        std::vector<PhiKnot> knots;  ///< starts at (0, 0)
        double tail_slope;
        friend bool operator==(const Piecewise&, const Piecewise&) = default;
    };
    /// Quasi-inverse of a Piecewise map.
    struct PiecewiseInverse {
        Piecewise source;
        friend bool operator==(const PiecewiseInverse&, const PiecewiseInverse&) = default;
    };
    using Repr = std::variant<Power, Linear, Capped, Clamp, Piecewise, PiecewiseInverse>;

    static PhiMap identity() { return PhiMap(Linear{1.0}); }
    static PhiMap power(double alpha) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("power exponent must be positive");
        return PhiMap(Power{alpha});
    }
    static PhiMap linear(double k) {
        if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("linear factor must be positive");
        return PhiMap(Linear{k});
    }
    static PhiMap capped(double b) {
        if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("cap point must be positive");
        return PhiMap(Capped{b});
    }
    static PhiMap clamp(double b) {
        if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("clamp level must be positive");
        return PhiMap(Clamp{b});
    }
    static PhiMap piecewise(std::vector<PhiKnot> knots, double tail_slope) {
        if (knots.empty() || knots.front().x != 0.0 || knots.front().y != 0.0)
            throw std::invalid_argument("piecewise map must start at (0, 0)");
        if (knots.size() < 2 && !(tail_slope > 0.0))
            throw std::invalid_argument("piecewise map must be positive away from 0");
        for (std::size_t i = 1; i < knots.size(); ++i) {
            if (!(knots[i].x > knots[i - 1].x) || !std::isfinite(knots[i].x))
                throw std::invalid_argument("piecewise map abscissae must increase");
            if (knots[i].y < knots[i - 1].y || !std::isfinite(knots[i].y))
                throw std::invalid_argument("piecewise map must be nondecreasing");
        }
        if (knots.size() > 1 && !(knots[1].y > 0.0))
            throw std::invalid_argument("piecewise map must satisfy phi(x) > 0 for x > 0");
        if (!(tail_slope >= 0.0) || !std::isfinite(tail_slope))
            throw std::invalid_argument("tail slope must be nonnegative");
        return PhiMap(Piecewise{std::move(knots), tail_slope});
    }

    const Repr& repr() const { return repr_; }

    double operator()(double x) const {
        if (!(x > 0.0)) return 0.0;
        if (is_inf(x)) return kInf;
        return std::visit(
            [x](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, Power>)
                    return m.alpha == 1.0 ? x : std::pow(x, 1.0 / m.alpha);
                else if constexpr (std::is_same_v<T, Linear>)
                    return m.k * x;
                else if constexpr (std::is_same_v<T, Capped>)
                    return x <= m.b ? x : kInf;
                else if constexpr (std::is_same_v<T, Clamp>)
                    return std::min(x, m.b);
                else if constexpr (std::is_same_v<T, Piecewise>)
                    return eval_piecewise(m, x);
                else
                    return first_crossing(m.source, x);
            },
            repr_);
    }

    /// Left-continuous quasi-inverse: phi^(t) = sup{u : phi(u) < t}, with
    /// phi^(0) = 0 and phi^(inf) = inf.
    PhiMap quasi_inverse() const {
        return std::visit(
            [](const auto& m) -> PhiMap {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, Power>)
                    return PhiMap(Power{1.0 / m.alpha});
                else if constexpr (std::is_same_v<T, Linear>)
                    return PhiMap(Linear{1.0 / m.k});
                else if constexpr (std::is_same_v<T, Capped>)
                    return PhiMap(Clamp{m.b});
                else if constexpr (std::is_same_v<T, Clamp>)
                    return PhiMap(Capped{m.b});
                else if constexpr (std::is_same_v<T, Piecewise>)
                    return PhiMap(PiecewiseInverse{m});
                else
                    return PhiMap(m.source);
            },
            repr_);
    }

    /// Bijective on [0, inf], i.e. a member of M_inf.
    bool is_bijective() const {
        return std::visit(
            [](const auto& m) -> bool {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, Power> || std::is_same_v<T, Linear>)
                    return true;
                else if constexpr (std::is_same_v<T, Piecewise>)
                    return strictly_increasing(m);
                else if constexpr (std::is_same_v<T, PiecewiseInverse>)
                    return strictly_increasing(m.source);
                else
                    return false;
            },
            repr_);
    }

    /// Inverse of a bijective map.
    double inverse(double y) const {
        if (!is_bijective()) throw std::logic_error("inverse of a non-bijective map");
        return quasi_inverse()(y);
    }

    bool is_identity() const {
        if (const auto* p = std::get_if<Power>(&repr_)) return p->alpha == 1.0;
        if (const auto* l = std::get_if<Linear>(&repr_)) return l->k == 1.0;
        return false;
    }

    /// Continuous and strictly increasing from [0, b] onto [0, inf] for a finite
    /// b, once extended by inf beyond b. None of the closed variants qualify:
    /// Capped jumps to inf instead of diverging continuously.
    bool in_mb() const { return false; }

    /// lim_{x -> inf} phi(x); finite values are possible for Clamp and flat-tailed
    /// Piecewise maps.
    double limit_at_infinity() const {
        return std::visit(
            [](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, Clamp>)
                    return m.b;
                else if constexpr (std::is_same_v<T, Piecewise>)
                    return m.tail_slope > 0.0 ? kInf : m.knots.back().y;
                else
                    return kInf;
            },
            repr_);
    }

    /// sup{x : phi(x) < inf}.
    double finite_extent() const {
        if (const auto* c = std::get_if<Capped>(&repr_)) return c->b;
        if (const auto* p = std::get_if<PiecewiseInverse>(&repr_)) {
            if (p->source.tail_slope == 0.0) return p->source.knots.back().y;
        }
        return kInf;
    }

    /// sup{x : phi(x) <= a}; for a = inf this is finite_extent().
    double upper_preimage(double a) const {
        if (is_inf(a)) return finite_extent();
        if (a < 0.0) return 0.0;
        return std::visit(
            [a, this](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, Power>)
                    return std::pow(a, m.alpha);
                else if constexpr (std::is_same_v<T, Linear>)
                    return a / m.k;
                else if constexpr (std::is_same_v<T, Capped>)
                    return std::min(a, m.b);
                else if constexpr (std::is_same_v<T, Clamp>)
                    return a >= m.b ? kInf : a;
                else {
                    if ((*this)(std::numeric_limits<double>::max()) <= a && limit_at_infinity() <= a)
                        return kInf;
                    return sup_true(0.0, std::numeric_limits<double>::max(),
                                    [&](double x) { return (*this)(x) <= a; });
                }
            },
            repr_);
    }

    /// Abscissae where phi has a kink or a jump.
    std::vector<double> knots() const {
        return std::visit(
            [](const auto& m) -> std::vector<double> {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, Capped> || std::is_same_v<T, Clamp>)
                    return {m.b};
                else if constexpr (std::is_same_v<T, Piecewise>) {
                    std::vector<double> k;
                    for (const auto& p : m.knots) k.push_back(p.x);
                    return k;
                } else if constexpr (std::is_same_v<T, PiecewiseInverse>) {
                    std::vector<double> k;
                    for (const auto& p : m.source.knots) k.push_back(p.y);
                    return k;
                } else
                    return {};
            },
            repr_);
    }

    std::string describe() const {
        return std::visit(
            [](const auto& m) -> std::string {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, Power>)
                    return "power(" + std::to_string(m.alpha) + ")";
                else if constexpr (std::is_same_v<T, Linear>)
                    return "linear(" + std::to_string(m.k) + ")";
                else if constexpr (std::is_same_v<T, Capped>)
                    return "capped(" + std::to_string(m.b) + ")";
                else if constexpr (std::is_same_v<T, Clamp>)
                    return "clamp(" + std::to_string(m.b) + ")";
                else if constexpr (std::is_same_v<T, Piecewise>)
                    return "piecewise(" + std::to_string(m.knots.size()) + ")";
                else
                    return "piecewise_inverse(" + std::to_string(m.source.knots.size()) + ")";
            },
            repr_);
    }

    friend bool operator==(const PhiMap&, const PhiMap&) = default;

private:
    explicit PhiMap(Repr r) : repr_(std::move(r)) {}

    static double eval_piecewise(const Piecewise& m, double x) {
        const auto& k = m.knots;
        if (x >= k.back().x) return k.back().y + m.tail_slope * (x - k.back().x);
        for (std::size_t i = 1; i < k.size(); ++i) {
            if (x <= k[i].x) {
                double w = (x - k[i - 1].x) / (k[i].x - k[i - 1].x);
                return k[i - 1].y + w * (k[i].y - k[i - 1].y);
            }
        }
        return k.back().y;
    }

    /// sup{u : phi(u) < y} = inf{u : phi(u) >= y} for the continuous map.
    static double first_crossing(const Piecewise& m, double y) {
        const auto& k = m.knots;
        for (std::size_t i = 1; i < k.size(); ++i) {
            if (k[i].y >= y) {
                double w = (y - k[i - 1].y) / (k[i].y - k[i - 1].y);
                return k[i - 1].x + w * (k[i].x - k[i - 1].x);
            }
        }
        if (m.tail_slope > 0.0) return k.back().x + (y - k.back().y) / m.tail_slope;
        return kInf;
    }

    static bool strictly_increasing(const Piecewise& m) {
        if (!(m.tail_slope > 0.0)) return false;
        for (std::size_t i = 1; i < m.knots.size(); ++i)
            if (!(m.knots[i].y > m.knots[i - 1].y)) return false;
        return true;
    }

    Repr repr_;
};

namespace detail {

/// x -> F(phi(x)).
class ComposedSource final : public DdfSource {
public:
    ComposedSource(Ddf inner, PhiMap phi) : inner_(std::move(inner)), phi_(std::move(phi)) {}

    double eval(double x) const override { return inner_(phi_(x)); }

    double tail() const override {
        if (!std::isfinite(phi_.finite_extent())) {
            double lim = phi_.limit_at_infinity();
            return is_inf(lim) ? inner_.tail() : inner_(lim);
        }
        return 1.0;  // phi reaches inf at a finite point and F(inf) = 1
    }

    bool attains_one() const override {
        if (std::isfinite(phi_.finite_extent())) return true;
        if (!inner_.attains_one()) return false;
        double lim = phi_.limit_at_infinity();
        return is_inf(lim) || inner_(lim) >= 1.0;
    }

    double quasi_inverse(double t) const override {
        if (phi_.is_bijective()) {
            if (!(t > 0.0)) return 0.0;
            return phi_.inverse(inner_.quasi_inverse(t));
        }
        return DdfSource::quasi_inverse(t);
    }

    std::vector<double> knots() const override {
        std::vector<double> out;
        for (double k : inner_.knots()) out.push_back(phi_.upper_preimage(k));
        for (double k : phi_.knots()) out.push_back(k);
        return out;
    }

    std::string describe() const override { return inner_.describe() + " o " + phi_.describe(); }

    const Ddf& inner() const { return inner_; }
    const PhiMap& phi() const { return phi_; }

private:
    Ddf inner_;
    PhiMap phi_;
};

}  // namespace detail

/// outer o inner when both are powers or both linear.
inline std::optional<PhiMap> compose_simple(const PhiMap& outer, const PhiMap& inner) {
    const auto* po = std::get_if<PhiMap::Power>(&outer.repr());
    const auto* pi = std::get_if<PhiMap::Power>(&inner.repr());
    if (po && pi) return PhiMap::power(po->alpha * pi->alpha);
    const auto* lo = std::get_if<PhiMap::Linear>(&outer.repr());
    const auto* li = std::get_if<PhiMap::Linear>(&inner.repr());
    if (lo && li) return PhiMap::linear(lo->k * li->k);
    return std::nullopt;
}

/// x -> F(phi(x)). Stays in closed form for steps and for linear maps of scaled
/// bases; otherwise the composition is evaluated on demand.
inline Ddf transform_ddf(const Ddf& f, const PhiMap& phi) {
    if (phi.is_identity()) return f;
    if (const auto* lz = std::get_if<Ddf::Lazy>(&f.repr())) {
        // (F o a) o b = F o (a o b); a round trip collapses back to F.
        if (const auto* c = dynamic_cast<const detail::ComposedSource*>(lz->source.get())) {
            if (auto merged = compose_simple(c->phi(), phi)) return transform_ddf(c->inner(), *merged);
        }
    }
    if (const auto* s = std::get_if<Ddf::Step>(&f.repr())) {
        // eps_a(phi(x)) = 1 iff phi(x) > a, with phi(x) = inf counting as past every a.
        if (s->a == 0.0) return f;
        return Ddf::step(phi.upper_preimage(s->a));
    }
    if (const auto* s = std::get_if<Ddf::Scaled>(&f.repr())) {
        if (const auto* l = std::get_if<PhiMap::Linear>(&phi.repr())) return Ddf::scaled(s->base, s->scale / l->k);
    }
    return Ddf::lazy(std::make_shared<detail::ComposedSource>(f, phi));
}

}  // namespace pnkit
