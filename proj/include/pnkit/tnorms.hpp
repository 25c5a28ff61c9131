#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pnkit/base_cdf.hpp"
#include "pnkit/phi.hpp"
#include "pnkit/report.hpp"
#include "pnkit/sampling.hpp"

namespace pnkit {

/// Binary operation on [0, 1] that is meant to be a t-norm. Custom closures and
/// the G-generated family are not assumed to satisfy the axioms; the checker
/// decides.
class TNorm {
public:
    struct Min {};
    struct Product {};
    struct Lukasiewicz {};
    struct Drastic {};
    /// G(((G^-1 x)^e + (G^-1 y)^e)^(1/e)) with e = 1 / (1 - alpha).
    struct Tg {
        BaseCdf g;
        double alpha;
    };
    struct Custom {
        std::function<double(double, double)> fn;
        std::string name;
    };
    using Repr = std::variant<Min, Product, Lukasiewicz, Drastic, Tg, Custom>;

    static TNorm minimum() { return TNorm(Min{}); }
    static TNorm product() { return TNorm(Product{}); }
    static TNorm lukasiewicz() { return TNorm(Lukasiewicz{}); }
    static TNorm drastic() { return TNorm(Drastic{}); }
    static TNorm custom(std::function<double(double, double)> fn, std::string name = "custom") {
        return TNorm(Custom{std::move(fn), std::move(name)});
    }

    const Repr& repr() const { return repr_; }
    bool is_min() const { return std::holds_alternative<Min>(repr_); }
    bool is_drastic() const { return std::holds_alternative<Drastic>(repr_); }

    /// Set by make_tg when the parameters fall outside the range where the
    /// construction is known to yield a t-norm.
    const std::string& caveat() const { return caveat_; }

    double operator()(double x, double y) const {
        return std::visit(
            [x, y](const auto& t) -> double {
                using T = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<T, Min>)
                    return std::min(x, y);
                else if constexpr (std::is_same_v<T, Product>)
                    return x * y;
                else if constexpr (std::is_same_v<T, Lukasiewicz>)
                    return std::max(x + y - 1.0, 0.0);
                else if constexpr (std::is_same_v<T, Drastic>)
                    return x == 1.0 ? y : (y == 1.0 ? x : 0.0);
                else if constexpr (std::is_same_v<T, Tg>)
                    return eval_tg(t, x, y);
                else
                    return t.fn(x, y);
            },
            repr_);
    }

    std::string name() const {
        return std::visit(
            [](const auto& t) -> std::string {
                using T = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<T, Min>)
                    return "M";
                else if constexpr (std::is_same_v<T, Product>)
                    return "product";
                else if constexpr (std::is_same_v<T, Lukasiewicz>)
                    return "lukasiewicz";
                else if constexpr (std::is_same_v<T, Drastic>)
                    return "Z";
                else if constexpr (std::is_same_v<T, Tg>)
                    return "TG(" + t.g.name() + ", " + std::to_string(t.alpha) + ")";
                else
                    return t.name;
            },
            repr_);
    }

private:
    explicit TNorm(Repr r, std::string caveat = {}) : repr_(std::move(r)), caveat_(std::move(caveat)) {}
    friend TNorm make_tg(const BaseCdf& g, double alpha);

    static double eval_tg(const Tg& t, double x, double y) {
        // Continuous extension at the boundary: G^-1(1) is +inf (or the end of the
        // support), which drops out of the negative-exponent sum.
        if (x >= 1.0) return y;
        if (y >= 1.0) return x;
        if (x <= 0.0 || y <= 0.0) return 0.0;
        const double e = 1.0 / (1.0 - t.alpha);
        double u = t.g.quasi_inverse(x);
        double v = t.g.quasi_inverse(y);
        double s = std::pow(u, e) + std::pow(v, e);
        return t.g(std::pow(s, 1.0 / e));
    }

    Repr repr_;
    std::string caveat_;
};

/// The G-generated t-norm. G must be continuous and strictly increasing up to
/// the value 1.
inline TNorm make_tg(const BaseCdf& g, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("TG exponent must be positive");
    if (alpha == 1.0) throw std::invalid_argument("TG is undefined for alpha = 1");
    if (!g.strictly_increasing()) throw std::invalid_argument("TG needs a continuous strictly increasing G");
    if (g.tail() < 1.0) throw std::invalid_argument("TG needs G with limit 1; G^-1 is undefined above the tail");
    std::string caveat;
    if (alpha < 1.0) caveat = "alpha < 1: the construction is not a t-norm in general; check the axioms";
    return TNorm(TNorm::Tg{g, alpha}, std::move(caveat));
}

/// T*(x, y) = 1 - T(1 - x, 1 - y).
class TConorm {
public:
    explicit TConorm(TNorm t) : t_(std::move(t)) {}
    double operator()(double x, double y) const { return 1.0 - t_(1.0 - x, 1.0 - y); }
    const TNorm& tnorm() const { return t_; }

    /// The dual as a t-norm-shaped operation; dual(dual(T)) agrees with T pointwise.
    TNorm dual() const {
        TNorm t = t_;
        return TNorm::custom([t](double x, double y) { return 1.0 - t(1.0 - x, 1.0 - y); }, t_.name() + "*");
    }

private:
    TNorm t_;
};

inline TConorm dual(const TNorm& t) { return TConorm(t); }

inline double eval_tnorm(const TNorm& t, double x, double y) { return t(x, y); }

/// Samples the t-norm axioms on a pool of the lattice points {0, 1/4, 1/2, 3/4, 1}
/// plus seeded uniform draws.
inline CheckReport check_tnorm_axioms(const TNorm& t, int sample_count, std::uint64_t seed, double tol = 1e-9) {
    if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");
    Sampler rng(seed);
    std::vector<double> pool{0.0, 0.25, 0.5, 0.75, 1.0};
    for (int i = 0; i < sample_count; ++i) pool.push_back(rng.uniform());

    CheckReport rep;
    rep.subject = t.name();
    if (!t.caveat().empty()) rep.notes.push_back(t.caveat());

    AxiomResult comm("commutativity"), assoc("associativity"), mono("monotonicity"), ident("identity");
    auto pick = [&] { return pool[rng.index(pool.size())]; };
    for (double x : pool) ident.observe(std::abs(t(x, 1.0) - x), tol, {{"x", x}, {"y", 1.0}});
    for (std::size_t i = 0; i < pool.size(); ++i) {
        double x = pool[i], y = pick(), z = pick();
        comm.observe(std::abs(t(x, y) - t(y, x)), tol, {{"x", x}, {"y", y}});
        assoc.observe(std::abs(t(t(x, y), z) - t(x, t(y, z))), tol, {{"x", x}, {"y", y}, {"z", z}});
        double lo = std::min(y, z), hi = std::max(y, z);
        mono.observe(t(x, lo) - t(x, hi), tol, {{"x", x}, {"y", lo}, {"z", hi}});
        mono.observe(t(lo, x) - t(hi, x), tol, {{"x", lo}, {"y", x}, {"z", hi}});
    }
    rep.results = {comm, assoc, mono, ident};
    return rep;
}

/// Binary operation on [0, inf] used to constrain the convolution variables:
/// L(u, v) = x.
class LOp {
public:
    struct Sum {};
    struct PowerSum {
        double alpha;  ///< (x^(1/alpha) + y^(1/alpha))^alpha
    };
    struct FromPhi {
        PhiMap phi;  ///< phi^-1(phi(x) + phi(y))
    };
    using Repr = std::variant<Sum, PowerSum, FromPhi>;

    static LOp sum() { return LOp(Sum{}); }
    static LOp power_sum(double alpha) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("power_sum exponent must be positive");
        return LOp(PowerSum{alpha});
    }
    static LOp from_phi(PhiMap phi) {
        if (!phi.is_bijective()) throw std::invalid_argument("from_phi needs a bijective phi");
        return LOp(FromPhi{std::move(phi)});
    }

    const Repr& repr() const { return repr_; }
    bool is_sum() const { return std::holds_alternative<Sum>(repr_); }

    double operator()(double x, double y) const {
        return std::visit(
            [x, y](const auto& l) -> double {
                using T = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<T, Sum>)
                    return x + y;
                else if constexpr (std::is_same_v<T, PowerSum>) {
                    if (is_inf(x) || is_inf(y)) return kInf;
                    return std::pow(std::pow(x, 1.0 / l.alpha) + std::pow(y, 1.0 / l.alpha), l.alpha);
                } else
                    return l.phi.inverse(l.phi(x) + l.phi(y));
            },
            repr_);
    }

    /// The v >= 0 with L(u, v) = x, or a negative value when u > x.
    double solve_second(double x, double u) const {
        if (u > x) return -1.0;
        return std::visit(
            [x, u](const auto& l) -> double {
                using T = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<T, Sum>)
                    return std::max(x - u, 0.0);
                else if constexpr (std::is_same_v<T, PowerSum>)
                    return std::pow(std::max(std::pow(x, 1.0 / l.alpha) - std::pow(u, 1.0 / l.alpha), 0.0), l.alpha);
                else
                    return l.phi.inverse(std::max(l.phi(x) - l.phi(u), 0.0));
            },
            repr_);
    }

    /// L(cx, cy) = c L(x, y), which lets same-base scalings combine in closed form.
    bool homogeneous() const { return !std::holds_alternative<FromPhi>(repr_); }

    std::string name() const {
        return std::visit(
            [](const auto& l) -> std::string {
                using T = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<T, Sum>)
                    return "sum";
                else if constexpr (std::is_same_v<T, PowerSum>)
                    return "power_sum(" + std::to_string(l.alpha) + ")";
                else
                    return "from_phi(" + l.phi.describe() + ")";
            },
            repr_);
    }

private:
    explicit LOp(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

inline double eval_lop(const LOp& l, double x, double y) { return l(x, y); }

}  // namespace pnkit
