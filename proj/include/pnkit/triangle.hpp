#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pnkit/ddf.hpp"
#include "pnkit/phi.hpp"
#include "pnkit/report.hpp"
#include "pnkit/sampling.hpp"
#include "pnkit/tnorms.hpp"

namespace pnkit {

/// Binary operation on distance distribution functions.
class TriangleFn {
public:
    /// sup{T(F(u), G(v)) : u + v = x}
    struct TauT {
        TNorm t;
    };
    /// inf{T*(F(u), G(v)) : u + v = x}, T* the dual of t
    struct TauTStar {
        TNorm t;
    };
    /// sup{T(F(u), G(v)) : L(u, v) = x}
    struct TauTL {
        TNorm t;
        LOp l;
    };
    /// inf{T*(F(u), G(v)) : L(u, v) = x}
    struct TauTStarL {
        TNorm t;
        LOp l;
    };
    /// min(F(x), G(x))
    struct PointwiseM {};
    /// x -> base(F o phi^, G o phi^)(phi(x))
    struct PhiTransformed {
        std::shared_ptr<const TriangleFn> base;
        PhiMap phi;
    };
    using Repr = std::variant<TauT, TauTStar, TauTL, TauTStarL, PointwiseM, PhiTransformed>;

    static TriangleFn tau_t(TNorm t) { return TriangleFn(TauT{std::move(t)}); }
    static TriangleFn tau_t_star(TNorm t) { return TriangleFn(TauTStar{std::move(t)}); }
    static TriangleFn tau_tl(TNorm t, LOp l) { return TriangleFn(TauTL{std::move(t), std::move(l)}); }
    static TriangleFn tau_t_star_l(TNorm t, LOp l) { return TriangleFn(TauTStarL{std::move(t), std::move(l)}); }
    static TriangleFn tau_m() { return tau_t(TNorm::minimum()); }
    static TriangleFn tau_ml(LOp l) { return tau_tl(TNorm::minimum(), std::move(l)); }
    static TriangleFn pointwise_m() { return TriangleFn(PointwiseM{}); }
    static TriangleFn phi_transformed(TriangleFn base, PhiMap phi) {
        return TriangleFn(PhiTransformed{std::make_shared<const TriangleFn>(std::move(base)), std::move(phi)});
    }

    const Repr& repr() const { return repr_; }

    /// True when application stays on the quasi-inverse route (no grid search).
    bool exact_route() const {
        if (const auto* t = std::get_if<TauT>(&repr_)) return t->t.is_min();
        if (const auto* t = std::get_if<TauTL>(&repr_)) return t->t.is_min();
        if (std::holds_alternative<PointwiseM>(repr_)) return true;
        if (const auto* p = std::get_if<PhiTransformed>(&repr_)) return p->base->exact_route();
        return false;
    }

    std::string name() const {
        return std::visit(
            [](const auto& r) -> std::string {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, TauT>)
                    return "tauT(" + r.t.name() + ")";
                else if constexpr (std::is_same_v<T, TauTStar>)
                    return "tauTstar(" + r.t.name() + ")";
                else if constexpr (std::is_same_v<T, TauTL>)
                    return "tauTL(" + r.t.name() + ", " + r.l.name() + ")";
                else if constexpr (std::is_same_v<T, TauTStarL>)
                    return "tauTstarL(" + r.t.name() + ", " + r.l.name() + ")";
                else if constexpr (std::is_same_v<T, PointwiseM>)
                    return "pointwiseM";
                else
                    return "phi_transform(" + r.base->name() + ", " + r.phi.describe() + ")";
            },
            repr_);
    }

private:
    explicit TriangleFn(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

struct ApplyOptions {
    bool force_grid = false;  ///< route tau_M and tau_{M,L} through the grid search too
    int grid_points = 2048;
};

namespace detail {

/// tau_{M,L}(F, G) through its quasi-inverse: q(t) = L(F^(t), G^(t)).
class QuasiSumSource final : public DdfSource {
public:
    QuasiSumSource(Ddf f, Ddf g, LOp l) : f_(std::move(f)), g_(std::move(g)), l_(std::move(l)) {}

    double eval(double x) const override {
        // F(x) = sup{t : q(t) < x} for left-continuous F.
        return sup_true(0.0, 1.0, [&](double t) { return t <= 0.0 || quasi_inverse(t) < x; });
    }
    double tail() const override { return std::min(f_.tail(), g_.tail()); }
    bool attains_one() const override { return f_.attains_one() && g_.attains_one(); }
    double quasi_inverse(double t) const override {
        if (!(t > 0.0)) return 0.0;
        return l_(f_.quasi_inverse(t), g_.quasi_inverse(t));
    }
    std::vector<double> knots() const override {
        auto kf = f_.knots(), kg = g_.knots();
        kf.push_back(0.0);
        kg.push_back(0.0);
        std::vector<double> out;
        for (double a : kf)
            for (double b : kg) out.push_back(l_(a, b));
        return out;
    }
    std::string describe() const override {
        return "qsum[" + l_.name() + "](" + f_.describe() + ", " + g_.describe() + ")";
    }

private:
    Ddf f_, g_;
    LOp l_;
};

/// Grid sup- or inf-convolution over the curve L(u, v) = x.
class ConvolutionSource final : public DdfSource {
public:
    ConvolutionSource(Ddf f, Ddf g, TNorm t, LOp l, bool sup_mode, int grid_points)
        : f_(std::move(f)), g_(std::move(g)), t_(std::move(t)), l_(std::move(l)),
          sup_(sup_mode), n_(std::max(grid_points, 16)), kf_(f_.knots()), kg_(g_.knots()),
          one_f_(f_.quasi_inverse(1.0)), one_g_(g_.quasi_inverse(1.0)) {}

    double eval(double x) const override {
        if (!(x > 0.0)) return 0.0;
        auto value = [&](double u) {
            if (u < 0.0) u = 0.0;
            if (u > x) u = x;
            double v = l_.solve_second(x, u);
            double a = f_(u), b = g_(v);
            if (!sup_) return 1.0 - t_(1.0 - a, 1.0 - b);
            // A value that rounded to 1 before F truly reaches 1 would be read as
            // the identity of T; t-norms like T_G approach that limit only
            // logarithmically. The true value is at least the largest double
            // below 1, so evaluating there keeps the sample a lower bound.
            constexpr double below_one = 1.0 - 0x1.0p-53;
            if (a >= 1.0 && !(u > one_f_)) a = below_one;
            if (b >= 1.0 && !(v > one_g_)) b = below_one;
            return t_(a, b);
        };
        auto better = [&](double a, double b) { return sup_ ? a > b : a < b; };

        double best = value(0.0);
        double best_u = 0.0;
        const double h = x / n_;
        for (int i = 1; i <= n_; ++i) {
            double u = (i == n_) ? x : h * i;
            double v = value(u);
            if (better(v, best)) {
                best = v;
                best_u = u;
            }
        }
        // Jumps sit at knots; the open intervals between them are covered by midpoints.
        std::vector<double> special;
        for (double k : kf_) {
            if (k > x) break;
            special.push_back(k);
            special.push_back(k + right_nudge(k));
        }
        for (double k : kg_) {
            if (k > x) break;
            double u = l_.solve_second(x, k);
            if (u >= 0.0) {
                special.push_back(u);
                special.push_back(u - right_nudge(u));
            }
        }
        if (!special.empty()) {
            special.push_back(0.0);
            special.push_back(x);
            sort_unique(special);
            std::size_t m = special.size();
            for (std::size_t i = 0; i + 1 < m; ++i) special.push_back(0.5 * (special[i] + special[i + 1]));
            for (double u : special) {
                if (u < 0.0 || u > x) continue;
                double v = value(u);
                if (better(v, best)) {
                    best = v;
                    best_u = u;
                }
            }
        }
        double a = std::max(0.0, best_u - h), b = std::min(x, best_u + h);
        if (b > a) {
            double r = golden_extremum(a, b, value, sup_, 40);
            if (better(r, best)) best = r;
        }
        return std::clamp(best, 0.0, 1.0);
    }

    double tail() const override {
        double tf = f_.tail(), tg = g_.tail();
        if (!sup_) return std::min(tf, tg);
        if (t_.is_drastic()) {
            if (f_.attains_one()) return tg;
            if (g_.attains_one()) return tf;
            return 0.0;
        }
        return t_(tf, tg);
    }
    bool attains_one() const override { return f_.attains_one() && g_.attains_one(); }
    std::vector<double> knots() const override {
        auto kf = kf_, kg = kg_;
        kf.push_back(0.0);
        kg.push_back(0.0);
        std::vector<double> out;
        for (double a : kf)
            for (double b : kg) out.push_back(l_(a, b));
        return out;
    }
    std::string describe() const override {
        return std::string(sup_ ? "supconv" : "infconv") + "[" + t_.name() + ", " + l_.name() + "](" +
               f_.describe() + ", " + g_.describe() + ")";
    }

private:
    Ddf f_, g_;
    TNorm t_;
    LOp l_;
    bool sup_;
    int n_;
    std::vector<double> kf_, kg_;
    double one_f_, one_g_;  ///< where each input reaches 1, inf if never
};

inline Ddf quasi_sum(const Ddf& f, const Ddf& g, const LOp& l) {
    const auto* sf = std::get_if<Ddf::Step>(&f.repr());
    const auto* sg = std::get_if<Ddf::Step>(&g.repr());
    if (sf && sg) return Ddf::step(l(sf->a, sg->a));
    const auto* cf = std::get_if<Ddf::Scaled>(&f.repr());
    const auto* cg = std::get_if<Ddf::Scaled>(&g.repr());
    if (cf && cg && cf->base == cg->base && l.homogeneous()) return Ddf::scaled(cf->base, l(cf->scale, cg->scale));
    return Ddf::lazy(std::make_shared<QuasiSumSource>(f, g, l));
}

}  // namespace detail

/// tau(F, G). tau_M and tau_{M,L} use quasi-inverse addition, which is exact for
/// steps and same-base scalings; every other form runs the grid search.
inline Ddf apply(const TriangleFn& tau, const Ddf& f, const Ddf& g, const ApplyOptions& opt = {}) {
    return std::visit(
        [&](const auto& r) -> Ddf {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, TriangleFn::PointwiseM>) {
                return pointwise_min({f, g});
            } else if constexpr (std::is_same_v<T, TriangleFn::PhiTransformed>) {
                if (r.phi.is_bijective()) {
                    if (f.is_eps0()) return g;
                    if (g.is_eps0()) return f;
                }
                PhiMap q = r.phi.quasi_inverse();
                Ddf inner = apply(*r.base, transform_ddf(f, q), transform_ddf(g, q), opt);
                return transform_ddf(inner, r.phi);
            } else {
                LOp l = LOp::sum();
                bool sup_mode = true;
                if constexpr (std::is_same_v<T, TriangleFn::TauTL> || std::is_same_v<T, TriangleFn::TauTStarL>)
                    l = r.l;
                if constexpr (std::is_same_v<T, TriangleFn::TauTStar> || std::is_same_v<T, TriangleFn::TauTStarL>)
                    sup_mode = false;
                if (f.is_eps0()) return g;
                if (g.is_eps0()) return f;
                if (sup_mode && r.t.is_min() && !opt.force_grid) return detail::quasi_sum(f, g, l);
                return Ddf::lazy(std::make_shared<detail::ConvolutionSource>(f, g, r.t, l, sup_mode, opt.grid_points));
            }
        },
        tau.repr());
}

/// tau^phi; the identity map leaves tau unchanged.
inline TriangleFn phi_transform_triangle(const TriangleFn& tau, const PhiMap& phi) {
    if (phi.is_identity()) return tau;
    return TriangleFn::phi_transformed(tau, phi);
}

enum class Ordering { le, ge, eq, incomparable };

inline const char* to_string(Ordering o) {
    switch (o) {
        case Ordering::le: return "le";
        case Ordering::ge: return "ge";
        case Ordering::eq: return "eq";
        default: return "incomparable";
    }
}

struct Comparison {
    Ordering order = Ordering::eq;
    double max_above = 0.0;  ///< max over x of a(x) - b(x)
    double max_below = 0.0;  ///< max over x of b(x) - a(x)
    double x_above = 0.0;
    double x_below = 0.0;
};

/// Classifies a against b on the grid, treating differences up to tol as ties.
inline Comparison compare_pointwise(const Ddf& a, const Ddf& b, const std::vector<double>& xs, double tol) {
    Comparison c;
    for (double x : xs) {
        double d = a(x) - b(x);
        if (d > c.max_above) {
            c.max_above = d;
            c.x_above = x;
        }
        if (-d > c.max_below) {
            c.max_below = -d;
            c.x_below = x;
        }
    }
    bool above = c.max_above > tol, below = c.max_below > tol;
    c.order = above ? (below ? Ordering::incomparable : Ordering::ge) : (below ? Ordering::le : Ordering::eq);
    return c;
}

/// Abscissae for comparing results built from the given inputs: each input's
/// grid, their knots, and pairwise knot sums.
inline std::vector<double> comparison_grid(const std::vector<Ddf>& inputs, int levels = 12) {
    std::vector<double> xs = evaluation_grid(inputs, levels);
    std::vector<double> ks;
    for (const auto& f : inputs) {
        auto k = f.knots();
        ks.insert(ks.end(), k.begin(), k.end());
    }
    sort_unique(ks);
    if (ks.size() <= 16) {
        for (double a : ks)
            for (double b : ks) {
                xs.push_back(a + b);
                xs.push_back(a + b + right_nudge(a + b));
            }
    }
    std::erase_if(xs, [](double v) { return !(v > 0.0) || !std::isfinite(v); });
    sort_unique(xs);
    return xs;
}

/// Samples the triangle-function axioms on the given DDFs: commutativity, the
/// identity eps_0 (checked exactly), monotonicity against min(F, H) <= F, and
/// associativity on triples at tol_grid.
inline CheckReport check_triangle_axioms(const TriangleFn& tau, const std::vector<Ddf>& samples, std::uint64_t seed,
                                         const Tolerances& tol = {}) {
    if (samples.size() < 3) throw std::invalid_argument("at least 3 sample DDFs are required");
    CheckReport rep;
    rep.subject = tau.name();
    const bool exact = tau.exact_route();
    const std::string path = exact ? "exact" : "grid";
    const double eq_tol = exact ? tol.exact : tol.grid;
    Sampler rng(seed);

    AxiomResult comm("commutativity", path), ident("identity", path), mono("monotonicity", path),
        assoc("associativity", "grid");
    const Ddf e0 = make_eps(0.0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Ddf& f = samples[i];
        auto xs = comparison_grid({f});
        Ddf left = apply(tau, e0, f), right = apply(tau, f, e0);
        for (double x : xs) {
            ident.observe(std::max(std::abs(left(x) - f(x)), std::abs(right(x) - f(x))), tol.exact,
                          {{"sample", double(i)}, {"x", x}});
        }
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            const Ddf& g = samples[j];
            auto xg = comparison_grid({f, g});
            Ddf fg = apply(tau, f, g), gf = apply(tau, g, f);
            for (double x : xg)
                comm.observe(std::abs(fg(x) - gf(x)), eq_tol, {{"i", double(i)}, {"j", double(j)}, {"x", x}});
            // min(F, H) <= F must give tau(min(F, H), G) <= tau(F, G)
            const Ddf& h = samples[rng.index(samples.size())];
            Ddf lower = apply(tau, pointwise_min({f, h}), g);
            for (double x : xg)
                mono.observe(lower(x) - fg(x), eq_tol, {{"i", double(i)}, {"j", double(j)}, {"x", x}});
        }
    }
    // Nested grid convolutions are quadratic in the grid size; a coarser grid
    // keeps associativity affordable while staying within tol_grid.
    ApplyOptions coarse;
    coarse.grid_points = 384;
    const std::size_t n = samples.size();
    for (std::size_t r = 0; r < std::min<std::size_t>(n, 3); ++r) {
        std::size_t i = r, j = (r + 1) % n, k = (r + 2) % n;
        const Ddf &f = samples[i], &g = samples[j], &h = samples[k];
        Ddf lhs = apply(tau, apply(tau, f, g, coarse), h, coarse);
        Ddf rhs = apply(tau, f, apply(tau, g, h, coarse), coarse);
        auto xs = comparison_grid({f, g, h}, 4);
        if (xs.size() > 12) {
            std::vector<double> thin;
            for (std::size_t s = 0; s < 12; ++s) thin.push_back(xs[s * xs.size() / 12]);
            xs = thin;
        }
        for (double x : xs)
            assoc.observe(std::abs(lhs(x) - rhs(x)), tol.grid,
                          {{"i", double(i)}, {"j", double(j)}, {"k", double(k)}, {"x", x}});
    }
    rep.results = {comm, ident, mono, assoc};
    return rep;
}

}  // namespace pnkit
