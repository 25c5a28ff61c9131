#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pnkit/ddf.hpp"
#include "pnkit/phi.hpp"
#include "pnkit/report.hpp"
#include "pnkit/sampling.hpp"
#include "pnkit/tnorms.hpp"
#include "pnkit/triangle.hpp"

namespace pnkit {

using Vec = std::vector<double>;

enum class NormKind { l1, l2, linf };

inline const char* to_string(NormKind k) {
    switch (k) {
        case NormKind::l1: return "l1";
        case NormKind::l2: return "l2";
        default: return "linf";
    }
}

/// R^n with one of the standard norms.
struct VectorSpace {
    std::size_t dim = 1;
    NormKind kind = NormKind::l2;

    double norm(const Vec& p) const {
        if (p.size() != dim) throw std::invalid_argument("vector dimension mismatch");
        double s = 0.0;
        for (double c : p) {
            switch (kind) {
                case NormKind::l1: s += std::abs(c); break;
                case NormKind::l2: s = std::hypot(s, c); break;
                case NormKind::linf: s = std::max(s, std::abs(c)); break;
            }
        }
        return s;
    }
    Vec zero() const { return Vec(dim, 0.0); }
};

inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}
inline Vec operator*(double s, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}
inline bool is_zero(const Vec& p) {
    return std::all_of(p.begin(), p.end(), [](double c) { return c == 0.0; });
}

/// Functional g: V -> R+ meant to be an F-norm.
class FNorm {
public:
    struct PlainNorm {};
    struct NormPower {
        double alpha;  ///< ||p||^alpha
    };
    struct NormRatio {
        double a;  ///< ||p|| / (a + ||p||)
    };
    struct Custom {
        std::function<double(const Vec&)> fn;
        std::string name;
    };
    using Repr = std::variant<PlainNorm, NormPower, NormRatio, Custom>;

    static FNorm plain() { return FNorm(PlainNorm{}); }
    static FNorm norm_power(double alpha) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("norm_power exponent must be positive");
        return FNorm(NormPower{alpha});
    }
    static FNorm norm_ratio(double a) {
        if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("norm_ratio offset must be positive");
        return FNorm(NormRatio{a});
    }
    static FNorm custom(std::function<double(const Vec&)> fn, std::string name = "custom") {
        return FNorm(Custom{std::move(fn), std::move(name)});
    }

    const Repr& repr() const { return repr_; }

    /// Depends on p only through ||p||.
    bool radial() const { return !std::holds_alternative<Custom>(repr_); }

    /// g as a function of the norm; only for radial variants.
    double profile(double m) const {
        if (is_inf(m)) return sup_profile();
        return std::visit(
            [m](const auto& g) -> double {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, PlainNorm>)
                    return m;
                else if constexpr (std::is_same_v<T, NormPower>)
                    return std::pow(m, g.alpha);
                else if constexpr (std::is_same_v<T, NormRatio>)
                    return m / (g.a + m);
                else
                    throw std::logic_error("custom F-norm has no radial profile");
            },
            repr_);
    }

    /// lim_{m -> inf} profile(m); never attained.
    double sup_profile() const {
        if (std::holds_alternative<NormRatio>(repr_)) return 1.0;
        if (std::holds_alternative<Custom>(repr_)) throw std::logic_error("custom F-norm has no radial profile");
        return kInf;
    }

    double operator()(const VectorSpace& v, const Vec& p) const {
        if (const auto* c = std::get_if<Custom>(&repr_)) return c->fn(p);
        return profile(v.norm(p));
    }

    std::string name() const {
        return std::visit(
            [](const auto& g) -> std::string {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, PlainNorm>)
                    return "plain";
                else if constexpr (std::is_same_v<T, NormPower>)
                    return "norm_power(" + std::to_string(g.alpha) + ")";
                else if constexpr (std::is_same_v<T, NormRatio>)
                    return "norm_ratio(" + std::to_string(g.a) + ")";
                else
                    return g.name;
            },
            repr_);
    }

private:
    explicit FNorm(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

/// Probabilistic norm p -> nu_p.
class ProbNorm {
public:
    struct Simple {
        BaseCdf g;  ///< nu_p(x) = G(x / ||p||)
    };
    struct AlphaSimple {
        BaseCdf g;
        double alpha;  ///< nu_p(x) = G(x / ||p||^alpha)
    };
    struct EpsOfG {
        FNorm g;  ///< nu_p = eps_{g(p)}
    };
    struct Transformed {
        std::shared_ptr<const ProbNorm> base;
        PhiMap phi;  ///< nu_p = base_p o phi
    };
    using Repr = std::variant<Simple, AlphaSimple, EpsOfG, Transformed>;

    static ProbNorm simple(BaseCdf g) { return ProbNorm(Simple{std::move(g)}); }
    static ProbNorm alpha_simple(BaseCdf g, double alpha) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
        return ProbNorm(AlphaSimple{std::move(g), alpha});
    }
    static ProbNorm eps_of_g(FNorm g) { return ProbNorm(EpsOfG{std::move(g)}); }
    static ProbNorm transformed(ProbNorm base, PhiMap phi) {
        return ProbNorm(Transformed{std::make_shared<const ProbNorm>(std::move(base)), std::move(phi)});
    }

    const Repr& repr() const { return repr_; }

    bool radial() const {
        if (const auto* e = std::get_if<EpsOfG>(&repr_)) return e->g.radial();
        if (const auto* t = std::get_if<Transformed>(&repr_)) return t->base->radial();
        return true;
    }

    /// nu_p for a radial norm, as a function of m = ||p||; eps_0 at m = 0.
    Ddf at_magnitude(double m) const {
        if (m == 0.0) return make_eps(0.0);
        return std::visit(
            [m](const auto& r) -> Ddf {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Simple>)
                    return Ddf::scaled(r.g, m);
                else if constexpr (std::is_same_v<T, AlphaSimple>)
                    return Ddf::scaled(r.g, std::pow(m, r.alpha));
                else if constexpr (std::is_same_v<T, EpsOfG>)
                    return make_eps(r.g.profile(m));
                else
                    return transform_ddf(r.base->at_magnitude(m), r.phi);
            },
            repr_);
    }

    Ddf nu(const VectorSpace& v, const Vec& p) const {
        if (is_zero(p)) return make_eps(0.0);
        return std::visit(
            [&](const auto& r) -> Ddf {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, EpsOfG>)
                    return make_eps(r.g(v, p));
                else if constexpr (std::is_same_v<T, Transformed>)
                    return transform_ddf(r.base->nu(v, p), r.phi);
                else
                    return at_magnitude(v.norm(p));
            },
            repr_);
    }

    /// lim_{m -> inf} nu_m(x) for x > 0; radial variants only.
    double limit_inf_mag(double x) const {
        if (is_inf(x)) return 1.0;
        return std::visit(
            [x](const auto& r) -> double {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Simple> || std::is_same_v<T, AlphaSimple>)
                    return r.g.right_limit(0.0);
                else if constexpr (std::is_same_v<T, EpsOfG>) {
                    // eps_{g_m}(x) with g_m increasing to s: 1 iff x >= s
                    double s = r.g.sup_profile();
                    return x >= s ? 1.0 : 0.0;
                } else
                    return r.base->limit_inf_mag(r.phi(x));
            },
            repr_);
    }

    /// lim_{m -> 0+} nu_m(x) for x > 0; radial variants only.
    double limit_zero_mag(double x) const {
        if (is_inf(x)) return 1.0;
        return std::visit(
            [x](const auto& r) -> double {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Simple> || std::is_same_v<T, AlphaSimple>)
                    return r.g.tail();
                else if constexpr (std::is_same_v<T, EpsOfG>)
                    return 1.0;
                else
                    return r.base->limit_zero_mag(r.phi(x));
            },
            repr_);
    }

    /// l^- inf over an unbounded set of magnitudes, in closed form.
    Ddf radius_unbounded() const {
        return std::visit(
            [](const auto& r) -> Ddf {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Simple> || std::is_same_v<T, AlphaSimple>) {
                    double c = r.g.right_limit(0.0);
                    if (c <= 0.0) return make_eps(kInf);
                    return Ddf::breakpoints(PiecewiseLinear({{0.0, 0.0, c}}));
                } else if constexpr (std::is_same_v<T, EpsOfG>) {
                    return make_eps(r.g.sup_profile());
                } else {
                    return transform_ddf(r.base->radius_unbounded(), r.phi);
                }
            },
            repr_);
    }

    std::string name() const {
        return std::visit(
            [](const auto& r) -> std::string {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Simple>)
                    return "simple(" + r.g.name() + ")";
                else if constexpr (std::is_same_v<T, AlphaSimple>)
                    return "alpha_simple(" + r.g.name() + ", " + std::to_string(r.alpha) + ")";
                else if constexpr (std::is_same_v<T, EpsOfG>)
                    return "eps_of_g(" + r.g.name() + ")";
                else
                    return "transformed(" + r.base->name() + ", " + r.phi.describe() + ")";
            },
            repr_);
    }

private:
    explicit ProbNorm(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

/// A candidate PN space (V, nu, tau, tau*).
struct PNSpaceModel {
    VectorSpace space;
    ProbNorm prob;
    TriangleFn tau;
    TriangleFn tau_star;

    Ddf nu(const Vec& p) const { return prob.nu(space, p); }
    double norm(const Vec& p) const { return space.norm(p); }
};

inline Ddf nu(const PNSpaceModel& s, const Vec& p) { return s.nu(p); }

/// (V, nu o phi, tau^phi, (tau*)^phi).
inline PNSpaceModel transform_space(const PNSpaceModel& s, const PhiMap& phi) {
    if (phi.is_identity()) return s;
    return PNSpaceModel{s.space, ProbNorm::transformed(s.prob, phi), phi_transform_triangle(s.tau, phi),
                        phi_transform_triangle(s.tau_star, phi)};
}

namespace detail {

/// Direction of unit length in the space norm times a log-uniform magnitude.
inline Vec sample_vector(const VectorSpace& v, Sampler& rng, double lo = 1e-3, double hi = 1e3) {
    Vec d = rng.direction(v.dim);
    double n = v.norm(d);
    double m = rng.log_uniform(lo, hi);
    return (m / n) * d;
}

inline std::vector<double> sample_lambdas(Sampler& rng, int count) {
    std::vector<double> ls{0.0, 0.5, 1.0};
    for (int i = 3; i < count; ++i) ls.push_back(rng.uniform());
    return ls;
}

/// Scalars for the scaling laws, both signs, excluding 0.
inline std::vector<double> sample_scalars(Sampler& rng, int count) {
    std::vector<double> ls{0.5, -0.5, 2.0, -2.0, 1.0 / 3.0, -1.0 / 3.0, 3.0, -3.0};
    while (static_cast<int>(ls.size()) < count) {
        double l = rng.log_uniform(1e-2, 1e2);
        ls.push_back(rng.uniform() < 0.5 ? -l : l);
    }
    return ls;
}

inline Witness vec_witness(const std::string& tag, const Vec& p) {
    Witness w;
    for (std::size_t i = 0; i < p.size(); ++i) w.emplace_back(tag + "[" + std::to_string(i) + "]", p[i]);
    return w;
}

inline Witness join(Witness a, const Witness& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace detail

/// Samples (N1)-(N4). Inequalities are checked on x-grids built from the
/// quantiles and knots of the DDFs involved; tol_exact applies when both
/// triangle functions stay on the quasi-inverse route, tol_grid otherwise.
inline CheckReport check_pn_axioms(const PNSpaceModel& s, int sample_count, std::uint64_t seed,
                                   const Tolerances& tol = {}) {
    if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");
    Sampler rng(seed);
    CheckReport rep;
    rep.subject = s.prob.name() + " with (" + s.tau.name() + ", " + s.tau_star.name() + ")";
    const std::string p3 = s.tau.exact_route() ? "exact" : "grid";
    const std::string p4 = s.tau_star.exact_route() ? "exact" : "grid";
    const double t3 = s.tau.exact_route() ? tol.exact : tol.grid;
    const double t4 = s.tau_star.exact_route() ? tol.exact : tol.grid;

    AxiomResult n1("N1"), n2("N2"), n3("N3", p3), n4("N4", p4);
    const Vec theta = s.space.zero();
    n1.observe(s.nu(theta).is_eps0() ? 0.0 : 1.0, 0.0, {{"theta", 0.0}});

    auto lambdas = detail::sample_lambdas(rng, std::max(sample_count, 3));
    for (int i = 0; i < sample_count; ++i) {
        Vec p = detail::sample_vector(s.space, rng);
        Vec q = detail::sample_vector(s.space, rng);
        Ddf np = s.nu(p), nq = s.nu(q);
        // nu_p = eps_0 iff nu_p reaches 1 immediately after 0
        n1.observe(np.quasi_inverse(1.0) > 0.0 ? 0.0 : 1.0, 0.0, detail::vec_witness("p", p));

        Ddf nm = s.nu(-1.0 * p);
        for (double x : comparison_grid({np, nm}, 8))
            n2.observe(std::abs(np(x) - nm(x)), tol.exact, detail::join(detail::vec_witness("p", p), {{"x", x}}));

        Ddf npq = s.nu(p + q);
        Ddf conv = apply(s.tau, np, nq);
        for (double x : comparison_grid({np, nq, npq}, 8))
            n3.observe(conv(x) - npq(x), t3,
                       detail::join(detail::join(detail::vec_witness("p", p), detail::vec_witness("q", q)),
                                    {{"x", x}, {"lhs", npq(x)}, {"rhs", conv(x)}}));

        double lam = lambdas[static_cast<std::size_t>(i) % lambdas.size()];
        Ddf a = s.nu(lam * p), b = s.nu((1.0 - lam) * p);
        Ddf star = apply(s.tau_star, a, b);
        for (double x : comparison_grid({np, a, b}, 8))
            n4.observe(np(x) - star(x), t4,
                       detail::join(detail::vec_witness("p", p), {{"lambda", lam}, {"x", x}, {"lhs", np(x)}, {"rhs", star(x)}}));
    }
    rep.results = {n1, n2, n3, n4};
    return rep;
}

/// Which scaling law to test.
struct SerstnevKind {
    enum class Kind { plain, alpha, phi } kind = Kind::plain;
    double alpha = 1.0;
    std::optional<PhiMap> phi;

    static SerstnevKind plain() { return {}; }
    static SerstnevKind with_alpha(double a) { return {Kind::alpha, a, std::nullopt}; }
    static SerstnevKind with_phi(PhiMap p) { return {Kind::phi, 1.0, std::move(p)}; }

    /// The argument at which nu_p is evaluated to predict nu_{lambda p}(x).
    double argument(double x, double lam) const {
        double a = std::abs(lam);
        switch (kind) {
            case Kind::plain: return x / a;
            case Kind::alpha: return x / std::pow(a, alpha);
            default: return phi->quasi_inverse()((*phi)(x) / a);
        }
    }
    std::string name() const {
        switch (kind) {
            case Kind::plain: return "serstnev";
            case Kind::alpha: return "alpha_serstnev(" + std::to_string(alpha) + ")";
            default: return "phi_serstnev(" + phi->describe() + ")";
        }
    }
};

namespace detail {

/// Distance from v to the values F takes within a relative 1e-12 of arg. Jumps
/// sit exactly on grid points, where the rescaled argument can land one ulp off.
inline double gap_near(const Ddf& f, double arg, double v) {
    if (!std::isfinite(arg)) return std::abs(f(arg) - v);
    double lo = f(arg * (1.0 - 1e-12)), hi = f(arg * (1.0 + 1e-12));
    if (v < lo) return lo - v;
    if (v > hi) return v - hi;
    return 0.0;
}

}  // namespace detail

/// Tests nu_{lambda p}(x) against nu_p at the rescaled argument over sampled
/// (p, lambda != 0, x).
inline CheckReport check_serstnev(const PNSpaceModel& s, const SerstnevKind& kind, int sample_count,
                                  std::uint64_t seed, const Tolerances& tol = {}) {
    Sampler rng(seed);
    CheckReport rep;
    rep.subject = s.prob.name();
    AxiomResult r(kind.name());
    auto scalars = detail::sample_scalars(rng, std::max(sample_count, 8));
    for (int i = 0; i < sample_count; ++i) {
        Vec p = detail::sample_vector(s.space, rng);
        double lam = scalars[static_cast<std::size_t>(i) % scalars.size()];
        Ddf np = s.nu(p), nl = s.nu(lam * p);
        for (double x : comparison_grid({np, nl}, 8)) {
            double arg = kind.argument(x, lam);
            double lhs = nl(x), rhs = np(arg);
            r.observe(detail::gap_near(np, arg, lhs), tol.exact,
                      detail::join(detail::vec_witness("p", p), {{"lambda", lam}, {"x", x}, {"lhs", lhs}, {"rhs", rhs}}));
        }
    }
    rep.results = {r};
    return rep;
}

/// Levels t for quasi-inverse identities; t = 1 is included since the
/// quasi-inverse may be infinite there.
inline std::vector<double> sample_levels(Sampler& rng, int count) {
    std::vector<double> ts{0.25, 0.5, 0.75, 1.0};
    while (static_cast<int>(ts.size()) < count) ts.push_back(1.0 - rng.uniform());
    return ts;
}

/// nu_p^ = L(nu_{lambda p}^, nu_{(1-lambda) p}^) with L built from phi, next to
/// the phi-scaling law and (N2) on the same samples. The two verdicts must agree.
inline CheckReport check_characterization_phiS(const PNSpaceModel& s, const PhiMap& phi, int sample_count,
                                               std::uint64_t seed, const Tolerances& tol = {}) {
    if (!phi.is_bijective()) throw std::invalid_argument("characterization needs a bijective phi");
    const LOp l = LOp::from_phi(phi);
    Sampler rng(seed);
    CheckReport rep;
    rep.subject = s.prob.name() + " with L = " + l.name();
    AxiomResult ident("quasi_inverse_identity"), law("phi_serstnev"), n2("N2"), agree("equivalence");
    auto lambdas = detail::sample_lambdas(rng, std::max(sample_count, 3));
    auto ts = sample_levels(rng, 8);
    const auto kind = SerstnevKind::with_phi(phi);
    for (int i = 0; i < sample_count; ++i) {
        Vec p = detail::sample_vector(s.space, rng);
        double lam = lambdas[static_cast<std::size_t>(i) % lambdas.size()];
        Ddf np = s.nu(p), a = s.nu(lam * p), b = s.nu((1.0 - lam) * p);
        for (double t : ts) {
            double lhs = np.quasi_inverse(t), rhs = l(a.quasi_inverse(t), b.quasi_inverse(t));
            double dev = close_rel(lhs, rhs, tol.exact) ? 0.0 : (std::isfinite(lhs - rhs) ? std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}) : 1.0);
            ident.observe(dev, tol.exact,
                          detail::join(detail::vec_witness("p", p), {{"lambda", lam}, {"t", t}, {"lhs", lhs}, {"rhs", rhs}}));
        }
        Ddf nm = s.nu(-1.0 * p);
        for (double x : comparison_grid({np}, 8))
            n2.observe(std::abs(np(x) - nm(x)), tol.exact, detail::join(detail::vec_witness("p", p), {{"x", x}}));
        if (lam != 0.0) {
            for (double x : comparison_grid({np, a}, 8)) {
                double arg = kind.argument(x, lam);
                law.observe(detail::gap_near(np, arg, a(x)), tol.exact,
                            detail::join(detail::vec_witness("p", p), {{"lambda", lam}, {"x", x}}));
            }
        }
    }
    bool char_ok = ident.passed && n2.passed;
    agree.observe(char_ok == law.passed ? 0.0 : 1.0, 0.0, {{"characterization", double(char_ok)}, {"scaling_law", double(law.passed)}});
    rep.results = {ident, n2, law, agree};
    return rep;
}

inline double beta_of(double lambda, double alpha) {
    if (lambda <= 0.0 || lambda >= 1.0) return 1.0;
    return std::pow(std::pow(lambda, alpha) + std::pow(1.0 - lambda, alpha), 1.0 / alpha);
}

/// nu_{beta p} = tau_M(nu_{lambda p}, nu_{(1-lambda) p}) in its quasi-inverse form
/// nu_{beta p}^ = nu_{lambda p}^ + nu_{(1-lambda) p}^, plus the distribution-level
/// identity on an x-grid.
inline CheckReport check_characterization_alphaS(const PNSpaceModel& s, double alpha, int sample_count,
                                                 std::uint64_t seed, const Tolerances& tol = {}) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    Sampler rng(seed);
    CheckReport rep;
    rep.subject = s.prob.name() + " with alpha = " + std::to_string(alpha);
    AxiomResult qi("beta_quasi_inverse"), dist("beta_distribution");
    auto lambdas = detail::sample_lambdas(rng, std::max(sample_count, 3));
    auto ts = sample_levels(rng, 8);
    const TriangleFn tau_m = TriangleFn::tau_m();
    for (int i = 0; i < sample_count; ++i) {
        Vec p = detail::sample_vector(s.space, rng);
        double lam = lambdas[static_cast<std::size_t>(i) % lambdas.size()];
        double beta = beta_of(lam, alpha);
        Ddf nb = s.nu(beta * p), a = s.nu(lam * p), b = s.nu((1.0 - lam) * p);
        for (double t : ts) {
            double lhs = nb.quasi_inverse(t), rhs = a.quasi_inverse(t) + b.quasi_inverse(t);
            double dev = close_rel(lhs, rhs, tol.exact) ? 0.0 : (std::isfinite(lhs - rhs) ? std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}) : 1.0);
            qi.observe(dev, tol.exact,
                       detail::join(detail::vec_witness("p", p), {{"lambda", lam}, {"beta", beta}, {"t", t}, {"lhs", lhs}, {"rhs", rhs}}));
        }
        Ddf conv = apply(tau_m, a, b);
        for (double x : comparison_grid({nb, a, b}, 8))
            dist.observe(std::abs(nb(x) - conv(x)), tol.exact,
                         detail::join(detail::vec_witness("p", p), {{"lambda", lam}, {"beta", beta}, {"x", x}}));
    }
    rep.results = {qi, dist};
    return rep;
}

enum class Relation { better, worse, equal, incomparable };

inline const char* to_string(Relation r) {
    switch (r) {
        case Relation::better: return "better";
        case Relation::worse: return "worse";
        case Relation::equal: return "equal";
        default: return "incomparable";
    }
}

struct BetterResult {
    Relation relation = Relation::equal;
    CheckReport report;
};

/// Compares tau_1 >= tau_2 on (nu_p, nu_q) and tau*_1 <= tau*_2 on
/// (nu_{lambda p}, nu_{(1-lambda) p}); both spaces must share V and nu.
inline BetterResult better_than(const PNSpaceModel& s1, const PNSpaceModel& s2, int sample_count, std::uint64_t seed,
                                const Tolerances& tol = {}) {
    Sampler rng(seed);
    if (s1.space.dim != s2.space.dim || s1.space.kind != s2.space.kind)
        throw std::invalid_argument("spaces differ in the underlying vector space");
    for (int i = 0; i < 8; ++i) {
        Vec p = detail::sample_vector(s1.space, rng);
        Ddf a = s1.nu(p), b = s2.nu(p);
        for (double x : comparison_grid({a, b}, 8))
            if (std::abs(a(x) - b(x)) > tol.exact) throw std::invalid_argument("spaces differ in the probabilistic norm");
    }
    const bool exact = s1.tau.exact_route() && s2.tau.exact_route() && s1.tau_star.exact_route() &&
                       s2.tau_star.exact_route();
    const double t = exact ? tol.exact : tol.grid;
    BetterResult out;
    out.report.subject = s1.prob.name();
    AxiomResult tau_ge("tau1_ge_tau2", exact ? "exact" : "grid"), star_le("star1_le_star2", exact ? "exact" : "grid");
    AxiomResult tau_le("tau1_le_tau2", exact ? "exact" : "grid"), star_ge("star1_ge_star2", exact ? "exact" : "grid");
    auto lambdas = detail::sample_lambdas(rng, std::max(sample_count, 3));
    for (int i = 0; i < sample_count; ++i) {
        Vec p = detail::sample_vector(s1.space, rng), q = detail::sample_vector(s1.space, rng);
        Ddf np = s1.nu(p), nq = s1.nu(q);
        Ddf a1 = apply(s1.tau, np, nq), a2 = apply(s2.tau, np, nq);
        auto xs = comparison_grid({np, nq}, 8);
        auto c = compare_pointwise(a1, a2, xs, t);
        Witness w = detail::join(detail::vec_witness("p", p), detail::vec_witness("q", q));
        tau_ge.observe(c.max_below, t, detail::join(w, {{"x", c.x_below}}));
        tau_le.observe(c.max_above, t, detail::join(w, {{"x", c.x_above}}));

        double lam = lambdas[static_cast<std::size_t>(i) % lambdas.size()];
        Ddf l1 = s1.nu(lam * p), l2 = s1.nu((1.0 - lam) * p);
        Ddf b1 = apply(s1.tau_star, l1, l2), b2 = apply(s2.tau_star, l1, l2);
        auto cs = compare_pointwise(b1, b2, comparison_grid({l1, l2, np}, 8), t);
        Witness wl = detail::join(detail::vec_witness("p", p), {{"lambda", lam}});
        star_le.observe(cs.max_above, t, detail::join(wl, {{"x", cs.x_above}}));
        star_ge.observe(cs.max_below, t, detail::join(wl, {{"x", cs.x_below}}));
    }
    bool fwd = tau_ge.passed && star_le.passed;
    bool bwd = tau_le.passed && star_ge.passed;
    out.relation = fwd && bwd ? Relation::equal : fwd ? Relation::better : bwd ? Relation::worse : Relation::incomparable;
    out.report.results = {tau_ge, star_le, tau_le, star_ge};
    out.report.notes.push_back(std::string("relation: ") + to_string(out.relation));
    return out;
}

/// F-norm axioms: (i) g(p) = 0 iff p = 0, (ii) g(lambda p) <= g(p) for
/// |lambda| <= 1, (iii) g(p + q) <= g(p) + g(q).
inline CheckReport check_fnorm_axioms(const VectorSpace& v, const FNorm& g, int sample_count, std::uint64_t seed) {
    Sampler rng(seed);
    CheckReport rep;
    rep.subject = g.name();
    AxiomResult zero("fnorm_i"), shrink("fnorm_ii"), sub("fnorm_iii");
    auto rel = [](double d, double scale) { return d / std::max(1.0, std::abs(scale)); };
    zero.observe(std::abs(g(v, v.zero())), 0.0, {{"theta", 0.0}});
    for (int i = 0; i < sample_count; ++i) {
        Vec p = detail::sample_vector(v, rng), q = detail::sample_vector(v, rng);
        double gp = g(v, p);
        zero.observe(gp > 0.0 ? 0.0 : 1.0, 0.0, detail::vec_witness("p", p));
        double lam = rng.uniform(-1.0, 1.0);
        shrink.observe(rel(g(v, lam * p) - gp, gp), 1e-12, detail::join(detail::vec_witness("p", p), {{"lambda", lam}}));
        shrink.observe(rel(g(v, -1.0 * p) - gp, gp), 1e-12, detail::join(detail::vec_witness("p", p), {{"lambda", -1.0}}));
        double gq = g(v, q);
        sub.observe(rel(g(v, p + q) - gp - gq, gp + gq), 1e-12,
                    detail::join(detail::vec_witness("p", p), detail::vec_witness("q", q)));
        // equal vectors are where power laws above 1 break subadditivity
        sub.observe(rel(g(v, 2.0 * p) - 2.0 * gp, 2.0 * gp), 1e-12,
                    detail::join(detail::vec_witness("p", p), detail::vec_witness("q", p)));
    }
    rep.results = {zero, shrink, sub};
    return rep;
}

/// g(lambda p) = |lambda| g(p).
inline AxiomResult check_homogeneity(const VectorSpace& v, const FNorm& g, int sample_count, std::uint64_t seed) {
    Sampler rng(seed);
    AxiomResult r("homogeneity");
    auto scalars = detail::sample_scalars(rng, std::max(sample_count, 8));
    for (int i = 0; i < sample_count; ++i) {
        Vec p = detail::sample_vector(v, rng);
        double lam = scalars[static_cast<std::size_t>(i) % scalars.size()];
        double lhs = g(v, lam * p), rhs = std::abs(lam) * g(v, p);
        r.observe(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), 1e-12,
                  detail::join(detail::vec_witness("p", p), {{"lambda", lam}}));
    }
    return r;
}

/// (V, eps_g, tau_M, M).
inline PNSpaceModel fnorm_space(const VectorSpace& v, const FNorm& g) {
    return PNSpaceModel{v, ProbNorm::eps_of_g(g), TriangleFn::tau_m(), TriangleFn::pointwise_m()};
}

/// Forward direction: the F-norm axioms of g against the PN axioms of
/// (V, eps_g, tau_M, M); the verdicts must agree.
inline CheckReport fnorm_pn_forward(const VectorSpace& v, const FNorm& g, int sample_count, std::uint64_t seed) {
    CheckReport f = check_fnorm_axioms(v, g, sample_count, seed);
    CheckReport pn = check_pn_axioms(fnorm_space(v, g), sample_count, seed);
    CheckReport rep;
    rep.subject = "forward " + g.name();
    rep.results = f.results;
    rep.results.insert(rep.results.end(), pn.results.begin(), pn.results.end());
    AxiomResult agree("equivalence");
    agree.observe(f.passed() == pn.passed() ? 0.0 : 1.0, 0.0, {{"fnorm", double(f.passed())}, {"pn", double(pn.passed())}});
    rep.results.push_back(agree);
    rep.notes.push_back(std::string("fnorm axioms ") + (f.passed() ? "pass" : "fail") + ", PN axioms " +
                        (pn.passed() ? "pass" : "fail"));
    return rep;
}

/// Reverse direction: nu = eps_g read back as g. Reports the F-norm axioms,
/// (N4) on its own, and, when tau(eps_a, eps_b) <= eps_{a+b} on samples, whether
/// "g is a norm" and the Serstnev law agree.
inline CheckReport fnorm_pn_reverse(const PNSpaceModel& s, int sample_count, std::uint64_t seed) {
    const auto* e = std::get_if<ProbNorm::EpsOfG>(&s.prob.repr());
    if (!e) throw std::invalid_argument("reverse correspondence needs nu of the form eps_g");
    const FNorm& g = e->g;
    CheckReport rep;
    rep.subject = "reverse " + g.name();
    CheckReport f = check_fnorm_axioms(s.space, g, sample_count, seed);
    rep.results = f.results;
    CheckReport pn = check_pn_axioms(s, sample_count, seed);
    if (const auto* n4 = pn.find("N4")) rep.results.push_back(*n4);

    Sampler rng(seed ^ 0x9e3779b97f4a7c15ULL);
    bool below_sum = true;
    for (int i = 0; i < 16 && below_sum; ++i) {
        double a = rng.log_uniform(1e-2, 1e2), b = rng.log_uniform(1e-2, 1e2);
        Ddf r = apply(s.tau, make_eps(a), make_eps(b));
        Ddf ref = make_eps(a + b);
        for (double x : comparison_grid({r, ref}, 4))
            if (r(x) > ref(x) + Tolerances{}.grid) below_sum = false;
    }
    if (below_sum) {
        AxiomResult homog = check_homogeneity(s.space, g, sample_count, seed);
        CheckReport ser = check_serstnev(s, SerstnevKind::plain(), sample_count, seed);
        AxiomResult agree("norm_iff_serstnev");
        agree.observe(homog.passed == ser.passed() ? 0.0 : 1.0, 0.0, {{"norm", double(homog.passed)}, {"serstnev", double(ser.passed())}});
        rep.results.push_back(agree);
        rep.notes.push_back(std::string("g is ") + (homog.passed ? "" : "not ") + "a norm; Serstnev law " +
                            (ser.passed() ? "holds" : "fails"));
    } else {
        rep.notes.push_back("tau(eps_a, eps_b) exceeds eps_{a+b}; norm criterion not applicable");
    }
    return rep;
}

/// (a + b)^(1 - alpha) <= lambda^alpha a^(1 - alpha) + (1 - lambda)^alpha b^(1 - alpha)
/// as (lhs, rhs), with 0 * inf read as 0.
inline std::pair<double, double> holder_sides(double alpha, double lambda, double a, double b) {
    auto term = [alpha](double w, double v) {
        if (w == 0.0) return 0.0;
        return std::pow(w, alpha) * std::pow(v, 1.0 - alpha);
    };
    return {std::pow(a + b, 1.0 - alpha), term(lambda, a) + term(1.0 - lambda, b)};
}

/// The alpha-simple space (R^dim, G, alpha) with the given triangle pair.
inline PNSpaceModel alpha_simple_space(const BaseCdf& g, double alpha, const TriangleFn& tau, const TriangleFn& star,
                                       std::size_t dim = 1, NormKind kind = NormKind::l2) {
    return PNSpaceModel{VectorSpace{dim, kind}, ProbNorm::alpha_simple(g, alpha), tau, star};
}

struct HolderOptions {
    int scalar_samples = 1000;
    int pair_samples = 50;
    int grid_points = 512;
    int axiom_samples = 6;
    std::size_t dim = 1;
};

/// Steps of the Menger chain for T_G with alpha > 1: the scalar Hoelder
/// inequality, tau_{T_G} <= tau_{M,L} pointwise with L the alpha power sum, and
/// the PN axioms of (V, nu, tau_{T_G}, tau_{T_G*}).
inline CheckReport holder_menger_check(const BaseCdf& g, double alpha, std::uint64_t seed, const HolderOptions& opt = {},
                                       const Tolerances& tol = {}) {
    if (!(alpha > 1.0)) throw std::invalid_argument("the Hoelder chain needs alpha > 1");
    const TNorm tg = make_tg(g, alpha);
    Sampler rng(seed);
    CheckReport rep;
    rep.subject = tg.name();

    AxiomResult scalar("holder_scalar");
    for (int i = 0; i < opt.scalar_samples; ++i) {
        double al = (i % 2 == 0) ? alpha : rng.uniform(1.0 + 1e-6, 6.0);
        double lam = rng.uniform(), a = rng.log_uniform(1e-3, 1e3), b = rng.log_uniform(1e-3, 1e3);
        auto [lhs, rhs] = holder_sides(al, lam, a, b);
        scalar.observe((lhs - rhs) / std::max(1.0, std::abs(rhs)), 1e-12,
                       {{"alpha", al}, {"lambda", lam}, {"a", a}, {"b", b}, {"lhs", lhs}, {"rhs", rhs}});
    }

    AxiomResult dom("tauTG_le_tauML", "grid");
    const TriangleFn t_tg = TriangleFn::tau_t(tg);
    const TriangleFn t_ml = TriangleFn::tau_ml(LOp::power_sum(alpha));
    VectorSpace v{opt.dim, NormKind::l2};
    const ProbNorm prob = ProbNorm::alpha_simple(g, alpha);
    for (int i = 0; i < opt.pair_samples; ++i) {
        Vec p = detail::sample_vector(v, rng, 1e-1, 1e1), q = detail::sample_vector(v, rng, 1e-1, 1e1);
        Ddf np = prob.nu(v, p), nq = prob.nu(v, q);
        Ddf lo = apply(t_tg, np, nq), hi = apply(t_ml, np, nq);
        double c = std::pow(v.norm(p) + v.norm(q), alpha);
        for (int k = 0; k < opt.grid_points; ++k) {
            double level = (k + 0.5) / opt.grid_points;
            double x = c * g.quasi_inverse(level * std::min(1.0, g.tail()));
            if (!std::isfinite(x) || !(x > 0.0)) continue;
            double l = lo(x), h = hi(x);
            dom.observe(l - h, tol.grid,
                        detail::join(detail::join(detail::vec_witness("p", p), detail::vec_witness("q", q)),
                                     {{"x", x}, {"tauTG", l}, {"tauML", h}}));
        }
    }

    PNSpaceModel menger{v, prob, t_tg, TriangleFn::tau_t_star(tg)};
    CheckReport pn = check_pn_axioms(menger, opt.axiom_samples, seed + 1, tol);
    rep.results = {scalar, dom};
    rep.results.insert(rep.results.end(), pn.results.begin(), pn.results.end());
    if (!tg.caveat().empty()) rep.notes.push_back(tg.caveat());
    return rep;
}

/// nu_p <= nu_{beta p} = tau_M(nu_{lambda p}, nu_{(1-lambda) p}) on samples, and
/// the PN axioms of (V, nu, tau, tau_M).
inline CheckReport beta_chain_check(const PNSpaceModel& s, double alpha, int sample_count, std::uint64_t seed,
                                       const Tolerances& tol = {}) {
    Sampler rng(seed);
    CheckReport rep;
    rep.subject = s.prob.name();
    AxiomResult chain("nu_le_nu_beta"), eq("nu_beta_eq_tauM");
    auto lambdas = detail::sample_lambdas(rng, std::max(sample_count, 3));
    const TriangleFn tau_m = TriangleFn::tau_m();
    for (int i = 0; i < sample_count; ++i) {
        Vec p = detail::sample_vector(s.space, rng);
        double lam = lambdas[static_cast<std::size_t>(i) % lambdas.size()];
        double beta = beta_of(lam, alpha);
        Ddf np = s.nu(p), nb = s.nu(beta * p);
        Ddf conv = apply(tau_m, s.nu(lam * p), s.nu((1.0 - lam) * p));
        for (double x : comparison_grid({np, nb}, 8)) {
            Witness w = detail::join(detail::vec_witness("p", p), {{"lambda", lam}, {"beta", beta}, {"x", x}});
            chain.observe(np(x) - nb(x), tol.exact, w);
            eq.observe(std::abs(nb(x) - conv(x)), tol.exact, w);
        }
    }
    PNSpaceModel better{s.space, s.prob, s.tau, TriangleFn::tau_m()};
    CheckReport pn = check_pn_axioms(better, sample_count, seed + 1, tol);
    rep.results = {chain, eq};
    rep.results.insert(rep.results.end(), pn.results.begin(), pn.results.end());
    if (alpha < 1.0) rep.notes.push_back("alpha < 1 gives beta > 1, so nu_p <= nu_{beta p} is not expected");
    return rep;
}

}  // namespace pnkit
