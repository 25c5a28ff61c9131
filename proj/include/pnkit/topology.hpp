#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pnkit/ddf.hpp"
#include "pnkit/phi.hpp"
#include "pnkit/report.hpp"
#include "pnkit/sampling.hpp"
#include "pnkit/spaces.hpp"

namespace pnkit {

/// Subsets of V that the classifiers understand.
class SetSpec {
public:
    struct Finite {
        std::vector<Vec> points;
    };
    /// {p : ||p|| <= r}
    struct Ball {
        double r;
    };
    /// {t d : 0 <= t <= max_t} or, two-sided, |t| <= max_t; max_t may be inf.
    struct Ray {
        Vec direction;
        double max_t;
        bool two_sided;
    };
    struct Singleton {
        Vec p;
    };
    using Repr = std::variant<Finite, Ball, Ray, Singleton>;

    static SetSpec finite(std::vector<Vec> pts) {
        if (pts.empty()) throw std::invalid_argument("finite set must be nonempty");
        return SetSpec(Finite{std::move(pts)});
    }
    static SetSpec ball(double r) {
        if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("ball radius must be positive and finite");
        return SetSpec(Ball{r});
    }
    static SetSpec ray(Vec direction, double max_t = kInf, bool two_sided = false) {
        if (is_zero(direction)) throw std::invalid_argument("ray direction must be nonzero");
        if (!(max_t > 0.0)) throw std::invalid_argument("ray extent must be positive");
        return SetSpec(Ray{std::move(direction), max_t, two_sided});
    }
    /// The whole line R d.
    static SetSpec line(Vec direction) { return ray(std::move(direction), kInf, true); }
    static SetSpec singleton(Vec p) { return SetSpec(Singleton{std::move(p)}); }

    const Repr& repr() const { return repr_; }

    bool is_finite() const {
        return std::holds_alternative<Finite>(repr_) || std::holds_alternative<Singleton>(repr_);
    }

    std::vector<Vec> points() const {
        if (const auto* f = std::get_if<Finite>(&repr_)) return f->points;
        if (const auto* s = std::get_if<Singleton>(&repr_)) return {s->p};
        throw std::logic_error("set is not finite");
    }

    struct MagnitudeSup {
        double value;
        bool attained;
    };

    /// sup{||p|| : p in A} and whether some member reaches it.
    MagnitudeSup magnitude_sup(const VectorSpace& v) const {
        return std::visit(
            [&](const auto& a) -> MagnitudeSup {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, Finite>) {
                    double m = 0.0;
                    for (const auto& p : a.points) m = std::max(m, v.norm(p));
                    return {m, true};
                } else if constexpr (std::is_same_v<T, Ball>) {
                    return {a.r, true};
                } else if constexpr (std::is_same_v<T, Ray>) {
                    if (is_inf(a.max_t)) return {kInf, false};
                    return {a.max_t * v.norm(a.direction), true};
                } else {
                    return {v.norm(a.p), true};
                }
            },
            repr_);
    }

    /// k A.
    SetSpec scaled(double k) const {
        return std::visit(
            [k](const auto& a) -> SetSpec {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, Finite>) {
                    std::vector<Vec> pts;
                    for (const auto& p : a.points) pts.push_back(k * p);
                    return SetSpec(Finite{std::move(pts)});
                } else if constexpr (std::is_same_v<T, Ball>) {
                    return SetSpec(Ball{std::abs(k) * a.r});
                } else if constexpr (std::is_same_v<T, Ray>) {
                    return SetSpec(Ray{k * a.direction, a.max_t, a.two_sided});
                } else {
                    return SetSpec(Singleton{k * a.p});
                }
            },
            repr_);
    }

    /// Members for sampled checks; the extreme points come first.
    std::vector<Vec> sample(const VectorSpace& v, Sampler& rng, int count) const {
        if (is_finite()) return points();
        std::vector<Vec> out;
        if (const auto* b = std::get_if<Ball>(&repr_)) {
            out.push_back(v.zero());
            for (int i = 0; i < count; ++i) {
                Vec d = rng.direction(v.dim);
                double r = (i % 2 == 0) ? b->r : b->r * rng.uniform();
                out.push_back((r / v.norm(d)) * d);
            }
        } else {
            const auto& ray = std::get<Ray>(repr_);
            double top = is_inf(ray.max_t) ? 1e6 : ray.max_t;
            out.push_back(top * ray.direction);
            for (int i = 0; i < count; ++i) {
                double t = is_inf(ray.max_t) ? rng.log_uniform(1e-3, 1e6) : top * rng.uniform();
                if (ray.two_sided && rng.uniform() < 0.5) t = -t;
                out.push_back(t * ray.direction);
            }
        }
        return out;
    }

    std::string name() const {
        return std::visit(
            [](const auto& a) -> std::string {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, Finite>)
                    return "finite(" + std::to_string(a.points.size()) + ")";
                else if constexpr (std::is_same_v<T, Ball>)
                    return "ball(" + std::to_string(a.r) + ")";
                else if constexpr (std::is_same_v<T, Ray>)
                    return std::string(a.two_sided ? "line" : "ray") + "(" +
                           (is_inf(a.max_t) ? std::string("inf") : std::to_string(a.max_t)) + ")";
                else
                    return "singleton";
            },
            repr_);
    }

private:
    explicit SetSpec(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

/// q in N_p(t), i.e. nu_{p-q}(t) > 1 - t.
inline bool neighborhood_contains(const PNSpaceModel& s, const Vec& p, double t, const Vec& q) {
    if (!(t > 0.0)) throw std::invalid_argument("neighborhood size must be positive");
    return s.nu(p - q)(t) > 1.0 - t;
}

/// delta(p, q) = d_S(nu_{p-q}, eps_0).
inline double delta(const PNSpaceModel& s, const Vec& p, const Vec& q, double tol = Tolerances{}.metric) {
    return sibley_distance(s.nu(p - q), make_eps(0.0), tol);
}

struct RadiusResult {
    Ddf radius = make_eps(0.0);
    bool in_dplus = true;
    std::string method;
};

/// R_A = l^- inf{nu_p : p in A}. Finite minima of left-continuous functions are
/// already left-continuous; closed sets of a radial space take their value at
/// the largest magnitude; unbounded sets take the limit profile.
inline RadiusResult probabilistic_radius(const PNSpaceModel& s, const SetSpec& a) {
    RadiusResult out;
    if (a.is_finite()) {
        std::vector<Ddf> parts;
        for (const auto& p : a.points()) parts.push_back(s.nu(p));
        out.radius = pointwise_min(std::move(parts));
        out.method = "finite_min";
    } else {
        if (!s.prob.radial()) throw std::invalid_argument("no closed form; supply FiniteSet sample");
        auto sup = a.magnitude_sup(s.space);
        if (sup.attained) {
            out.radius = s.prob.at_magnitude(sup.value);
            out.method = "largest_magnitude";
        } else {
            out.radius = s.prob.radius_unbounded();
            out.method = "magnitude_limit";
        }
    }
    out.in_dplus = out.radius.in_dplus();
    return out;
}

struct DBoundedResult {
    bool d_bounded;
    RadiusResult radius;
};

inline DBoundedResult is_D_bounded(const PNSpaceModel& s, const SetSpec& a) {
    RadiusResult r = probabilistic_radius(s, a);
    return {r.in_dplus, r};
}

enum class Verdict { bounded, not_bounded, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::bounded: return "bounded";
        case Verdict::not_bounded: return "not_bounded";
        default: return "inconclusive";
    }
}

enum class Tri { yes, no, unknown };

inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::yes: return "yes";
        case Tri::no: return "no";
        default: return "unknown";
    }
}

struct CriterionRow {
    int n;
    long k;  ///< smallest k found, 0 when none
    Tri holds;
    std::string reason;
};

struct BoundedResult {
    Verdict verdict = Verdict::inconclusive;
    Tri criterion_a = Tri::unknown;
    std::string method;
    std::vector<CriterionRow> table;
};

namespace detail {

/// Whether nu_{p/k}(1/n) > 1 - 1/n for every p in A.
inline Tri criterion_a_at(const PNSpaceModel& s, const SetSpec& a, int n, long k) {
    const double x = 1.0 / n, thr = 1.0 - x;
    if (a.is_finite()) {
        for (const auto& p : a.points())
            if (!(s.nu((1.0 / k) * p)(x) > thr)) return Tri::no;
        return Tri::yes;
    }
    if (!s.prob.radial()) return Tri::unknown;
    auto sup = a.magnitude_sup(s.space);
    if (sup.attained) return s.prob.at_magnitude(sup.value / k)(x) > thr ? Tri::yes : Tri::no;
    // nu_m(x) decreases in m toward the limit without reaching it
    double lim = s.prob.limit_inf_mag(x);
    if (lim > thr) return Tri::yes;
    if (lim < thr) return Tri::no;
    return Tri::unknown;
}

/// No k can work: even the magnitude-0 limit stays at or below the threshold,
/// or A is a cone so every k gives the same set.
inline bool criterion_a_refuted(const PNSpaceModel& s, const SetSpec& a, int n) {
    const double x = 1.0 / n, thr = 1.0 - x;
    if (const auto* r = std::get_if<SetSpec::Ray>(&a.repr()); r && is_inf(r->max_t))
        return criterion_a_at(s, a, n, 1) == Tri::no;
    if (!s.prob.radial()) return false;
    bool has_nonzero = true;
    if (a.is_finite()) {
        const std::vector<Vec> pts = a.points();
        has_nonzero = std::any_of(pts.begin(), pts.end(), [](const Vec& p) { return !is_zero(p); });
    }
    return has_nonzero && s.prob.limit_zero_mag(x) <= thr;
}

}  // namespace detail

/// Boundedness. Criterion (a) is searched first (k by doubling, then
/// bisection); finite sets are covered by their own points; otherwise radial
/// spaces are decided from the shape of N_theta(1/m), a ball whose radius is 0,
/// positive and finite, or infinite according to the magnitude limits of nu.
inline BoundedResult is_bounded(const PNSpaceModel& s, const SetSpec& a, int max_n = 64, long max_k = 1L << 40) {
    if (max_n < 1 || max_k < 1) throw std::invalid_argument("max_n and max_k must be at least 1");
    BoundedResult out;
    bool all_yes = true, refuted = false;
    for (int n = 1; n <= max_n; ++n) {
        CriterionRow row{n, 0, Tri::unknown, ""};
        long k = 1;
        Tri h = detail::criterion_a_at(s, a, n, k);
        while (h != Tri::yes && k < max_k) {
            k = std::min(max_k, k * 2);
            h = detail::criterion_a_at(s, a, n, k);
        }
        if (h == Tri::yes) {
            long lo = k / 2, hi = k;  // criterion fails at lo (or lo = 0)
            while (hi - lo > 1) {
                long mid = lo + (hi - lo) / 2;
                if (detail::criterion_a_at(s, a, n, mid) == Tri::yes)
                    hi = mid;
                else
                    lo = mid;
            }
            row.k = hi;
            row.holds = Tri::yes;
        } else if (detail::criterion_a_refuted(s, a, n)) {
            row.holds = Tri::no;
            row.reason = "no k can satisfy the bound";
        } else {
            row.reason = "k search exhausted";
        }
        out.table.push_back(row);
        if (row.holds != Tri::yes) all_yes = false;
        if (row.holds == Tri::no) {
            refuted = true;
            break;
        }
    }
    out.criterion_a = all_yes ? Tri::yes : (refuted ? Tri::no : Tri::unknown);

    if (out.criterion_a == Tri::yes) {
        out.verdict = Verdict::bounded;
        out.method = "criterion_a";
        return out;
    }
    if (a.is_finite()) {
        out.verdict = Verdict::bounded;
        out.method = "finite_cover";
        return out;
    }
    if (!s.prob.radial()) {
        out.method = "no_radial_structure";
        return out;
    }
    const bool norm_bounded = std::isfinite(a.magnitude_sup(s.space).value);
    for (int m = 1; m <= max_n; ++m) {
        const double x = 1.0 / m, thr = 1.0 - x;
        bool everything = s.prob.limit_inf_mag(x) > thr;
        bool some_ball = s.prob.limit_zero_mag(x) > thr;
        if (everything) continue;
        if (some_ball && norm_bounded) continue;
        out.verdict = Verdict::not_bounded;
        out.method = some_ball ? "neighborhoods_bounded_set_unbounded" : "neighborhoods_trivial_set_infinite";
        return out;
    }
    out.verdict = Verdict::bounded;
    out.method = "finite_cover_by_balls";
    return out;
}

/// (a) <=> (b) and (a) => (c) for a phi-Serstnev space with lim phi^ = inf.
struct EquivalenceResult {
    CheckReport report;
    bool hypotheses_ok = false;
    Tri a = Tri::unknown;
    bool b = false;
    Verdict c = Verdict::inconclusive;
};

inline EquivalenceResult check_dbounded_equivalence(const PNSpaceModel& s, const PhiMap& phi, const SetSpec& set, int max_n,
                                         int sample_count, std::uint64_t seed) {
    EquivalenceResult out;
    out.report.subject = s.prob.name() + " on " + set.name();
    AxiomResult hyp("hypotheses");
    bool lim_ok = is_inf(phi.quasi_inverse().limit_at_infinity());
    CheckReport law = check_serstnev(s, SerstnevKind::with_phi(phi), sample_count, seed);
    hyp.observe(lim_ok && law.passed() ? 0.0 : 1.0, 0.0,
                {{"limit_phi_hat_infinite", double(lim_ok)}, {"phi_serstnev", double(law.passed())}});
    out.hypotheses_ok = hyp.passed;
    out.report.results.push_back(hyp);
    if (!hyp.passed) {
        out.report.notes.push_back("hypotheses violated; statements not evaluated");
        return out;
    }
    BoundedResult bd = is_bounded(s, set, max_n);
    out.a = bd.criterion_a;
    out.b = is_D_bounded(s, set).d_bounded;
    out.c = bd.verdict;

    AxiomResult ab("a_iff_b"), ac("a_implies_c");
    if (out.a == Tri::unknown) {
        ab.observe(1.0, 0.0, {{"a", -1.0}, {"b", double(out.b)}});
        out.report.notes.push_back("criterion (a) inconclusive");
    } else {
        bool av = out.a == Tri::yes;
        ab.observe(av == out.b ? 0.0 : 1.0, 0.0, {{"a", double(av)}, {"b", double(out.b)}});
    }
    bool c_ok = out.a != Tri::yes || out.c == Verdict::bounded;
    ac.observe(c_ok ? 0.0 : 1.0, 0.0, {{"a", double(out.a == Tri::yes)}, {"c", double(out.c == Verdict::bounded)}});
    out.report.results.push_back(ab);
    out.report.results.push_back(ac);
    if (out.c == Verdict::bounded && !out.b) out.report.notes.push_back("bounded and not D-bounded");
    return out;
}

struct ContinuityProbe {
    bool continuous = true;  ///< nu_{lambda_n p}(x) -> 1 on every sampled (p, x)
    bool in_dplus = true;    ///< nu_p in D+ for every sampled p
    bool agree() const { return continuous == in_dplus; }
    Witness witness;
};

/// Scalar multiplication at the first place: follows lambda_n = 2^-n (n <= 80)
/// and asks whether nu_{lambda_n p}(x) settles above 1 - 1e-6 on the last terms.
inline ContinuityProbe scalar_continuity_probe(const PNSpaceModel& s, const std::vector<Vec>& points,
                                               const std::vector<double>& xs = {1e-2, 1e-1, 1.0, 10.0}) {
    ContinuityProbe out;
    for (const auto& p : points) {
        if (!s.nu(p).in_dplus() && out.in_dplus) {
            out.in_dplus = false;
            if (out.witness.empty()) out.witness = detail::vec_witness("p", p);
        }
        for (double x : xs) {
            bool settled = true;
            for (int n = 70; n <= 80; ++n) {
                double v = s.nu(std::ldexp(1.0, -n) * p)(x);
                if (!(v >= 1.0 - 1e-6)) settled = false;
            }
            if (!settled && out.continuous) {
                out.continuous = false;
                out.witness = detail::join(detail::vec_witness("p", p), {{"x", x}});
            }
        }
    }
    return out;
}

/// Properties of eps_g spaces: D-bounded iff g(A) bounded, D-boundedness of kA,
/// and bounded => D-bounded.
inline CheckReport fnormed_dbounded_props(const VectorSpace& v, const FNorm& g, const SetSpec& a,
                                          const std::vector<double>& ks) {
    PNSpaceModel s = fnorm_space(v, g);
    CheckReport rep;
    rep.subject = g.name() + " on " + a.name();
    double gsup = 0.0;
    if (a.is_finite()) {
        for (const auto& p : a.points()) gsup = std::max(gsup, g(v, p));
    } else {
        gsup = g.profile(a.magnitude_sup(v).value);
    }
    bool db = is_D_bounded(s, a).d_bounded;
    AxiomResult p1("dbounded_iff_g_bounded"), p2("scaled_dbounded"), p3("bounded_implies_dbounded");
    p1.observe(db == std::isfinite(gsup) ? 0.0 : 1.0, 0.0, {{"sup_g", gsup}, {"d_bounded", double(db)}});
    for (double k : ks) {
        bool dk = is_D_bounded(s, a.scaled(k)).d_bounded;
        p2.observe(!db || dk ? 0.0 : 1.0, 0.0, {{"k", k}, {"d_bounded_kA", double(dk)}});
    }
    BoundedResult b = is_bounded(s, a);
    if (b.verdict == Verdict::inconclusive) rep.notes.push_back("boundedness inconclusive");
    p3.observe(b.verdict != Verdict::bounded || db ? 0.0 : 1.0, 0.0,
               {{"bounded", double(b.verdict == Verdict::bounded)}, {"d_bounded", double(db)}});
    rep.results = {p1, p2, p3};
    return rep;
}

struct RefinementProbe {
    CheckReport report;
    bool reverse_tested = false;
    std::vector<std::pair<int, int>> forward_pairs;  ///< (m, n)
    std::vector<std::pair<int, int>> reverse_pairs;
};

namespace detail {

/// Smallest n >= m with 1/n <= y; then nu(1/n) > 1 - 1/n forces nu(y) > 1 - 1/m.
inline int refining_index(double y, int m) {
    if (is_inf(y)) return m;
    int n = std::max(m, static_cast<int>(std::min(1e9, std::ceil(1.0 / y))));
    while (1.0 / n > y) ++n;
    return n;
}

}  // namespace detail

/// For each m, picks n with phi(1/m) >= 1/n and confirms N_p(1/n) in N'_p(1/m) on
/// sampled points, where N' belongs to nu o phi. When phi^ is positive the
/// reverse inclusion N'_p(1/n) in N_p(1/m) is probed with phi^(1/m) >= 1/n.
/// Agreement on samples means "not falsified", nothing more.
inline RefinementProbe topology_refinement_probe(const PNSpaceModel& s, const PhiMap& phi, int max_m, int sample_count,
                                                 std::uint64_t seed) {
    RefinementProbe out;
    PNSpaceModel t = transform_space(s, phi);
    PhiMap hat = phi.quasi_inverse();
    Sampler rng(seed);
    std::vector<std::pair<Vec, Vec>> pairs;
    for (int i = 0; i < sample_count; ++i) {
        Vec p = detail::sample_vector(s.space, rng);
        Vec q = p + detail::sample_vector(s.space, rng, 1e-9, 1e2);
        pairs.emplace_back(std::move(p), std::move(q));
    }
    AxiomResult fwd("forward_inclusion"), rev("reverse_inclusion");
    bool hat_positive = true;
    for (int m = 1; m <= max_m; ++m)
        if (!(hat(1.0 / m) > 0.0)) hat_positive = false;
    out.reverse_tested = hat_positive;
    for (int m = 1; m <= max_m; ++m) {
        int n = detail::refining_index(phi(1.0 / m), m);
        out.forward_pairs.emplace_back(m, n);
        for (const auto& [p, q] : pairs) {
            bool in_small = neighborhood_contains(s, p, 1.0 / n, q);
            bool in_big = neighborhood_contains(t, p, 1.0 / m, q);
            fwd.observe(in_small && !in_big ? 1.0 : 0.0, 0.0, {{"m", double(m)}, {"n", double(n)}});
        }
        if (hat_positive) {
            int nr = detail::refining_index(hat(1.0 / m), m);
            out.reverse_pairs.emplace_back(m, nr);
            for (const auto& [p, q] : pairs) {
                bool in_small = neighborhood_contains(t, p, 1.0 / nr, q);
                bool in_big = neighborhood_contains(s, p, 1.0 / m, q);
                rev.observe(in_small && !in_big ? 1.0 : 0.0, 0.0, {{"m", double(m)}, {"n", double(nr)}});
            }
        }
    }
    out.report.subject = s.prob.name() + " under " + phi.describe();
    out.report.results.push_back(fwd);
    if (hat_positive) {
        out.report.results.push_back(rev);
        out.report.notes.push_back(rev.passed ? "coincidence not falsified" : "coincidence falsified");
    } else {
        out.report.notes.push_back("phi^ vanishes somewhere; reverse inclusion not probed");
    }
    return out;
}

}  // namespace pnkit
