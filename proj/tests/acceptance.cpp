#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "pnkit/sampling.hpp"
#include "pnkit/spaces.hpp"
#include "pnkit/topology.hpp"

using namespace pnkit;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const BaseCdf kExp = BaseCdf::exponential();

double exp_cdf(double y) { return y <= 0 ? 0.0 : -std::expm1(-y); }

// Levy-band search for the Sibley distance on a fixed grid, independent of the
// library's bisection: smallest h with G(x) <= F(x + h) + h and F(x) <= G(x + h) + h.
double grid_sibley(const Ddf& f, const Ddf& g) {
    std::vector<double> xs;
    for (int i = 1; i <= 4000; ++i) xs.push_back(i * 2.5e-3);
    for (double x = 1e-6; x < 1e-2; x *= 1.2) xs.push_back(x);
    auto ok = [&](double h) {
        for (double x : xs) {
            if (x >= 1.0 / h) break;
            if (g(x) > f(x + h) + h + 1e-12 || f(x) > g(x + h) + h + 1e-12) return false;
        }
        return true;
    };
    double lo = 0, hi = 1;
    for (int i = 0; i < 40; ++i) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

Outcome c1() {
    Outcome v;
    Sampler rng(101);
    auto t0 = std::chrono::steady_clock::now();
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        double a = double(1 + rng.index(999)) / double(1 + rng.index(64));
        double b = double(1 + rng.index(999)) / double(1 + rng.index(64));
        double s = a + b;
        Ddf r = apply(TriangleFn::tau_m(), make_eps(a), make_eps(b));
        bool exact = r.is_step() && r(s) == 0.0 && r(std::nextafter(s, kInf)) == 1.0 && r.quasi_inverse(0.5) == s;
        if (!exact) v.fail(fmt("threshold mismatch at a=%.17g b=%.17g", a, b));
        ++checked;
    }
    double t = seconds_since(t0);
    if (t >= 1.0) v.fail(fmt("runtime %.3f s", t));
    if (v.ok) v.detail = fmt("%.0f pairs bit-exact in %.3f s", checked, t);
    return v;
}

Outcome c2() {
    Outcome v;
    Sampler rng(202);
    double worst_exact = 0, worst_grid = 0;
    ApplyOptions grid;
    grid.force_grid = true;
    for (double alpha : {1.5, 2.0, 3.0}) {
        PNSpaceModel s = alpha_simple_space(kExp, alpha, TriangleFn::tau_ml(LOp::power_sum(alpha)),
                                            TriangleFn::tau_ml(LOp::power_sum(alpha)), 2);
        for (int i = 0; i < 50; ++i) {
            Vec p = detail::sample_vector(s.space, rng, 0.1, 10), q = detail::sample_vector(s.space, rng, 0.1, 10);
            double c = std::pow(std::hypot(p[0], p[1]) + std::hypot(q[0], q[1]), alpha);
            double x = c * rng.log_uniform(1e-2, 10);
            double want = exp_cdf(x / c);
            Ddf np = s.nu(p), nq = s.nu(q);
            worst_exact = std::max(worst_exact, std::abs(apply(s.tau, np, nq)(x) - want));
            worst_grid = std::max(worst_grid, std::abs(apply(s.tau, np, nq, grid)(x) - want));
        }
    }
    if (worst_exact > 1e-9) v.fail(fmt("quasi-inverse path error %.3g", worst_exact));
    if (worst_grid > 1e-3) v.fail(fmt("grid path error %.3g", worst_grid));
    if (v.ok) v.detail = fmt("max error %.2g exact, %.2g grid over 150 samples", worst_exact, worst_grid);
    return v;
}

Outcome c3() {
    Outcome v;
    int n_pass = 0, n_fail = 0;
    for (double alpha : {1.5, 2.0, 3.0}) {
        PNSpaceModel s = alpha_simple_space(kExp, alpha, TriangleFn::tau_ml(LOp::power_sum(alpha)),
                                            TriangleFn::tau_ml(LOp::power_sum(alpha)), 2);
        for (double a : {alpha, alpha + 0.1}) {
            const bool expect = a == alpha;
            CheckReport law = check_serstnev(s, SerstnevKind::with_alpha(a), 200, 303);
            CheckReport beta = check_characterization_alphaS(s, a, 200, 303);
            CheckReport ml = check_characterization_phiS(s, PhiMap::power(a), 200, 303);
            // the tau_{M,L} identity itself, apart from the scaling-law cross-check
            bool ml_ok = ml.find("quasi_inverse_identity")->passed && ml.find("N2")->passed;
            bool agree = law.passed() == expect && beta.passed() == expect && ml_ok == expect;
            bool witnessed = expect || (!law.results[0].witness.empty() && !beta.results[0].witness.empty() &&
                                        !ml.find("quasi_inverse_identity")->witness.empty());
            if (!agree || !witnessed)
                v.fail(fmt("alpha %.2f checked with %.2f: verdicts disagree", alpha, a));
            (expect ? n_pass : n_fail) += agree;
        }
    }
    if (v.ok) v.detail = fmt("%.0f exact spaces pass all three, %.0f perturbed fail all three", n_pass, n_fail);
    return v;
}

Outcome c4() {
    Outcome v;
    auto t0 = std::chrono::steady_clock::now();
    CheckReport r = holder_menger_check(kExp, 2.0, 404);
    for (const auto& a : r.results)
        if (!a.passed) v.fail(a.name + fmt(" worst %.3g", a.worst));
    // scalar inequality recomputed from its definition
    Sampler rng(405);
    for (int i = 0; i < 1000; ++i) {
        double al = rng.uniform(1.0 + 1e-6, 6.0), lam = rng.uniform();
        double a = rng.log_uniform(1e-3, 1e3), b = rng.log_uniform(1e-3, 1e3);
        double lhs = std::pow(a + b, 1 - al);
        double rhs = std::pow(lam, al) * std::pow(a, 1 - al) + std::pow(1 - lam, al) * std::pow(b, 1 - al);
        if (lhs > rhs * (1 + 1e-12)) v.fail(fmt("scalar inequality fails at alpha=%.6g lambda=%.6g", al, lam));
    }
    if (v.ok)
        v.detail = fmt("dominance gap %.2g on 50 pairs x 512 points, axioms pass, %.1f s",
                       r.find("tauTG_le_tauML")->worst, seconds_since(t0));
    return v;
}

Outcome c5() {
    Outcome v;
    auto t0 = std::chrono::steady_clock::now();
    PNSpaceModel a2 = alpha_simple_space(kExp, 2, TriangleFn::tau_ml(LOp::power_sum(2)),
                                         TriangleFn::tau_ml(LOp::power_sum(2)), 2);
    PNSpaceModel half{VectorSpace{1, NormKind::l2}, ProbNorm::simple(BaseCdf::half_exponential()), TriangleFn::tau_m(),
                      TriangleFn::tau_m()};
    PNSpaceModel ratio = fnorm_space(VectorSpace{1, NormKind::l1}, FNorm::norm_ratio(1));
    struct Case {
        const PNSpaceModel* s;
        SetSpec set;
        Verdict bounded;
        bool d_bounded;
        const char* name;
    };
    std::vector<Case> cases{{&a2, SetSpec::ball(5), Verdict::bounded, true, "ball"},
                            {&half, SetSpec::singleton({1.0}), Verdict::bounded, false, "singleton"},
                            {&ratio, SetSpec::line({1.0}), Verdict::not_bounded, true, "line"}};
    for (const auto& c : cases) {
        BoundedResult b1 = is_bounded(*c.s, c.set), b2 = is_bounded(*c.s, c.set);
        bool d1 = is_D_bounded(*c.s, c.set).d_bounded, d2 = is_D_bounded(*c.s, c.set).d_bounded;
        bool same = b1.verdict == b2.verdict && b1.table.size() == b2.table.size() && d1 == d2;
        for (std::size_t i = 0; same && i < b1.table.size(); ++i)
            same = b1.table[i].k == b2.table[i].k && b1.table[i].holds == b2.table[i].holds;
        if (!same) v.fail(std::string(c.name) + ": nondeterministic verdict");
        if (b1.verdict != c.bounded) v.fail(std::string(c.name) + ": bounded verdict " + to_string(b1.verdict));
        if (d1 != c.d_bounded) v.fail(std::string(c.name) + ": wrong D-bounded verdict");
    }
    double t = seconds_since(t0);
    if (t >= 5.0) v.fail(fmt("runtime %.2f s", t));
    if (v.ok) v.detail = fmt("ball bounded and D-bounded; singleton bounded, not D-bounded; line D-bounded, not bounded; %.3f s", t);
    return v;
}

Outcome c6() {
    Outcome v;
    PNSpaceModel s{VectorSpace{2, NormKind::l2}, ProbNorm::simple(kExp), TriangleFn::tau_m(), TriangleFn::tau_m()};
    PNSpaceModel t = transform_space(s, PhiMap::power(2));
    PNSpaceModel back = transform_space(t, PhiMap::power(0.5));
    Sampler rng(606);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        Vec p = detail::sample_vector(s.space, rng, 0.1, 10), q = detail::sample_vector(s.space, rng, 0.1, 10);
        double x = rng.log_uniform(1e-2, 50);
        Ddf np = s.nu(p), nq = s.nu(q);
        worst = std::max(worst, std::abs(back.nu(p)(x) - np(x)));
        // closed form of the round trip: 1 - exp(-x / ||p||)
        worst = std::max(worst, std::abs(back.nu(p)(x) - exp_cdf(x / std::hypot(p[0], p[1]))));
        worst = std::max(worst, std::abs(apply(back.tau, np, nq)(x) - apply(s.tau, np, nq)(x)));
        worst = std::max(worst, std::abs(apply(back.tau_star, np, nq)(x) - apply(s.tau_star, np, nq)(x)));
    }
    if (worst > 1e-9) v.fail(fmt("round trip error %.3g", worst));

    ApplyOptions grid;
    grid.force_grid = true;
    PhiMap phi = PhiMap::power(2);
    TriangleFn conj = phi_transform_triangle(TriangleFn::tau_m(), phi);
    TriangleFn ml = TriangleFn::tau_ml(LOp::from_phi(phi));
    double gap = 0;
    for (int i = 0; i < 50; ++i) {
        Vec p = detail::sample_vector(t.space, rng, 0.1, 10), q = detail::sample_vector(t.space, rng, 0.1, 10);
        Ddf np = t.nu(p), nq = t.nu(q);
        double x = rng.log_uniform(1e-2, 200);
        gap = std::max(gap, std::abs(apply(conj, np, nq, grid)(x) - apply(ml, np, nq)(x)));
    }
    if (gap > 1e-3) v.fail(fmt("conjugated tau_M vs tau_{M,L} gap %.3g", gap));
    if (v.ok) v.detail = fmt("round trip error %.2g on 100 points; conjugate gap %.2g on 50", worst, gap);
    return v;
}

Outcome c7() {
    Outcome v;
    double worst_eps = 0;
    for (double a : {0.1, 0.3, 0.7, 1.0, 2.0})
        worst_eps = std::max(worst_eps, std::abs(sibley_distance(make_eps(0), make_eps(a)) - std::min(a, 1.0)));
    if (worst_eps > 1e-4) v.fail(fmt("d(eps_0, eps_a) error %.3g", worst_eps));

    Sampler rng(707);
    auto random_ddf = [&]() -> Ddf {
        switch (rng.index(4)) {
            case 0: return make_eps(rng.uniform(0, 3));
            case 1: return Ddf::scaled(kExp, rng.log_uniform(0.05, 5));
            case 2: return Ddf::scaled(BaseCdf::uniform_unit(), rng.log_uniform(0.05, 5));
            default: {
                double x1 = rng.uniform(0.1, 1), y1 = rng.uniform(0, 0.6);
                return Ddf::breakpoints(PiecewiseLinear({{0, 0, 0}, {x1, y1, y1}, {x1 + rng.uniform(0.1, 2), 1, 1}}));
            }
        }
    };
    double sym = 0, ident = 0, tri = 0, oracle = 0;
    for (int i = 0; i < 100; ++i) {
        Ddf f = random_ddf(), g = random_ddf(), h = random_ddf();
        double fg = sibley_distance(f, g), gf = sibley_distance(g, f);
        double gh = sibley_distance(g, h), fh = sibley_distance(f, h);
        sym = std::max(sym, std::abs(fg - gf));
        ident = std::max(ident, sibley_distance(f, f));
        tri = std::max(tri, fh - fg - gh);
        if (i < 10) oracle = std::max(oracle, std::abs(fg - grid_sibley(f, g)));
    }
    if (sym > 2e-4) v.fail(fmt("symmetry gap %.3g", sym));
    if (ident > 2e-4) v.fail(fmt("d(F, F) = %.3g", ident));
    if (tri > 2e-4) v.fail(fmt("triangle excess %.3g", tri));
    if (oracle > 2e-3) v.fail(fmt("grid oracle disagreement %.3g", oracle));
    if (v.ok)
        v.detail = fmt("eps error %.2g; on 100 triples symmetry %.2g, triangle excess %.2g", worst_eps, sym, std::max(tri, 0.0));
    return v;
}

Outcome c8() {
    Outcome v;
    PiecewiseLinear reaches_one({{0, 0, 0}, {1, 0.5, 0.5}, {2, 1, 1}});
    PiecewiseLinear tail07({{0, 0, 0}, {1, 0.7, 0.7}});
    PiecewiseLinear tail09({{0, 0, 0}, {0.5, 0.2, 0.4}, {3, 0.9, 0.9}});
    std::vector<std::pair<ProbNorm, bool>> norms{
        {ProbNorm::simple(kExp), true},
        {ProbNorm::simple(BaseCdf::uniform_unit()), true},
        {ProbNorm::simple(BaseCdf::custom(reaches_one)), true},
        {ProbNorm::alpha_simple(kExp, 2), true},
        {ProbNorm::alpha_simple(BaseCdf::uniform_unit(), 0.5), true},
        {ProbNorm::simple(BaseCdf::half_exponential()), false},
        {ProbNorm::simple(BaseCdf::custom(tail07)), false},
        {ProbNorm::alpha_simple(BaseCdf::half_exponential(), 2), false},
        {ProbNorm::alpha_simple(BaseCdf::custom(tail09), 3), false},
        {ProbNorm::simple(BaseCdf::custom(tail09)), false}};
    VectorSpace space{2, NormKind::l2};
    Sampler rng(808);
    int agreeing = 0;
    for (const auto& [prob, dplus] : norms) {
        PNSpaceModel s{space, prob, TriangleFn::tau_m(), TriangleFn::tau_m()};
        std::vector<Vec> pts{space.zero()};
        for (int i = 0; i < 5; ++i) pts.push_back(detail::sample_vector(space, rng, 1e-2, 1e2));
        ContinuityProbe probe = scalar_continuity_probe(s, pts);
        // tail of G read off far out, without the library's tail bookkeeping
        double far = s.nu(pts[1])(1e12);
        bool oracle_dplus = far > 1 - 1e-6;
        if (!probe.agree() || probe.in_dplus != dplus || oracle_dplus != dplus)
            v.fail(prob.name() + ": continuity and D+ verdicts differ");
        else
            ++agreeing;
    }
    if (v.ok) v.detail = fmt("%.0f of 10 spaces agree (5 in D+, 5 not)", agreeing);
    return v;
}

Outcome c9() {
    Outcome v;
    VectorSpace space{2, NormKind::l2};
    const std::vector<double> ks{2, 3, 5};
    std::vector<std::pair<FNorm, bool>> variants{{FNorm::plain(), false}, {FNorm::norm_power(0.5), false},
                                                 {FNorm::norm_ratio(1), true}};
    int total = 0;
    for (const auto& [g, g_bounded] : variants) {
        Sampler rng(909);
        for (int i = 0; i < 20; ++i) {
            SetSpec set = SetSpec::singleton(space.zero());
            bool unbounded = false;
            switch (i % 5) {
                case 0: {
                    std::vector<Vec> pts;
                    for (int j = 0; j < 4; ++j) pts.push_back(detail::sample_vector(space, rng, 0.1, 100));
                    set = SetSpec::finite(pts);
                    break;
                }
                case 1: set = SetSpec::ball(rng.log_uniform(0.1, 100)); break;
                case 2: set = SetSpec::ray(rng.direction(2)); unbounded = true; break;
                case 3: set = SetSpec::line(rng.direction(2)); unbounded = true; break;
                default: set = SetSpec::singleton(detail::sample_vector(space, rng, 0.1, 100)); break;
            }
            CheckReport r = fnormed_dbounded_props(space, g, set, ks);
            if (!r.passed()) v.fail(r.subject + " fails");
            // sup of g over A is finite unless A is unbounded in norm and g is not bounded
            bool expect = !unbounded || g_bounded;
            if (is_D_bounded(fnorm_space(space, g), set).d_bounded != expect) v.fail(r.subject + ": D-bounded verdict");
            ++total;
        }
    }
    if (v.ok) v.detail = fmt("%.0f set specs over 3 F-norms pass all three properties", total);
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"C1 tau_M of steps adds thresholds", c1},
        {"C2 alpha-simple closed form under tau_{M,L}", c2},
        {"C3 alpha-scaling, beta formula and tau_{M,L} characterization agree", c3},
        {"C4 Hoelder chain for T_G", c4},
        {"C5 bounded versus D-bounded instances", c5},
        {"C6 power-2 transform round trip", c6},
        {"C7 Sibley metric", c7},
        {"C8 scalar continuity matches D+ membership", c8},
        {"C9 F-normed boundedness properties", c9}};
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        std::printf("[%s] %s: %s\n", r.ok ? "PASS" : "FAIL", name, r.detail.c_str());
        std::fflush(stdout);
        failed += !r.ok;
    }
    return failed == 0 ? 0 : 1;
}
