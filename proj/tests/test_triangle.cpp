#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "pnkit/sampling.hpp"
#include "pnkit/triangle.hpp"

using namespace pnkit;

namespace {

// sup (or inf) over s in [0, x] of T(F(s), G(L-complement)) on a uniform mesh.
double brute_convolution(const Ddf& f, const Ddf& g, const std::function<double(double, double)>& t,
                         const LOp& l, double x, bool sup_mode, int n = 20000) {
    double best = sup_mode ? 0.0 : 1.0;
    for (int i = 0; i <= n; ++i) {
        double s = x * i / n;
        double r = l.solve_second(x, s);
        if (r < 0) continue;
        double v = t(f(s), g(r));
        best = sup_mode ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

std::vector<Ddf> smooth_ddfs() {
    return {Ddf::scaled(BaseCdf::exponential(), 1.0), Ddf::scaled(BaseCdf::exponential(), 2.5),
            Ddf::scaled(BaseCdf::uniform_unit(), 1.5), Ddf::scaled(BaseCdf::half_exponential(), 0.7)};
}

}  // namespace

TEST(Apply, TauMAddsStepsExactly) {
    Ddf r = apply(TriangleFn::tau_m(), make_eps(1), make_eps(2));
    ASSERT_TRUE(r.is_step());
    EXPECT_EQ(r(3.0), 0.0);
    EXPECT_EQ(r(std::nextafter(3.0, 4.0)), 1.0);
    EXPECT_EQ(brute_convolution(make_eps(1), make_eps(2), [](double a, double b) { return std::min(a, b); },
                                LOp::sum(), 3.0, true),
              0.0);
    EXPECT_EQ(brute_convolution(make_eps(1), make_eps(2), [](double a, double b) { return std::min(a, b); },
                                LOp::sum(), 3.01, true),
              1.0);
}

TEST(Apply, EpsZeroIsIdentityForEveryVariant) {
    TNorm tg = make_tg(BaseCdf::exponential(), 2);
    std::vector<TriangleFn> taus{TriangleFn::tau_m(),
                                 TriangleFn::tau_t(TNorm::product()),
                                 TriangleFn::tau_t_star(TNorm::minimum()),
                                 TriangleFn::tau_ml(LOp::power_sum(2)),
                                 TriangleFn::tau_t_star_l(TNorm::product(), LOp::power_sum(2)),
                                 TriangleFn::tau_t(tg),
                                 TriangleFn::pointwise_m(),
                                 phi_transform_triangle(TriangleFn::tau_m(), PhiMap::power(2))};
    for (const auto& tau : taus)
        for (const auto& f : smooth_ddfs())
            for (double x : {0.01, 0.5, 1.0, 3.0, 40.0}) {
                EXPECT_EQ(apply(tau, make_eps(0), f)(x), f(x)) << tau.name();
                EXPECT_EQ(apply(tau, f, make_eps(0))(x), f(x)) << tau.name();
            }
}

TEST(Apply, PowerSumClosedForm) {
    // nu_p for an alpha = 2 simple space with ||p|| = 2, ||q|| = 1
    Ddf np = Ddf::scaled(BaseCdf::exponential(), 4), nq = Ddf::scaled(BaseCdf::exponential(), 1);
    TriangleFn tau = TriangleFn::tau_ml(LOp::power_sum(2));
    EXPECT_NEAR(apply(tau, np, nq)(9), 1 - std::exp(-1.0), 1e-12);
    ApplyOptions grid;
    grid.force_grid = true;
    EXPECT_NEAR(apply(tau, np, nq, grid)(9), 1 - std::exp(-1.0), 1e-3);
}

TEST(Apply, GridTailWhereBothInputsRoundToOne) {
    // every sample has F(u) and G(v) equal to 1.0 in floating point
    Ddf f = Ddf::scaled(BaseCdf::exponential(), 0.1), g = Ddf::scaled(BaseCdf::exponential(), 0.2);
    ApplyOptions grid;
    grid.force_grid = true;
    for (const auto& tau : {TriangleFn::tau_m(), TriangleFn::tau_t(make_tg(BaseCdf::exponential(), 2.0))}) {
        double v = apply(tau, f, g, grid)(200.0);
        EXPECT_GT(v, 0.97) << tau.name();
        EXPECT_LE(v, 1.0) << tau.name();
    }
}

TEST(Apply, QuasiSumMatchesBruteForce) {
    auto fs = smooth_ddfs();
    fs.push_back(make_eps(0.8));
    fs.push_back(Ddf::breakpoints(PiecewiseLinear({{0, 0, 0}, {1, 0.4, 0.6}, {2, 0.9, 1}})));
    auto mn = [](double a, double b) { return std::min(a, b); };
    for (const auto& l : {LOp::sum(), LOp::power_sum(2)}) {
        TriangleFn tau = TriangleFn::tau_ml(l);
        for (std::size_t i = 0; i < fs.size(); ++i)
            for (std::size_t j = i; j < fs.size(); ++j) {
                Ddf r = apply(tau, fs[i], fs[j]);
                for (double x : {0.3, 1.1, 2.7, 6.0}) {
                    double b = brute_convolution(fs[i], fs[j], mn, l, x, true);
                    EXPECT_NEAR(r(x), b, 2e-3) << l.name() << " " << i << " " << j << " x=" << x;
                }
            }
    }
}

TEST(Apply, GridSearchMatchesBruteForce) {
    auto fs = smooth_ddfs();
    fs.push_back(Ddf::breakpoints(PiecewiseLinear({{0, 0, 0}, {1, 0.4, 0.6}, {2, 0.9, 1}})));
    TNorm tg = make_tg(BaseCdf::exponential(), 2);
    struct Case {
        TriangleFn tau;
        std::function<double(double, double)> t;
        LOp l;
        bool sup;
    };
    std::vector<Case> cases{
        {TriangleFn::tau_t(TNorm::product()), [](double a, double b) { return a * b; }, LOp::sum(), true},
        {TriangleFn::tau_t(TNorm::lukasiewicz()), [](double a, double b) { return std::max(a + b - 1, 0.0); },
         LOp::sum(), true},
        {TriangleFn::tau_t(tg), tg, LOp::sum(), true},
        {TriangleFn::tau_t_star(TNorm::minimum()), [](double a, double b) { return std::max(a, b); }, LOp::sum(),
         false},
        {TriangleFn::tau_t_star_l(TNorm::product(), LOp::power_sum(2)),
         [](double a, double b) { return a + b - a * b; }, LOp::power_sum(2), false},
    };
    for (const auto& c : cases)
        for (std::size_t i = 0; i < fs.size(); ++i)
            for (std::size_t j = i; j < fs.size(); j += 2) {
                Ddf r = apply(c.tau, fs[i], fs[j]);
                for (double x : {0.4, 1.3, 3.5}) {
                    double b = brute_convolution(fs[i], fs[j], c.t, c.l, x, c.sup);
                    EXPECT_NEAR(r(x), b, 2e-3) << c.tau.name() << " " << i << " " << j << " x=" << x;
                }
            }
}

TEST(Apply, ExactAndGridRoutesAgreeForTauM) {
    Sampler rng(1);
    auto fs = smooth_ddfs();
    ApplyOptions grid;
    grid.force_grid = true;
    for (int s = 0; s < 20; ++s) {
        const Ddf& f = fs[rng.index(fs.size())];
        const Ddf& g = fs[rng.index(fs.size())];
        double x = rng.log_uniform(0.05, 20);
        EXPECT_NEAR(apply(TriangleFn::tau_m(), f, g)(x), apply(TriangleFn::tau_m(), f, g, grid)(x), 1e-3) << x;
    }
}

TEST(Apply, ResultsAreDdfs) {
    auto fs = smooth_ddfs();
    std::vector<TriangleFn> taus{TriangleFn::tau_m(), TriangleFn::tau_t(TNorm::product()),
                                 TriangleFn::tau_t_star(TNorm::product()), TriangleFn::pointwise_m()};
    for (const auto& tau : taus) {
        Ddf r = apply(tau, fs[0], fs[2]);
        EXPECT_EQ(r(0), 0.0);
        double prev = 0;
        for (int i = 1; i <= 60; ++i) {
            double v = r(0.1 * i);
            EXPECT_GE(v, prev - 1e-9) << tau.name();
            EXPECT_LE(v, 1.0);
            prev = v;
        }
    }
}

TEST(Properties, TauTBelowTauTStar) {
    auto fs = smooth_ddfs();
    for (const auto& t : {TNorm::minimum(), TNorm::product()})
        for (std::size_t i = 0; i < fs.size(); ++i)
            for (std::size_t j = i; j < fs.size(); ++j) {
                Ddf lo = apply(TriangleFn::tau_t(t), fs[i], fs[j]);
                Ddf hi = apply(TriangleFn::tau_t_star(t), fs[i], fs[j]);
                auto c = compare_pointwise(lo, hi, comparison_grid({fs[i], fs[j]}, 6), 1e-3);
                EXPECT_TRUE(c.order == Ordering::le || c.order == Ordering::eq) << t.name();
            }
}

TEST(Properties, MonotoneInFirstArgument) {
    Ddf lo = Ddf::scaled(BaseCdf::exponential(), 3), hi = Ddf::scaled(BaseCdf::exponential(), 1);
    Ddf g = Ddf::scaled(BaseCdf::uniform_unit(), 2);
    for (const auto& tau : {TriangleFn::tau_m(), TriangleFn::tau_t(TNorm::product()),
                            TriangleFn::tau_t_star(TNorm::minimum()), TriangleFn::pointwise_m()}) {
        Ddf a = apply(tau, lo, g), b = apply(tau, hi, g);
        for (double x : {0.2, 1.0, 2.5, 7.0}) EXPECT_LE(a(x), b(x) + 1e-3) << tau.name();
    }
}

TEST(Compare, PointwiseMIsMaximal) {
    auto fs = smooth_ddfs();
    std::vector<TriangleFn> others{TriangleFn::tau_m(), TriangleFn::tau_t(TNorm::product()),
                                   TriangleFn::tau_ml(LOp::power_sum(2))};
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = 0; j < fs.size(); ++j) {
            Ddf top = apply(TriangleFn::pointwise_m(), fs[i], fs[j]);
            auto xs = comparison_grid({fs[i], fs[j]}, 6);
            for (const auto& tau : others) {
                auto c = compare_pointwise(top, apply(tau, fs[i], fs[j]), xs, 1e-3);
                EXPECT_TRUE(c.order == Ordering::ge || c.order == Ordering::eq) << tau.name();
            }
            EXPECT_EQ(compare_pointwise(top, top, xs, 0).order, Ordering::eq);
        }
}

TEST(Compare, PowerSumDominatesTg) {
    TriangleFn ml = TriangleFn::tau_ml(LOp::power_sum(2));
    TriangleFn tg = TriangleFn::tau_t(make_tg(BaseCdf::exponential(), 2));
    Sampler rng(2);
    for (int s = 0; s < 6; ++s) {
        double a = rng.uniform(0.3, 3), b = rng.uniform(0.3, 3);
        Ddf np = Ddf::scaled(BaseCdf::exponential(), a * a), nq = Ddf::scaled(BaseCdf::exponential(), b * b);
        auto c = compare_pointwise(apply(ml, np, nq), apply(tg, np, nq), comparison_grid({np, nq}, 6), 1e-3);
        EXPECT_TRUE(c.order == Ordering::ge || c.order == Ordering::eq) << to_string(c.order);
    }
}

TEST(Compare, DetectsIncomparable) {
    Ddf a = Ddf::scaled(BaseCdf::uniform_unit(), 1), b = Ddf::scaled(BaseCdf::half_exponential(), 0.1);
    auto c = compare_pointwise(a, b, {0.1, 0.5, 2.0}, 1e-9);
    EXPECT_EQ(c.order, Ordering::incomparable);
    EXPECT_GT(c.max_above, 0);
    EXPECT_GT(c.max_below, 0);
}

TEST(PhiTransform, IdentityAndPowerTwoSteps) {
    TriangleFn same = phi_transform_triangle(TriangleFn::tau_m(), PhiMap::identity());
    EXPECT_EQ(same.name(), TriangleFn::tau_m().name());
    TriangleFn t = phi_transform_triangle(TriangleFn::tau_m(), PhiMap::power(2));
    Ddf r = apply(t, make_eps(1), make_eps(1));
    EXPECT_EQ(r(4.0), 0.0);
    EXPECT_EQ(r(4.0 + 1e-9), 1.0);
    Ddf q = apply(TriangleFn::tau_ml(LOp::power_sum(2)), make_eps(1), make_eps(1));
    ASSERT_TRUE(q.is_step());
    EXPECT_EQ(q(4.0), 0.0);
    EXPECT_EQ(q(4.0 + 1e-9), 1.0);
}

TEST(PhiTransform, MatchesFromPhiConvolution) {
    Sampler rng(3);
    auto fs = smooth_ddfs();
    ApplyOptions grid;
    grid.force_grid = true;
    PhiMap phi = PhiMap::power(2);
    TriangleFn lhs = phi_transform_triangle(TriangleFn::tau_m(), phi);
    TriangleFn rhs = TriangleFn::tau_ml(LOp::from_phi(phi));
    TriangleFn prod_l = phi_transform_triangle(TriangleFn::tau_t(TNorm::product()), phi);
    TriangleFn prod_r = TriangleFn::tau_tl(TNorm::product(), LOp::from_phi(phi));
    for (int s = 0; s < 15; ++s) {
        const Ddf& f = fs[rng.index(fs.size())];
        const Ddf& g = fs[rng.index(fs.size())];
        double x = rng.log_uniform(0.05, 30);
        EXPECT_NEAR(apply(lhs, f, g, grid)(x), apply(rhs, f, g)(x), 1e-3) << x;
        EXPECT_NEAR(apply(prod_l, f, g)(x), apply(prod_r, f, g)(x), 1e-3) << x;
    }
}

TEST(Axioms, TauMOnStandardSamples) {
    std::vector<Ddf> samples{make_eps(1), Ddf::scaled(BaseCdf::exponential(), 1),
                             Ddf::scaled(BaseCdf::uniform_unit(), 1)};
    CheckReport r = check_triangle_axioms(TriangleFn::tau_m(), samples, 1);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.find("identity")->path, "exact");
}

TEST(Axioms, PointwiseMAndPowerSumPass) {
    auto fs = smooth_ddfs();
    EXPECT_TRUE(check_triangle_axioms(TriangleFn::pointwise_m(), fs, 2).passed());
    CheckReport r = check_triangle_axioms(TriangleFn::tau_ml(LOp::power_sum(2)), fs, 3);
    for (const auto& a : r.results) EXPECT_TRUE(a.passed) << a.name << " " << a.worst;
}

TEST(Axioms, GridRouteProductPasses) {
    std::vector<Ddf> samples{make_eps(0.5), Ddf::scaled(BaseCdf::exponential(), 1),
                             Ddf::scaled(BaseCdf::uniform_unit(), 2)};
    CheckReport r = check_triangle_axioms(TriangleFn::tau_t(TNorm::product()), samples, 4);
    for (const auto& a : r.results) EXPECT_TRUE(a.passed) << a.name << " " << a.worst;
    EXPECT_EQ(r.find("commutativity")->path, "grid");
}

TEST(Axioms, NonCommutativeTnormIsFlagged) {
    TNorm skew = TNorm::custom([](double x, double y) { return x * y * y; }, "skew");
    std::vector<Ddf> samples{Ddf::scaled(BaseCdf::exponential(), 1), Ddf::scaled(BaseCdf::uniform_unit(), 2),
                             Ddf::scaled(BaseCdf::exponential(), 0.3)};
    CheckReport r = check_triangle_axioms(TriangleFn::tau_t(skew), samples, 5);
    EXPECT_FALSE(r.find("commutativity")->passed);
    EXPECT_FALSE(r.find("commutativity")->witness.empty());
}

TEST(Performance, HundredStepPairsUnderASecond) {
    auto start = std::chrono::steady_clock::now();
    for (int i = 1; i <= 100; ++i) {
        Ddf r = apply(TriangleFn::tau_m(), make_eps(i / 7.0), make_eps(i / 3.0));
        ASSERT_TRUE(r.is_step());
    }
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
}
