#include <gtest/gtest.h>

#include <cmath>

#include "pnkit/phi.hpp"
#include "pnkit/sampling.hpp"
#include "pnkit/spaces.hpp"
#include "pnkit/topology.hpp"

using namespace pnkit;

namespace {

// sup{u : phi(u) < t} by scanning a grid on [0, hi].
double grid_hat(const PhiMap& phi, double t, double hi, int n = 400000) {
    double best = 0.0;
    for (int i = 0; i <= n; ++i) {
        double u = hi * i / n;
        if (phi(u) < t) best = u;
    }
    return best;
}

std::vector<PhiMap> sample_maps() {
    return {PhiMap::identity(),
            PhiMap::power(2),
            PhiMap::power(0.5),
            PhiMap::linear(3),
            PhiMap::capped(2),
            PhiMap::piecewise({{0, 0}, {1, 2}, {2, 2}, {4, 5}}, 1.0),
            PhiMap::piecewise({{0, 0}, {1, 1}, {3, 2}}, 0.0)};
}

}  // namespace

TEST(QuasiInverse, PowerHasReciprocalExponent) {
    PhiMap hat = PhiMap::power(2).quasi_inverse();
    EXPECT_DOUBLE_EQ(hat(4), 16.0);
    EXPECT_NEAR(grid_hat(PhiMap::power(2), 4, 20), 16.0, 1e-4);
    EXPECT_TRUE(PhiMap::identity().quasi_inverse().is_identity());
    EXPECT_EQ(hat(0), 0.0);
    EXPECT_TRUE(is_inf(hat(kInf)));
}

TEST(QuasiInverse, CappedClampsAtTheCap) {
    PhiMap hat = PhiMap::capped(2).quasi_inverse();
    for (double y : {0.5, 1.0, 2.0, 3.0, 100.0}) {
        EXPECT_DOUBLE_EQ(hat(y), std::min(y, 2.0));
        EXPECT_NEAR(grid_hat(PhiMap::capped(2), y, 5), std::min(y, 2.0), 1e-4);
    }
    EXPECT_TRUE(is_inf(PhiMap::capped(2)(2.5)));
    EXPECT_EQ(PhiMap::capped(2)(2.0), 2.0);
    EXPECT_FALSE(PhiMap::capped(2).is_bijective());
}

TEST(QuasiInverse, PiecewiseAgainstGrid) {
    PhiMap pw = sample_maps()[5];
    PhiMap hat = pw.quasi_inverse();
    for (double y : {0.5, 1.0, 2.0, 2.5, 4.0, 5.0, 7.0}) EXPECT_NEAR(hat(y), grid_hat(pw, y, 20), 1e-4) << y;
    PhiMap flat = sample_maps()[6];
    EXPECT_TRUE(is_inf(flat.quasi_inverse()(2.5)));
    EXPECT_EQ(flat.limit_at_infinity(), 2.0);
}

TEST(QuasiInverse, GaloisInequalities) {
    Sampler rng(1);
    for (const auto& phi : sample_maps()) {
        PhiMap hat = phi.quasi_inverse();
        for (int i = 0; i < 300; ++i) {
            double x = rng.log_uniform(1e-3, 1e2);
            double y = rng.log_uniform(1e-3, 1e2);
            if (!is_inf(phi(x))) {
                EXPECT_LE(hat(phi(x)), x * (1 + 1e-12)) << phi.describe();
            }
            if (!is_inf(hat(y))) {
                EXPECT_LE(phi(hat(y)), y * (1 + 1e-12)) << phi.describe();
            }
        }
    }
}

TEST(Classes, Bijectivity) {
    EXPECT_TRUE(PhiMap::power(3).is_bijective());
    EXPECT_TRUE(PhiMap::linear(0.5).is_bijective());
    EXPECT_TRUE(sample_maps()[5].is_bijective() == false);  // flat piece on [1, 2]
    EXPECT_TRUE(PhiMap::piecewise({{0, 0}, {1, 2}}, 1.0).is_bijective());
    EXPECT_FALSE(sample_maps()[6].is_bijective());
    EXPECT_THROW(PhiMap::power(0), std::invalid_argument);
    EXPECT_THROW(PhiMap::piecewise({{0, 0}, {1, 0}}, 1.0), std::invalid_argument);
}

TEST(TransformDdf, ExamplesAndIdentity) {
    Ddf f = Ddf::scaled(BaseCdf::exponential(), 1);
    EXPECT_TRUE(transform_ddf(f, PhiMap::identity()).repr().index() == f.repr().index());
    Ddf step = transform_ddf(make_eps(1), PhiMap::power(2));
    EXPECT_TRUE(step.is_step());
    EXPECT_EQ(step(1.0), 0.0);
    EXPECT_EQ(step(1.0 + 1e-9), 1.0);
    EXPECT_NEAR(transform_ddf(f, PhiMap::power(2))(4), 1 - std::exp(-2.0), 1e-15);
    Ddf s = transform_ddf(make_eps(3), PhiMap::capped(2));
    for (double x : {0.5, 1.9, 2.0, 2.1, 10.0}) EXPECT_EQ(s(x), make_eps(3)(PhiMap::capped(2)(x))) << x;
}

TEST(TransformDdf, PreservesInvariants) {
    Sampler rng(2);
    std::vector<Ddf> fs{make_eps(0.7), Ddf::scaled(BaseCdf::exponential(), 2),
                        Ddf::scaled(BaseCdf::half_exponential(), 1),
                        Ddf::breakpoints(PiecewiseLinear({{0, 0, 0}, {1, 0.3, 0.6}, {2, 1, 1}}))};
    for (const auto& phi : sample_maps())
        for (const auto& f : fs) {
            Ddf g = transform_ddf(f, phi);
            EXPECT_EQ(g(0), 0.0);
            double prev = 0.0;
            for (int i = 1; i <= 400; ++i) {
                double x = 0.02 * i;
                double v = g(x);
                EXPECT_GE(v, prev - 1e-15) << phi.describe() << " " << f.describe();
                EXPECT_NEAR(v, f(phi(x)), 1e-14);
                prev = v;
            }
            for (double k : g.knots())
                if (k > 0 && std::isfinite(k)) {
                    EXPECT_NEAR(g(k * (1 - 1e-11)), g(k), 1e-7) << phi.describe() << " " << f.describe() << " " << k;
                }
        }
}

TEST(TransformSpace, PowerOfSimpleIsAlphaSimple) {
    VectorSpace v{2, NormKind::l2};
    PNSpaceModel simple{v, ProbNorm::simple(BaseCdf::exponential()), TriangleFn::tau_m(), TriangleFn::tau_m()};
    PNSpaceModel t = transform_space(simple, PhiMap::power(2));
    Sampler rng(3);
    for (int i = 0; i < 100; ++i) {
        Vec p = detail::sample_vector(v, rng);
        double x = rng.log_uniform(1e-3, 1e3);
        double direct = 1 - std::exp(-std::sqrt(x) / v.norm(p));
        EXPECT_NEAR(t.nu(p)(x), direct, 1e-12);
        EXPECT_NEAR(t.nu(p)(x), BaseCdf::exponential()(std::sqrt(x) / v.norm(p)), 1e-12);
        // alpha-simple with alpha = 2 and base y -> G(sqrt y)
        double np = v.norm(p);
        EXPECT_NEAR(t.nu(p)(x), BaseCdf::exponential()(std::sqrt(x / (np * np))), 1e-12);
    }
    EXPECT_TRUE(check_serstnev(t, SerstnevKind::with_alpha(2), 100, 9).passed());
    EXPECT_FALSE(check_serstnev(t, SerstnevKind::plain(), 100, 9).passed());
}

TEST(TransformSpace, IdentityAndRoundTrip) {
    VectorSpace v{1, NormKind::l1};
    PNSpaceModel s{v, ProbNorm::simple(BaseCdf::exponential()), TriangleFn::tau_m(), TriangleFn::pointwise_m()};
    PNSpaceModel same = transform_space(s, PhiMap::identity());
    PNSpaceModel back = transform_space(transform_space(s, PhiMap::power(2)), PhiMap::power(0.5));
    Sampler rng(4);
    for (int i = 0; i < 100; ++i) {
        Vec p = detail::sample_vector(v, rng);
        double x = rng.log_uniform(1e-3, 1e3);
        EXPECT_EQ(same.nu(p)(x), s.nu(p)(x));
        EXPECT_NEAR(back.nu(p)(x), s.nu(p)(x), 1e-9);
    }
}

TEST(RefinementProbe, IdentityUsesEqualIndices) {
    VectorSpace v{1, NormKind::l1};
    PNSpaceModel s{v, ProbNorm::simple(BaseCdf::exponential()), TriangleFn::tau_m(), TriangleFn::tau_m()};
    RefinementProbe r = topology_refinement_probe(s, PhiMap::identity(), 10, 30, 1);
    EXPECT_TRUE(r.report.passed());
    ASSERT_EQ(r.forward_pairs.size(), 10u);
    for (auto [m, n] : r.forward_pairs) EXPECT_EQ(n, m);
}

TEST(RefinementProbe, PowerTwoBothDirections) {
    VectorSpace v{1, NormKind::l1};
    PNSpaceModel s{v, ProbNorm::simple(BaseCdf::exponential()), TriangleFn::tau_m(), TriangleFn::tau_m()};
    RefinementProbe r = topology_refinement_probe(s, PhiMap::power(2), 12, 40, 2);
    EXPECT_TRUE(r.reverse_tested);
    EXPECT_TRUE(r.report.passed());
    ASSERT_EQ(r.report.results.size(), 2u);
}

TEST(RefinementProbe, CappedForwardOnly) {
    VectorSpace v{1, NormKind::l1};
    PNSpaceModel s{v, ProbNorm::simple(BaseCdf::exponential()), TriangleFn::tau_m(), TriangleFn::tau_m()};
    RefinementProbe r = topology_refinement_probe(s, PhiMap::capped(0.5), 8, 40, 3);
    EXPECT_TRUE(r.report.find("forward_inclusion")->passed);
    EXPECT_TRUE(r.reverse_tested);  // min(y, b) is positive for y > 0
    EXPECT_TRUE(r.report.passed());
}

TEST(Transform, FiniteDBoundedSetsSurviveUnboundedPhi) {
    VectorSpace v{2, NormKind::linf};
    PNSpaceModel s{v, ProbNorm::alpha_simple(BaseCdf::exponential(), 2), TriangleFn::tau_ml(LOp::power_sum(2)),
                   TriangleFn::tau_ml(LOp::power_sum(2))};
    Sampler rng(5);
    for (const auto& phi : {PhiMap::power(2), PhiMap::linear(0.1), sample_maps()[5]}) {
        for (int i = 0; i < 10; ++i) {
            std::vector<Vec> pts;
            for (int j = 0; j < 4; ++j) pts.push_back(detail::sample_vector(v, rng));
            SetSpec a = SetSpec::finite(pts);
            ASSERT_TRUE(is_D_bounded(s, a).d_bounded);
            PNSpaceModel t = transform_space(s, phi);
            EXPECT_TRUE(is_D_bounded(t, a).d_bounded) << phi.describe();
            EXPECT_EQ(is_bounded(t, a).verdict, Verdict::bounded);
        }
    }
}
