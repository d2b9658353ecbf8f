#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "clruin/claims.hpp"
#include "clruin/errors.hpp"
#include "test_support.hpp"

using clruin::ClaimDistribution;
using clruin::ClaimKind;
using clruin::DomainError;
using clruin::RandomStream;
using testsupport::quad_to_inf;

TEST_CASE("moments: closed forms against quadrature and exact sums") {
    const auto exp1 = ClaimDistribution::exponential(1.0);
    CHECK(exp1.moment(3) == doctest::Approx(6.0).epsilon(1e-14));

    const auto g2 = ClaimDistribution::gamma_two(1.0);
    CHECK(g2.moment(2) == doctest::Approx(6.0).epsilon(1e-14));
    // independent quadrature of y^2 * beta^2 y e^{-beta y}
    const double by_quad =
        quad_to_inf([](double y) { return y * y * y * std::exp(-y); }, 0.0, 1.0);
    CHECK(g2.moment(2) == doctest::Approx(by_quad).epsilon(1e-10));

    const auto pm = ClaimDistribution::discrete({1.0}, {1.0});
    CHECK(pm.moment(2) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mgf: values, radius, and domain error at the singularity") {
    const auto exp1 = ClaimDistribution::exponential(1.0);
    CHECK(exp1.mgf(0.0) == doctest::Approx(1.0).epsilon(1e-15));

    const auto exp2 = ClaimDistribution::exponential(2.0);
    CHECK(exp2.mgf(1.0) == doctest::Approx(2.0).epsilon(1e-14));
    const double by_quad = quad_to_inf(
        [](double y) { return std::exp(y) * 2.0 * std::exp(-2.0 * y); }, 0.0, 1.0);
    CHECK(exp2.mgf(1.0) == doctest::Approx(by_quad).epsilon(1e-10));

    CHECK_THROWS_AS((void)exp1.mgf(1.0), DomainError);
    CHECK_THROWS_AS((void)exp1.mgf(1.5), DomainError);
    CHECK(exp1.mgf_radius() == doctest::Approx(1.0));
    CHECK(std::isinf(ClaimDistribution::discrete({2.0}, {1.0}).mgf_radius()));
}

TEST_CASE("mean residual life") {
    const auto exp2 = ClaimDistribution::exponential(2.0);
    CHECK(exp2.mean_residual_life(5.0) == doctest::Approx(0.5).epsilon(1e-14));

    const auto g2 = ClaimDistribution::gamma_two(1.0);
    CHECK(g2.mean_residual_life(0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(g2.mean_residual_life(3.0) == doctest::Approx(1.25).epsilon(1e-14));
    // tail quadrature oracle: int_d^inf S(y) dy / S(d)
    const double d = 3.0;
    const double surv = std::exp(-d) * (1.0 + d);
    const double tail = quad_to_inf(
        [](double y) { return std::exp(-y) * (1.0 + y); }, d, 1.0);
    CHECK(g2.mean_residual_life(d) == doctest::Approx(tail / surv).epsilon(1e-10));

    const auto pm = ClaimDistribution::discrete({1.0}, {1.0});
    CHECK_THROWS_AS((void)pm.mean_residual_life(1.0), DomainError);
    CHECK_THROWS_AS((void)pm.mean_residual_life(2.0), DomainError);
}

TEST_CASE("mean residual life invariants on a level grid") {
    const auto exp1 = ClaimDistribution::exponential(1.0);
    const auto g2 = ClaimDistribution::gamma_two(1.0);
    double prev = g2.mean_residual_life(0.0);
    for (double d = 0.0; d <= 10.0; d += 0.5) {
        CHECK(exp1.mean_residual_life(d) == doctest::Approx(1.0).epsilon(1e-13));
        const double mrl = g2.mean_residual_life(d);
        CHECK(mrl >= 1.0 - 1e-13);
        CHECK(mrl <= 2.0 + 1e-13);
        if (d > 0.0) CHECK(mrl < prev);
        prev = mrl;
    }
}

TEST_CASE("tilted tail moments") {
    const auto exp1 = ClaimDistribution::exponential(1.0);
    CHECK(exp1.tilted_tail_moment(7.0, 2, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(exp1.tilted_tail_moment(0.0, 2, 0.5) == doctest::Approx(16.0).epsilon(1e-13));
    const double by_quad = quad_to_inf(
        [](double y) { return y * y * std::exp(0.5 * y) * std::exp(-y); }, 0.0, 2.0);
    CHECK(exp1.tilted_tail_moment(0.0, 2, 0.5) ==
          doctest::Approx(by_quad).epsilon(1e-10));

    const auto two = ClaimDistribution::discrete({2.0}, {1.0});
    CHECK(two.tilted_tail_moment(1.0, 1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS((void)exp1.tilted_tail_moment(0.0, 2, 1.0), DomainError);
}

TEST_CASE("untilted tail moments agree with independent residual quadrature") {
    // c = 0 reduces to a plain residual moment; relative error <= 1e-8
    for (const auto& dist :
         {ClaimDistribution::exponential(1.3), ClaimDistribution::gamma_two(0.7)}) {
        for (double d : {0.0, 0.4, 2.5}) {
            for (int k : {1, 2, 3}) {
                const double surv = dist.survival(d);
                const double scale = 1.0 / dist.rate();
                const double raw = testsupport::quad(
                    [&](double y) {
                        return std::pow(y - d, k) * dist.density(y);
                    },
                    d, d + 80.0 * scale, 1e-14);
                const double oracle = raw / surv;
                CHECK(dist.tilted_tail_moment(d, k, 0.0) ==
                      doctest::Approx(oracle).epsilon(1e-8));
            }
        }
    }
    const auto disc = ClaimDistribution::discrete({0.5, 1.0, 3.0}, {0.25, 0.35, 0.4});
    // exact sum oracle at d = 0.75: only 1.0 and 3.0 remain
    const double surv = 0.75;
    const double oracle = (0.35 * 0.25 * 0.25 + 0.4 * 2.25 * 2.25) / surv;
    CHECK(disc.tilted_tail_moment(0.75, 2, 0.0) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("mgf dominates its first-order chord") {
    for (const auto& dist :
         {ClaimDistribution::exponential(1.0), ClaimDistribution::gamma_two(2.0),
          ClaimDistribution::discrete({0.5, 2.0}, {0.5, 0.5})}) {
        const double mean = dist.moment(1);
        const double cap = std::isfinite(dist.mgf_radius()) ? dist.mgf_radius() : 3.0;
        for (int i = 0; i < 20; ++i) {
            const double u = 0.95 * cap * static_cast<double>(i) / 20.0;
            CHECK(dist.mgf(u) >= 1.0 + u * mean - 1e-12);
        }
    }
}

TEST_CASE("sampling: determinism, point mass, and law of large numbers") {
    const auto exp1 = ClaimDistribution::exponential(1.0);
    RandomStream a(42);
    RandomStream b(42);
    for (int i = 0; i < 100; ++i) CHECK(exp1.sample(a) == exp1.sample(b));

    const auto three = ClaimDistribution::discrete({3.0}, {1.0});
    RandomStream c(7);
    for (int i = 0; i < 10; ++i) CHECK(three.sample(c) == 3.0);

    const auto exp2 = ClaimDistribution::exponential(2.0);
    RandomStream d(123);
    const int draws = 1000000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) sum += exp2.sample(d);
    const double mean = sum / draws;
    const double se = 0.5 / std::sqrt(static_cast<double>(draws));
    CHECK(std::fabs(mean - 0.5) < 5.0 * se);
}

TEST_CASE("discrete construction rules") {
    CHECK_THROWS(ClaimDistribution::discrete({1.0, 2.0}, {0.5, 0.6}));
    CHECK_THROWS(ClaimDistribution::discrete({-1.0, 2.0}, {0.5, 0.5}));
    CHECK_THROWS(ClaimDistribution::discrete({}, {}));
    CHECK_THROWS(ClaimDistribution::discrete({1.0}, {1.0, 0.0}));

    // unsorted input is sorted; duplicates merged
    const auto d = ClaimDistribution::discrete({2.0, 1.0, 2.0}, {0.25, 0.5, 0.25});
    CHECK(d.support() == std::vector<double>{1.0, 2.0});
    CHECK(d.probs()[1] == doctest::Approx(0.5));
    CHECK(d.survival(1.0) == doctest::Approx(0.5));
    CHECK(d.survival(2.0) == 0.0);
}

TEST_CASE("survival and integrated tail") {
    const auto g2 = ClaimDistribution::gamma_two(1.0);
    CHECK(g2.survival(0.0) == 1.0);
    CHECK(g2.tail_integral(0.0) == doctest::Approx(g2.moment(1)).epsilon(1e-14));
    const double ti = quad_to_inf(
        [&](double y) { return g2.survival(y); }, 1.5, 1.0);
    CHECK(g2.tail_integral(1.5) == doctest::Approx(ti).epsilon(1e-10));

    const auto disc = ClaimDistribution::discrete({1.0, 4.0}, {0.7, 0.3});
    CHECK(disc.tail_integral(2.0) == doctest::Approx(0.3 * 2.0).epsilon(1e-14));
}

TEST_CASE("scaling a claim law divides its support") {
    const auto exp1 = ClaimDistribution::exponential(1.0);
    CHECK(exp1.scaled(2.0).rate() == doctest::Approx(2.0));
    CHECK(exp1.scaled(2.0).moment(1) == doctest::Approx(0.5));

    const auto disc = ClaimDistribution::discrete({1.0, 4.0}, {0.7, 0.3});
    const auto half = disc.scaled(2.0);
    CHECK(half.support() == std::vector<double>{0.5, 2.0});
    CHECK(half.moment(1) == doctest::Approx(disc.moment(1) / 2.0).epsilon(1e-14));
}

TEST_CASE("sup scan points") {
    CHECK(ClaimDistribution::exponential(2.0).sup_scan_points() ==
          std::vector<double>{0.0});
    CHECK(ClaimDistribution::gamma_two(2.0).sup_scan_points() ==
          std::vector<double>{0.0});
    const auto disc = ClaimDistribution::discrete({1.0, 3.0}, {0.5, 0.5});
    const auto pts = disc.sup_scan_points();
    // 0, first support point (tail mass remains), and the midpoint; the top
    // support point has no tail beyond it
    CHECK(pts == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("json round trip") {
    const auto disc = ClaimDistribution::discrete({1.0, 4.0}, {0.7, 0.3});
    const auto back = ClaimDistribution::from_json(disc.to_json());
    CHECK(back.kind() == ClaimKind::DiscreteEmpirical);
    CHECK(back.support() == disc.support());
    CHECK(back.probs() == disc.probs());

    const auto exp3 = ClaimDistribution::from_json(
        ClaimDistribution::exponential(3.0).to_json());
    CHECK(exp3.kind() == ClaimKind::Exponential);
    CHECK(exp3.rate() == 3.0);

    CHECK_THROWS(ClaimDistribution::from_json(nlohmann::json{{"kind", "pareto"}}));
}
