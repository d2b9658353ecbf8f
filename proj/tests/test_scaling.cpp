#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "clruin/bounds.hpp"
#include "clruin/errors.hpp"
#include "clruin/scaling.hpp"
#include "test_support.hpp"

using namespace clruin;

namespace {

ScaledModel make_exp(double theta, double beta, double n, double lambda = 1.0) {
    return ScaledModel(ModelParams(theta, lambda, ClaimDistribution::exponential(beta)), n);
}

ScaledModel make_g2(double theta, double beta, double n, double lambda = 1.0) {
    return ScaledModel(ModelParams(theta, lambda, ClaimDistribution::gamma_two(beta)), n);
}

}  // namespace

TEST_CASE("scaling invariances hold across a parameter sweep") {
    for (double theta : {0.05, 0.1, 0.5}) {
        for (double lambda : {1.0, 3.0}) {
            for (double n : {0.5, 1.0, 7.0, 1024.0}) {
                const ScaledModel m(
                    ModelParams(theta, lambda, ClaimDistribution::gamma_two(2.0)), n);
                const double net_base = m.base.premium_rate() - lambda * m.base.dist.moment(1);
                const double net_scaled =
                    m.premium_rate_n() - m.lambda_n() * m.scaled_claims().moment(1);
                CHECK(net_scaled == doctest::Approx(net_base).epsilon(1e-12));
                CHECK(m.lambda_n() * m.scaled_claims().moment(2) ==
                      doctest::Approx(lambda * m.base.dist.moment(2)).epsilon(1e-12));
                CHECK(m.theta_n() == doctest::Approx(theta / std::sqrt(n)).epsilon(1e-14));
            }
        }
    }
    CHECK_THROWS(make_exp(0.1, 1.0, 0.0));
    CHECK_THROWS(make_exp(0.1, 1.0, -2.0));
}

TEST_CASE("diffusion decay rate") {
    CHECK(gamma_of(ClaimDistribution::exponential(1.0), 0.1).gamma ==
          doctest::Approx(0.1).epsilon(1e-14));
    CHECK(gamma_of(ClaimDistribution::exponential(2.5), 0.3).gamma ==
          doctest::Approx(0.3 * 2.5).epsilon(1e-14));
    CHECK(gamma_of(ClaimDistribution::gamma_two(1.0), 0.1).gamma ==
          doctest::Approx(2.0 / 3.0 * 0.1).epsilon(1e-14));
}

TEST_CASE("diffusion ruin probability") {
    const DiffusionApprox a{0.1};
    CHECK(psi_d(a, 0.0) == 1.0);
    CHECK(psi_d(a, 10.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(psi_d(a, 1e5) < 1e-300);
}

TEST_CASE("psi_n closed form values") {
    CHECK(psi_n(make_exp(0.1, 1.0, 4.0), 0.0, PsiMethod::ClosedForm) ==
          doctest::Approx(1.0 / 1.05).epsilon(1e-14));
    // n = 1 reduces to the base model
    const auto m1 = make_exp(0.1, 1.0, 1.0);
    for (double x : {0.0, 1.0, 5.0})
        CHECK(psi_n(m1, x, PsiMethod::ClosedForm) ==
              doctest::Approx(psi_closed_form(m1.base, x)).epsilon(1e-15));
    CHECK_THROWS_AS(
        (void)psi_n(ScaledModel(ModelParams(0.1, 1.0,
                                            ClaimDistribution::discrete({1.0}, {1.0})),
                                4.0),
                    1.0, PsiMethod::ClosedForm),
        UnsupportedDistribution);
}

TEST_CASE("psi_n: three routes agree for both continuous families") {
    for (double n : {1.0, 4.0, 16.0, 64.0}) {
        const auto me = make_exp(0.1, 1.0, n);
        const auto mg = make_g2(0.1, 1.0, n);
        const PsiNEvaluator exp_closed(me, PsiMethod::ClosedForm, 20.0);
        const PsiNEvaluator exp_volterra(me, PsiMethod::Volterra, 20.0);
        const PsiNEvaluator g2_closed(mg, PsiMethod::ClosedForm, 20.0);
        const PsiNEvaluator g2_volterra(mg, PsiMethod::Volterra, 20.0);
        for (double x : {0.0, 0.5, 2.0, 10.0, 20.0}) {
            CHECK(exp_closed(x) == doctest::Approx(exp_volterra(x)).epsilon(2e-4));
            CHECK(g2_closed(x) == doctest::Approx(g2_volterra(x)).epsilon(2e-4));
        }
        for (double x : {0.0, 1.0, 5.0}) {
            CHECK(std::fabs(psi_n(me, x, PsiMethod::PK) - exp_closed(x)) <= 5e-3);
            CHECK(std::fabs(psi_n(mg, x, PsiMethod::PK) - g2_closed(x)) <= 5e-3);
        }
    }
}

TEST_CASE("gamma-2 closed form tracks the Volterra route at moderate n") {
    const auto mg = make_g2(0.1, 1.0, 9.0);
    const PsiNEvaluator closed(mg, PsiMethod::ClosedForm, 10.0);
    const PsiNEvaluator volterra(mg, PsiMethod::Volterra, 10.0,
                                 {.volterra_step = 0.005});
    for (double x = 0.0; x <= 10.0; x += 0.5)
        CHECK(std::fabs(closed(x) - volterra(x)) <= 1e-5);
}

TEST_CASE("scaled adjustment coefficient") {
    // explicit root formula for gamma-2 claims
    const auto mg = make_g2(0.1, 1.0, 100.0);
    CHECK(rn_scaled(mg) ==
          doctest::Approx(gamma_two_adjustment_root(0.1, 1.0, 100.0)).epsilon(1e-10));

    // exponential: theta beta sqrt(n) / (sqrt(n) + theta)
    for (double n : {1.0, 4.0, 100.0, 4096.0}) {
        const auto me = make_exp(0.1, 1.0, n);
        const double sn = std::sqrt(n);
        CHECK(rn_scaled(me) == doctest::Approx(0.1 * sn / (sn + 0.1)).epsilon(1e-12));
    }

    // approach to the diffusion rate from below
    const auto big = make_exp(0.1, 1.0, 1e6);
    const double gamma = gamma_of(big.base.dist, 0.1).gamma;
    CHECK(std::fabs(rn_scaled(big) - gamma) < 1e-2 * gamma);

    double prev = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const double n = std::pow(4.0, k);
        for (const auto& model : {make_exp(0.1, 1.0, n), make_g2(0.1, 1.0, n)}) {
            const double rn = rn_scaled(model);
            const double g = gamma_of(model.base.dist, 0.1).gamma;
            CHECK(rn < g);
        }
        const double rn_exp = rn_scaled(make_exp(0.1, 1.0, n));
        CHECK(rn_exp > prev);
        prev = rn_exp;
    }
}

TEST_CASE("asymptotic constant of the scaled family") {
    // n = 1 exponential reduces to the classical constant 1/(1+theta)
    CHECK(cl_asymptotic_constant(make_exp(0.1, 1.0, 1.0)) ==
          doctest::Approx(1.0 / 1.1).epsilon(1e-10));

    const double at_top = cl_asymptotic_constant(make_exp(0.1, 1.0, std::pow(4.0, 8)));
    CHECK(std::fabs(at_top - 1.0) < 1e-2);

    for (int k = 1; k <= 8; ++k)
        CHECK(cl_asymptotic_constant(make_g2(0.1, 1.0, std::pow(4.0, k))) > 0.0);
}

TEST_CASE("psi_n e^{Rn x} approaches 1 pointwise") {
    const double n = std::pow(4.0, 8);
    for (const auto& model : {make_exp(0.1, 1.0, n), make_g2(0.1, 1.0, n)}) {
        const double rn = rn_scaled(model);
        const PsiNEvaluator psi(model, PsiMethod::ClosedForm, 6.0);
        for (double x : {0.0, 1.0, 5.0})
            CHECK(std::fabs(psi(x) * std::exp(rn * x) - 1.0) < 5e-2);
    }
}

TEST_CASE("scaled operator annihilates the scaled solution") {
    const auto model = make_exp(0.1, 1.0, 4.0);
    const double tn = model.theta_n();
    const double rate = 0.1 / (1.0 + tn);
    const auto u = GridFunction::analytic(
        [=](double x) { return std::exp(-rate * x) / (1.0 + tn); },
        [=](double x) { return -rate * std::exp(-rate * x) / (1.0 + tn); });
    for (double x : {0.5, 1.0, 3.0, 8.0})
        CHECK(std::fabs(fn_operator(model, u, x, 1e-12).value) <= 1e-9);
}

TEST_CASE("scaled operator signs at the shifted diffusion bounds") {
    const auto dist = ClaimDistribution::exponential(1.0);
    const double theta = 0.1;
    const auto lower = make_lower_cert(dist, theta, 0.01);
    const auto upper = make_upper_cert(dist, theta, 0.1);
    const double gamma = gamma_of(dist, theta).gamma;

    for (double n : {4.0, 16.0, 256.0}) {
        REQUIRE(n > lower.n_lower);
        REQUIRE(n > upper.n_upper);
        const ScaledModel model(ModelParams(theta, 1.0, dist), n);
        const double sn = std::sqrt(n);

        const double shrink = 1.0 - lower.delta / sn;
        const auto sub = GridFunction::analytic(
            [=](double x) { return shrink * std::exp(-gamma * x); },
            [=](double x) { return -gamma * shrink * std::exp(-gamma * x); });
        const double srate = gamma - upper.alpha / sn;
        const auto super = GridFunction::analytic(
            [=](double x) { return std::exp(-srate * x); },
            [=](double x) { return -srate * std::exp(-srate * x); });

        for (double x = 0.25; x <= 12.0; x += 0.25) {
            CHECK(fn_operator(model, sub, x, 1e-12).value < 0.0);
            CHECK(fn_operator(model, super, x, 1e-12).value > 0.0);
        }
    }
}
