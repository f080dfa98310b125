#include <doctest.h>

#include <cmath>

#include "lfrac/operators.hpp"
#include "lfrac/series.hpp"
#include "lfrac/special.hpp"
#include "support.hpp"

using lfrac::cplx;
using lfrac::FracOrder;
using lfrac::Func1D;
using lfrac::McConfig;
using lfrac::QuadratureRule;

TEST_CASE("jacobi_rule: mass, node location, alpha=1 Legendre limit") {
    for (double alpha : {0.25, 0.5, 0.9, 1.0}) {
        const QuadratureRule rule = lfrac::jacobi_rule(FracOrder(alpha), 24);
        double mass = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            CHECK(rule.nodes[i] > 0.0);
            CHECK(rule.nodes[i] < 1.0);
            if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
            CHECK(rule.weights[i] > 0.0);
            mass += rule.weights[i];
        }
        const double want = lfrac::beta_fn(2.0 - alpha, alpha);
        CHECK(mass == doctest::Approx(want).epsilon(1e-12));
    }
    // alpha = 1: weight 1 on [0,1], total mass 1
    const QuadratureRule leg = lfrac::jacobi_rule(FracOrder(1.0), 16);
    double mass = 0.0;
    for (double w : leg.weights) mass += w;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("jacobi_rule: first moment against the beta function") {
    const double alpha = 0.5;
    const QuadratureRule rule = lfrac::jacobi_rule(FracOrder(alpha), 20);
    double got = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) got += rule.weights[i] * rule.nodes[i];
    // integral of u * u^{1-alpha} (1-u)^{alpha-1} = B(3-alpha, alpha)
    CHECK(got == doctest::Approx(lfrac::beta_fn(3.0 - alpha, alpha)).epsilon(1e-13));
    CHECK_THROWS_AS((void)lfrac::jacobi_rule(FracOrder(alpha), 0), std::domain_error);
}

TEST_CASE("lj_apply: constants, powers, zero point") {
    for (double alpha : {0.3, 0.6, 1.0}) {
        const FracOrder order(alpha);
        const QuadratureRule rule = lfrac::jacobi_rule(order, 40);
        const Func1D one = [](double) { return cplx(1.0); };
        for (double t : {0.25, 1.0, 1.7})
            CHECK(std::abs(lfrac::lj_apply(one, order, t, rule) - cplx(t)) <= 1e-13 * t);

        const Func1D lin = [](double s) { return cplx(s); };
        const double want1 = std::exp(std::lgamma(3.0 - alpha) - std::lgamma(2.0 - alpha) -
                                      std::lgamma(3.0));
        CHECK(std::abs(lfrac::lj_apply(lin, order, 1.0, rule) - cplx(want1)) <= 1e-13);

        const Func1D smooth = [](double s) { return cplx(std::cos(s), std::sin(s)); };
        CHECK(lfrac::lj_apply(smooth, order, 0.0, rule) == cplx(0.0));
    }
}

TEST_CASE("ld_apply: identity, constants, quadratic anchor") {
    for (double alpha : {0.3, 0.6, 0.95}) {
        const FracOrder order(alpha);
        const QuadratureRule rule = lfrac::ld_rule(order, 40);
        const Func1D one = [](double) { return cplx(1.0); };  // x = t -> x' = 1
        for (double t : {0.0, 0.5, 1.3})
            CHECK(std::abs(lfrac::ld_apply(one, order, t, rule) - cplx(1.0)) <= 1e-13);

        const Func1D zero = [](double) { return cplx(0.0); };  // x = const -> x' = 0
        CHECK(std::abs(lfrac::ld_apply(zero, order, 0.8, rule)) <= 1e-15);
    }
    // x = t^2, alpha = 1/2, t = 1: expect 4/3
    const FracOrder half(0.5);
    const QuadratureRule rule = lfrac::ld_rule(half, 40);
    const Func1D xprime = [](double s) { return cplx(2.0 * s); };
    CHECK(std::abs(lfrac::ld_apply(xprime, half, 1.0, rule) - cplx(4.0 / 3.0)) <= 1e-13);

    // alpha = 1 short-circuits to x'(t)
    CHECK(lfrac::ld_apply(xprime, FracOrder(1.0), 0.7, QuadratureRule{}) == cplx(1.4));
    CHECK_THROWS_AS((void)lfrac::ld_rule(FracOrder(1.0), 10), std::domain_error);
}

TEST_CASE("ld_apply approaches x'(0) as t -> 0+") {
    const FracOrder order(0.4);
    const QuadratureRule rule = lfrac::ld_rule(order, 40);
    const Func1D xprime = [](double s) { return cplx(std::exp(s)); };  // x = e^t, x'(0) = 1
    double prev_gap = 1e9;
    for (int k = 2; k <= 6; ++k) {
        const double t = std::pow(10.0, -k);
        const double gap = std::abs(lfrac::ld_apply(xprime, order, t, rule) - cplx(1.0));
        CHECK(gap < prev_gap + 1e-15);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-5);
}

TEST_CASE("quadrature matches the closed form across the (delta, alpha, t) grid") {
    for (double alpha : {0.25, 0.5, 0.9}) {
        const FracOrder order(alpha);
        for (double delta : {0.0, 0.5, 1.0, 2.0, 3.7})
            for (double t : {0.1, 1.0, 2.0}) {
                // fold the integrand's power into the weight: exact quadrature
                const QuadratureRule rule = lfrac::jacobi_rule(order, 40, delta);
                const Func1D y = [delta](double s) { return cplx(std::pow(s, delta)); };
                const auto ref = lfrac::lj_iterated_power(order, 1, delta);
                const double want = ref.coefficient * std::pow(t, ref.power);
                CHECK(std::abs(lfrac::lj_apply(y, order, t, rule) - cplx(want)) <=
                      1e-12 * want);
            }
    }
}

TEST_CASE("fundamental theorem numerically: J(D x) = x - x0 for polynomials") {
    testsup::Rng rng(17);
    for (double alpha : {0.3, 0.7}) {
        const FracOrder order(alpha);
        const QuadratureRule jrule = lfrac::jacobi_rule(order, 40);
        const QuadratureRule drule = lfrac::ld_rule(order, 40);
        const lfrac::PowerSeries x = testsup::random_poly(rng, 6);
        // ordinary derivative for ld_apply
        std::vector<cplx> dc(6);
        for (int n = 1; n <= 6; ++n) dc[static_cast<size_t>(n - 1)] = double(n) * x[n];
        const lfrac::PowerSeries xp{dc};
        auto horner = [](const lfrac::PowerSeries& s, double t) {
            cplx acc(0.0);
            for (int i = s.truncation_order(); i >= 0; --i) acc = acc * t + s[i];
            return acc;
        };
        const Func1D dfun = [&](double s) {
            return lfrac::ld_apply([&](double u) { return horner(xp, u); }, order, s, drule);
        };
        for (double t : {0.3, 0.8, 1.0}) {
            const cplx got = lfrac::lj_apply(dfun, order, t, jrule);
            const cplx want = horner(x, t) - x[0];
            CHECK(std::abs(got - want) <= 1e-10 * (1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("lj_iterated_power anchors") {
    const double alpha = 0.65;
    const FracOrder order(alpha);

    const auto p10 = lfrac::lj_iterated_power(order, 1, 0.0);
    CHECK(p10.coefficient == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p10.power == doctest::Approx(1.0));

    const auto p20 = lfrac::lj_iterated_power(order, 2, 0.0);
    const double want = std::exp(std::lgamma(3.0 - alpha) - std::lgamma(2.0 - alpha)) / 2.0;
    CHECK(p20.coefficient == doctest::Approx(want).epsilon(1e-13));
    CHECK(p20.power == doctest::Approx(2.0));

    const auto p11 = lfrac::lj_iterated_power(FracOrder(1.0), 1, 1.0);
    CHECK(p11.coefficient == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p11.power == doctest::Approx(2.0));

    CHECK_THROWS_AS((void)lfrac::lj_iterated_power(order, 0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)lfrac::lj_iterated_power(order, 1, alpha - 2.0), std::domain_error);
}

TEST_CASE("lj_norm_bound: base case, classical factorials, vanishing ratio") {
    const double T = 1.7;
    for (double alpha : {0.3, 0.8})
        CHECK(lfrac::lj_norm_bound(FracOrder(alpha), 1, T) == doctest::Approx(T).epsilon(1e-14));

    double fact = 1.0;
    for (int m = 1; m <= 6; ++m) {
        fact *= m;
        CHECK(lfrac::lj_norm_bound(FracOrder(1.0), m, T) ==
              doctest::Approx(std::pow(T, m) / fact).epsilon(1e-12));
    }

    const FracOrder order(0.5);
    double prev_ratio = 1e300;
    for (int m = 1; m <= 40; ++m) {
        const double ratio = lfrac::lj_norm_bound(order, m + 1, T) /
                             lfrac::lj_norm_bound(order, m, T);
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
    }
    CHECK(prev_ratio < 0.35);  // tends to zero
}

TEST_CASE("mc_lj_oracle: closed-form targets within three standard errors") {
    const FracOrder order(0.6);
    McConfig cfg;
    cfg.samples = 200000;
    cfg.seed = 12345;

    cfg.depth = 1;
    const Func1D one = [](double) { return cplx(1.0); };
    auto est = lfrac::mc_lj_oracle(one, order, 0.8, cfg);
    CHECK(std::abs(est.estimate - cplx(0.8)) <= 3.0 * est.std_error);

    const Func1D lin = [](double s) { return cplx(s); };
    est = lfrac::mc_lj_oracle(lin, order, 1.0, cfg);
    const auto ref1 = lfrac::lj_iterated_power(order, 1, 1.0);
    CHECK(std::abs(est.estimate - cplx(ref1.coefficient)) <= 3.0 * est.std_error);

    cfg.depth = 2;
    est = lfrac::mc_lj_oracle(lin, order, 1.0, cfg);
    const auto ref2 = lfrac::lj_iterated_power(order, 2, 1.0);
    CHECK(std::abs(est.estimate - cplx(ref2.coefficient)) <= 3.0 * est.std_error);

    McConfig bad = cfg;
    bad.samples = 10;
    CHECK_THROWS_AS((void)lfrac::mc_lj_oracle(one, order, 1.0, bad), std::invalid_argument);
}

TEST_CASE("mc_lj_oracle: doubling samples shrinks the standard error by ~1/sqrt(2)") {
    const FracOrder order(0.45);
    const Func1D y = [](double s) { return cplx(s * s); };
    McConfig a;
    a.samples = 100000;
    a.seed = 777;
    a.depth = 2;
    McConfig b = a;
    b.samples = 200000;
    const double se_a = lfrac::mc_lj_oracle(y, order, 1.0, a).std_error;
    const double se_b = lfrac::mc_lj_oracle(y, order, 1.0, b).std_error;
    const double shrink = se_b / se_a;
    CHECK(shrink > (1.0 / std::sqrt(2.0)) * 0.8);
    CHECK(shrink < (1.0 / std::sqrt(2.0)) * 1.2);

    // determinism under a fixed seed
    const auto r1 = lfrac::mc_lj_oracle(y, order, 1.0, a);
    const auto r2 = lfrac::mc_lj_oracle(y, order, 1.0, a);
    CHECK(r1.estimate == r2.estimate);
    CHECK(r1.std_error == r2.std_error);
}

TEST_CASE("no semigroup law for the integral operator at alpha = 0.4") {
    const FracOrder order(0.4);
    const QuadratureRule rule = lfrac::jacobi_rule(order, 40);
    const Func1D one = [](double) { return cplx(1.0); };
    const Func1D inner = [&](double t) { return lfrac::lj_apply(one, order, t, rule); };
    const cplx twice = lfrac::lj_apply(inner, order, 1.0, rule);
    // hypothetical single application at doubled order
    const auto alt = lfrac::lj_iterated_power(FracOrder(0.8), 1, 0.0);
    CHECK(std::abs(twice - cplx(alt.coefficient)) > 1e-3);
}

TEST_CASE("caputo_to_l: scaling and cancellation anchors") {
    lfrac::ComplexMatrix A = lfrac::ComplexMatrix::identity(2);

    // alpha = 1: nothing changes
    auto id = lfrac::caputo_to_l(
        A, [](double t) { return std::vector<cplx>{cplx(t), cplx(1.0)}; }, FracOrder(1.0));
    CHECK(id.Acal(0, 0) == cplx(1.0));
    const auto v1 = id.theta(0.7);
    CHECK(std::abs(v1[0] - cplx(0.7)) < 1e-15);

    // alpha = 1/2: Acal = Gamma(3/2) I
    auto half = lfrac::caputo_to_l(
        A, [](double) { return std::vector<cplx>{cplx(0.0), cplx(0.0)}; }, FracOrder(0.5));
    CHECK(std::abs(half.Acal(0, 0) - cplx(0.8862269254527580137)) < 1e-14);
    CHECK(std::abs(half.Acal(0, 1)) == 0.0);

    // b(t) = t^{1-alpha} / Gamma(2-alpha) * v  ==>  theta = v
    const double alpha = 0.3;
    const double g = lfrac::gamma_fn(2.0 - alpha);
    auto canc = lfrac::caputo_to_l(
        A,
        [&](double t) {
            return std::vector<cplx>{cplx(2.0 * std::pow(t, 1.0 - alpha) / g),
                                     cplx(-1.0 * std::pow(t, 1.0 - alpha) / g)};
        },
        FracOrder(alpha));
    const auto th = canc.theta(0.42);
    CHECK(std::abs(th[0] - cplx(2.0)) < 1e-13);
    CHECK(std::abs(th[1] - cplx(-1.0)) < 1e-13);
}
