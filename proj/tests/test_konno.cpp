#include "qwalk/errors.hpp"
#include "qwalk/konno.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <sstream>

using namespace qwalk;
using namespace qwalk::testing;
using qwalk::oracle::integrate_density;

namespace {

// closed form of the CDF in t with x = |a| sin t
double closed_cdf(double abs_a, double lam, double x) {
    if (x <= -abs_a) return 0.0;
    if (x >= abs_a) return 1.0;
    const double abs_b = std::sqrt(1.0 - abs_a * abs_a);
    const double t = std::asin(x / abs_a);
    return 0.5 + std::atan(abs_b * std::tan(t)) / std::numbers::pi -
           lam / std::numbers::pi * std::atan(abs_a * std::cos(t) / abs_b);
}


} // namespace

TEST_CASE("lambda for the Hadamard basis states") {
    const auto h = CoinParams::hadamard();
    CHECK(std::abs(lambda_c(h, e1()) - 1.0) < 1e-14);
    CHECK(std::abs(lambda_c(h, e2()) + 1.0) < 1e-14);
    CHECK(std::abs(lambda_c(h, symmetric())) < 1e-14);
}

TEST_CASE("lambda of a mixture is the weighted lambda") {
    InitialState s;
    s.entries = {{0, e1(), 0.3}, {5, e2(), 0.7}};
    CHECK(std::abs(lambda_c(CoinParams::hadamard(), s) - (0.3 - 0.7)) < 1e-14);
}

TEST_CASE("density normalization and support") {
    {
        const KonnoCDF h(CoinParams::hadamard(), e1());
        for (double x : {-0.6, 0.0, 0.3})
            CHECK(h.density(x) == doctest::Approx((1.0 + x) / (std::numbers::pi * (1.0 - x * x) *
                                                               std::sqrt(1.0 - 2.0 * x * x))).epsilon(1e-13));
    }
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const auto coin = random_coin(rng, 0.2, 0.95);
        const KonnoCDF kc(coin, random_spinor(rng));
        CHECK(kc.support() == doctest::Approx(coin.abs_a()).epsilon(1e-15));
        CHECK(std::abs(integrate_density(kc, [](double) { return 1.0; }) - 1.0) < 1e-8);
        CHECK(kc.density(kc.support() + 1e-9) == 0.0);
        CHECK(kc.density(-kc.support() - 1e-9) == 0.0);
        CHECK(kc.density(0.0) > 0.0);
    }
}

TEST_CASE("cached and direct CDF against the closed form") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 4; ++trial) {
        const auto coin = random_coin(rng, 0.2, 0.95);
        const KonnoCDF kc(coin, random_spinor(rng));
        double worst_cache = 0.0, worst_direct = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double x = kc.support() * (-1.0 + 2.0 * i / 2000.0);
            const double ref = closed_cdf(coin.abs_a(), kc.lambda(), x);
            worst_cache = std::max(worst_cache, std::abs(kc.cdf(x) - ref));
            worst_direct = std::max(worst_direct, std::abs(kc.cdf_direct(x) - ref));
        }
        CHECK(worst_cache < 1e-10);
        CHECK(worst_direct < 1e-12);
        CHECK(kc.cdf(-2.0) == 0.0);
        CHECK(kc.cdf(2.0) == 1.0);
    }
}

TEST_CASE("symmetric Hadamard CDF is symmetric") {
    const KonnoCDF kc(CoinParams::hadamard(), symmetric());
    CHECK(std::abs(kc.cdf(0.0) - 0.5) < 1e-12);
    for (double x : {0.1, 0.3, 0.6, 0.7})
        CHECK(std::abs(kc.cdf(x) + kc.cdf(-x) - 1.0) < 1e-11);
}

TEST_CASE("moments of the finite walk approach the limit") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 3; ++trial) {
        const auto coin = random_coin(rng);
        const auto phi = random_spinor(rng);
        const KonnoCDF kc(coin, phi);
        const int n = 3000;
        const auto d = distribution(coin, InitialState::localized(phi), n);
        double m1 = 0.0, m2 = 0.0;
        for (long k = d.first_site(); k <= d.last_site(); ++k) {
            const double x = static_cast<double>(k) / n;
            m1 += x * d.at(k);
            m2 += x * x * d.at(k);
        }
        CHECK(std::abs(m1 - integrate_density(kc, [](double x) { return x; })) < 2e-3);
        CHECK(std::abs(m2 - integrate_density(kc, [](double x) { return x * x; })) < 2e-3);
    }
}

TEST_CASE("edge coefficient") {
    const KonnoCDF h(CoinParams::hadamard(), symmetric());
    const double expected = std::pow(2.0, 0.25) / std::numbers::pi;
    CHECK(std::abs(h.edge_coefficient(Side::Left) - expected) < 1e-14);
    CHECK(std::abs(h.edge_coefficient(Side::Right) - expected) < 1e-14);

    std::mt19937_64 rng(14);
    const auto coin = random_coin(rng);
    const KonnoCDF kc(coin, random_spinor(rng));
    const double s = kc.support();
    for (double delta : {1e-8, 1e-10}) {
        CHECK(kc.density(-s + delta) * std::sqrt(delta) ==
              doctest::Approx(kc.edge_coefficient(Side::Left)).epsilon(1e-3));
        CHECK(kc.density(s - delta) * std::sqrt(delta) ==
              doctest::Approx(kc.edge_coefficient(Side::Right)).epsilon(1e-3));
    }
}

TEST_CASE("edge CDF scaling") {
    const KonnoCDF kc(CoinParams::hadamard(), symmetric());
    for (int n : {1000, 100000}) {
        const double delta = std::pow(static_cast<double>(n), -2.0 / 3.0 - 0.1);
        const double v = kc.edge_cdf_scaling(n, 0.1);
        CHECK(std::abs(v - closed_cdf(kc.support(), 0.0, -kc.support() + delta)) < 1e-10);
        CHECK(v == doctest::Approx(2.0 * kc.edge_coefficient(Side::Left) * std::sqrt(delta)).epsilon(0.01));
    }
    CHECK_THROWS_AS(kc.edge_cdf_scaling(1, 0.1), InvalidArgument);
    CHECK_THROWS_AS(kc.edge_cdf_scaling(10, -0.1), InvalidArgument);
}

TEST_CASE("characteristic function against quadrature of the density") {
    std::mt19937_64 rng(15);
    const auto coin = random_coin(rng);
    const KonnoCDF kc(coin, random_spinor(rng));
    for (double lam : {0.0, 0.7, 5.0, 40.0}) {
        const double re = integrate_density(kc, [&](double x) { return std::cos(lam * x); });
        const double im = integrate_density(kc, [&](double x) { return std::sin(lam * x); });
        CHECK(std::abs(kc.char_fn(lam) - cplx(re, im)) < 1e-9);
    }
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(KonnoCDF(CoinParams::hadamard(), Spinor{1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(KonnoCDF(make_coin(1.0, 0.0, 0.0), e1()), InvalidArgument);
}

TEST_CASE("konno CSV") {
    const KonnoCDF kc(CoinParams::hadamard(), symmetric());
    std::ostringstream os;
    write_konno_csv(os, kc, {0.0});
    CHECK(os.str().rfind("x,sigma,F\n0,", 0) == 0);
}
