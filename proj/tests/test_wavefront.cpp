#include "qwalk/errors.hpp"
#include "qwalk/wavefront.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <boost/math/special_functions/airy.hpp>
#include <doctest.h>

using namespace qwalk;
using namespace qwalk::testing;

using qwalk::oracle::airy_series;

TEST_CASE("airy against a high-precision series") {
    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) {
        const double x = -20.0 + 25.0 * i / 500.0;
        worst = std::max(worst, std::abs(airy(x) - airy_series(x)));
    }
    CHECK(worst < 1e-10);
    for (double x : {-7.0, -6.999, -7.001, 5.5, 5.499, 5.501})
        CHECK(std::abs(airy(x) - airy_series(x)) < 1e-12);
    CHECK(std::abs(airy(0.0) - 0.35502805388781723926) < 1e-15);
}

TEST_CASE("airy far range against boost") {
    for (int i = 0; i <= 400; ++i) {
        const double x = -100.0 + 80.0 * i / 400.0;
        CHECK(std::abs(airy(x) - boost::math::airy_ai(x)) < 1e-9);
    }
    for (double x : {8.0, 12.0, 19.5}) CHECK(airy(x) == doctest::Approx(boost::math::airy_ai(x)).epsilon(1e-9));
    CHECK_THROWS_AS(airy(-100.5), OutOfSupportedRange);
    CHECK_THROWS_AS(airy(20.5), OutOfSupportedRange);
}

TEST_CASE("wavefront geometry") {
    const WavefrontApprox wa(CoinParams::hadamard(), symmetric());
    CHECK(wa.alpha() == doctest::Approx(std::pow(2.0, 5.0 / 6.0)).epsilon(1e-14));
    CHECK(std::abs(wa.lambda()) < 1e-14);
    CHECK(wa.front_site(100, Side::Left) == -70);
    CHECK(wa.front_site(100, Side::Right) == 70);
    CHECK(wa.offset(100, -70, Side::Left) == doctest::Approx(100.0 / std::sqrt(2.0) - 70.0));
    CHECK(wa.offset(100, 70, Side::Right) == doctest::Approx(70.0 - 100.0 / std::sqrt(2.0)));
    CHECK(wa.approx_pn(100, 1, Side::Left) == 0.0);
    CHECK(wa.approx_pn(100, 0, Side::Left) > 0.0);
    CHECK_THROWS_AS(wa.approx_pn(100, 20, Side::Left), WindowViolation);
    CHECK_THROWS_AS(WavefrontApprox(CoinParams::hadamard(), e1(), 0.0), InvalidArgument);
}

TEST_CASE("envelope shape") {
    const WavefrontApprox wa(CoinParams::hadamard(), e1());
    const int n = 1000;
    const double cr = std::cbrt(1000.0), a = wa.alpha();
    const double left = wa.envelope(n, 2.0, Side::Left);
    CHECK(left == doctest::Approx(2.0 * a * a / (cr * cr) * std::pow(airy(-a * 2.0 / cr), 2) *
                                  (1.0 - 1.0 / std::sqrt(2.0))));
    const double right = wa.envelope(n, -2.0, Side::Right);
    CHECK(right == doctest::Approx(2.0 * a * a / (cr * cr) * std::pow(airy(-a * 2.0 / cr), 2) *
                                   (1.0 + 1.0 / std::sqrt(2.0))));
    CHECK(wa.envelope(n, -30.0, Side::Left) < 1e-6 * wa.envelope(n, 0.0, Side::Left));
}

TEST_CASE("approximation tracks the walk near the front") {
    const auto coin = CoinParams::hadamard();
    for (const Spinor& phi : {e1(), symmetric()}) {
        const WavefrontApprox wa(coin, phi);
        const auto dists = distributions(coin, InitialState::localized(phi), {512, 4096});
        for (Side side : {Side::Left, Side::Right}) {
            const double e0 = approx_max_error(dists[0], wa, side);
            const double e1v = approx_max_error(dists[1], wa, side);
            const double peak = wa.envelope(4096, 0.0, side);
            CHECK(e1v < e0);
            CHECK(e1v < 0.25 * peak);
        }
    }
    const WavefrontApprox wa(coin, e1(), 1.0);
    const auto d = distribution(coin, InitialState::localized(e1()), 64);
    CHECK_THROWS_AS(approx_max_error(d, wa, Side::Left, 2.0), WindowViolation);
}

TEST_CASE("mass near the front") {
    const auto coin = CoinParams::hadamard();
    const auto d = distribution(coin, InitialState::localized(symmetric()), 2048);
    for (Side side : {Side::Left, Side::Right}) {
        const double lo = wavefront_mass_lower(d, coin, side), hi = wavefront_mass_upper(d, coin, side);
        CHECK(lo > 0.0);
        CHECK(lo < hi);
    }
    CHECK(std::abs(wavefront_mass_lower(d, coin, Side::Left) - wavefront_mass_lower(d, coin, Side::Right)) < 1e-10);
    double brute = 0.0;
    for (long k = d.first_site(); k <= -2048.0 / std::sqrt(2.0); ++k) brute += d.at(k);
    CHECK(std::abs(wavefront_mass_lower(d, coin) - std::cbrt(2048.0) * brute) < 1e-13);
}

TEST_CASE("oscillatory sums") {
    const auto p = linear_phase(0.7);
    CHECK(p(2.0) == doctest::Approx(1.4));
    CHECK(quadratic_phase(1.0, 0.5)(2.0) == doctest::Approx(4.0));
    const int n = 1000;
    long double s = 0.0L;
    for (long k = 10; k <= 500; ++k) {
        const long double v = 0.7L * k / n;
        s += std::sin(4.0L / 3.0L * n * v * std::sqrt(v));
    }
    CHECK(std::abs(oscillatory_sum(n, p, 0.5) - static_cast<double>(s)) < 1e-10);

    for (int m : {4096, 32768}) {
        const auto w = weighted_oscillatory_sum(m, quadratic_phase(0.5, 0.3), 0.4);
        CHECK(std::abs(w.value) <= w.bound);
        CHECK(w.constant > 0.0);
    }
    CHECK(std::abs(riemann_vs_integral_check(1 << 18, p)) < std::abs(riemann_vs_integral_check(1 << 9, p)) + 1e-12);
    CHECK_THROWS_AS(oscillatory_sum(0, p, 0.5), InvalidArgument);
    CHECK_THROWS_AS(oscillatory_sum(100, p, 0.0), InvalidArgument);
    CHECK_THROWS_AS(oscillatory_sum(100, linear_phase(-1.0), 0.5), InvalidArgument);
}
