#include "qwalk/errors.hpp"
#include "qwalk/konno.hpp"
#include "qwalk/metrics.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <vector>

using namespace qwalk;
using namespace qwalk::testing;
using qwalk::oracle::levy_scan;

namespace {

CdfHandle point_mass(double x) { return CdfHandle::step(StepCDF{{x}, {1.0}}); }

CdfHandle uniform01() {
    return CdfHandle::continuous([](double x) { return std::clamp(x, 0.0, 1.0); }, 0.0, 1.0);
}

StepCDF random_steps(std::mt19937_64& rng, int k) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.05, 1.0);
    std::vector<double> xs(k), ws(k);
    for (auto& x : xs) x = u(rng);
    std::sort(xs.begin(), xs.end());
    double tot = 0.0;
    for (auto& v : ws) tot += (v = w(rng));
    StepCDF s;
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
        acc += ws[i] / tot;
        s.jump_points.push_back(xs[i]);
        s.cumulative.push_back(i + 1 == k ? 1.0 : acc);
    }
    return s;
}

double gil_pelaez(const SmoothingFamily& fam, double x) {
    using Q = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double period = 4.0 * fam.order * std::numbers::pi / fam.eps;
    double s = 0.0;
    for (int k = 0; k < 400; ++k)
        s += Q::integrate([&](double t) { return t == 0.0 ? -x : -std::sin(t * x) * smoothing_char_fn(fam, t) / t; },
                          k * period, (k + 1) * period, 8, 1e-13);
    return 0.5 - s / std::numbers::pi;
}

} // namespace

TEST_CASE("kolmogorov between point masses and hand-computed steps") {
    CHECK(kolmogorov(point_mass(0.0), point_mass(0.0)) == 0.0);
    CHECK(kolmogorov(point_mass(0.0), point_mass(0.1)) == 1.0);
    const auto a = CdfHandle::step({{0.0, 1.0}, {0.5, 1.0}});
    const auto b = CdfHandle::step({{0.0, 1.0}, {0.2, 1.0}});
    CHECK(std::abs(kolmogorov(a, b) - 0.3) < 1e-15);
    CHECK(std::abs(kolmogorov(point_mass(0.5), uniform01()) - 0.5) < 1e-15);
    CHECK(std::abs(kolmogorov(uniform01(), point_mass(0.5)) - 0.5) < 1e-15);
}

TEST_CASE("kolmogorov of two continuous CDFs needs a grid") {
    CHECK_THROWS_AS(kolmogorov(uniform01(), uniform01()), ContinuousPairWithoutGrid);
    const auto shifted =
        CdfHandle::continuous([](double x) { return std::clamp(x - 0.25, 0.0, 1.0); }, 0.25, 1.25);
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(-0.5 + 2.0 * i / 100.0);
    CHECK(std::abs(kolmogorov(uniform01(), shifted, grid) - 0.25) < 1e-15);
}

TEST_CASE("kolmogorov of the two-step walk against the limit by brute force") {
    const auto coin = CoinParams::hadamard();
    const KonnoCDF kc(coin, e1());
    const auto F = CdfHandle::step(rescaled_cdf(distribution(coin, InitialState::localized(e1()), 2)));
    const auto G = CdfHandle::continuous([&](double x) { return kc.cdf(x); }, -kc.support(), kc.support());
    double brute = 0.0;
    for (int i = 0; i <= 1000000; ++i) {
        const double x = -1.2 + 2.4 * i / 1e6;
        brute = std::max(brute, std::abs(F(x) - G(x)));
    }
    const double k = kolmogorov(F, G);
    CHECK(k >= brute - 1e-12);
    CHECK(k - brute < 1e-5);
}

TEST_CASE("kolmogorov of random step pairs against a dense scan") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto F = CdfHandle::step(random_steps(rng, 7));
        const auto G = CdfHandle::step(random_steps(rng, 5));
        double brute = 0.0;
        auto pts = F.steps().jump_points;
        for (double j : G.steps().jump_points) pts.push_back(j);
        for (double j : pts)
            for (double d : {-1e-13, 0.0}) brute = std::max(brute, std::abs(F(j + d) - G(j + d)));
        CHECK(std::abs(kolmogorov(F, G) - brute) < 1e-15);
    }
}

TEST_CASE("kolmogorov_on restricts to an interval") {
    const auto F = CdfHandle::step({{0.0, 2.0}, {0.5, 1.0}});
    const auto G = CdfHandle::continuous([](double x) { return std::clamp(x / 3.0, 0.0, 1.0); }, 0.0, 3.0);
    CHECK(std::abs(kolmogorov_on(F, G, 0.5, 1.5) - (0.5 - 0.5 / 3.0)) < 1e-15);
    CHECK_THROWS_AS(kolmogorov_on(G, F, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("levy distance for simple pairs") {
    CHECK(levy(point_mass(0.0), point_mass(0.0)) == 0.0);
    CHECK(levy(point_mass(0.0), point_mass(0.3)) == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(levy(point_mass(0.0), point_mass(2.0)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(levy(point_mass(0.0), uniform01()) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(levy(uniform01(), point_mass(0.0)) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK_THROWS_AS(levy(point_mass(0.0), point_mass(1.0), 0.0), InvalidArgument);
}

TEST_CASE("levy against a brute-force feasibility scan") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const auto F = CdfHandle::step(random_steps(rng, 6));
        const auto G = CdfHandle::step(random_steps(rng, 4));
        const double L = levy(F, G);
        CHECK(std::abs(L - levy_scan(F, G, -3.0, 3.0)) < 2e-6);
        CHECK(L <= kolmogorov(F, G) + 1e-9);
    }
    const KonnoCDF kc(CoinParams::hadamard(), symmetric());
    const auto G = CdfHandle::continuous([&](double x) { return kc.cdf(x); }, -kc.support(), kc.support());
    for (int n : {3, 10, 40}) {
        const auto F = CdfHandle::step(
            rescaled_cdf(distribution(CoinParams::hadamard(), InitialState::localized(symmetric()), n)));
        const double L = levy(F, G);
        CHECK(std::abs(L - levy_scan(F, G, -2.0, 2.0)) < 2e-6);
        CHECK(L <= kolmogorov(F, G) + 1e-9);
    }
}

TEST_CASE("levy of two continuous CDFs") {
    const auto shifted =
        CdfHandle::continuous([](double x) { return std::clamp(x - 0.25, 0.0, 1.0); }, 0.25, 1.25);
    CHECK(std::abs(levy(uniform01(), shifted) - 0.125) < 1e-8);
    const KonnoCDF a(CoinParams::hadamard(), e1()), b(CoinParams::hadamard(), e2());
    const auto A = CdfHandle::continuous([&](double x) { return a.cdf(x); }, -a.support(), a.support());
    const auto B = CdfHandle::continuous([&](double x) { return b.cdf(x); }, -b.support(), b.support());
    CHECK(std::abs(levy(A, B) - levy_scan(A, B, -1.5, 1.5)) < 2e-6);
}

TEST_CASE("smoothing family CDF") {
    CHECK(smoothing_cdf({2.0, 1}, 0.5) == doctest::Approx(0.875).epsilon(1e-15));
    CHECK(smoothing_cdf({2.0, 1}, -1.0) == 0.0);
    CHECK(smoothing_cdf({2.0, 1}, 1.0) == 1.0);
    for (int order : {1, 2, 3, 5}) {
        const SmoothingFamily fam{0.8, order};
        CHECK(std::abs(smoothing_cdf(fam, 0.0) - 0.5) < 1e-14);
        CHECK(smoothing_cdf(fam, -0.4) == 0.0);
        CHECK(smoothing_cdf(fam, 0.4) == 1.0);
        double prev = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double v = smoothing_cdf(fam, -0.4 + 0.8 * i / 200.0);
            CHECK(v >= prev - 1e-15);
            prev = v;
        }
    }
    CHECK_THROWS_AS(smoothing_cdf({0.0, 3}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(smoothing_cdf({1.0, 13}, 0.0), InvalidArgument);
}

TEST_CASE("smoothing characteristic function inverts to the smoothing CDF") {
    for (int order : {2, 3}) {
        const SmoothingFamily fam{1.0, order};
        for (double x : {-0.3, -0.1, 0.05, 0.2, 0.45})
            CHECK(std::abs(gil_pelaez(fam, x) - smoothing_cdf(fam, x)) < 1e-8);
    }
    const SmoothingFamily h{1.0, 3};
    CHECK(smoothing_char_fn(h, 0.0) == 1.0);
    CHECK(std::abs(smoothing_char_fn(h, 12.0 * std::numbers::pi)) < 1e-15);
    CHECK(std::abs(smoothing_char_fn(h, 6.0 * std::numbers::pi) - std::pow(2.0 / std::numbers::pi, 6)) < 1e-15);
}

TEST_CASE("smoothing moves a step CDF by at most half the width") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const auto F = CdfHandle::step(random_steps(rng, 5));
        const SmoothingFamily fam{0.2, 3};
        const auto FH = convolve(F, fam);
        CHECK(levy(F, FH) <= 0.1 + 1e-8);
    }
    const auto H = convolve(point_mass(0.0), {0.5, 2});
    for (double x : {-0.3, -0.1, 0.0, 0.07, 0.3}) CHECK(std::abs(H(x) - smoothing_cdf({0.5, 2}, x)) < 1e-15);
}

TEST_CASE("zolotarev constant") {
    const double c = compute_zolotarev_constant(3);
    CHECK(std::abs(c - 67.8358201907444) / 67.8358201907444 < 1e-11);
    CHECK(ZolotarevWeights::standard().constant_c == 67.8358201907444);
}

TEST_CASE("zolotarev bound dominates the levy distance") {
    const auto coin = CoinParams::hadamard();
    const KonnoCDF kc(coin, symmetric());
    const auto G = CdfHandle::continuous([&](double x) { return kc.cdf(x); }, -kc.support(), kc.support());
    CharFn cg = [&](double l) { return kc.char_fn(l); };
    for (int n : {64, 256}) {
        const auto d = distribution(coin, InitialState::localized(symmetric()), n);
        CharFn cf = [&](double l) {
            cplx s = 0.0;
            for (long k = d.first_site(); k <= d.last_site(); ++k)
                if (d.at(k) > 0.0) s += d.at(k) * std::polar(1.0, l * k / n);
            return s;
        };
        const double eps = std::pow(static_cast<double>(n), -1.0 / 3.0);
        const double z = zolotarev_bound(cf, cg, eps);
        CHECK(levy(CdfHandle::step(rescaled_cdf(d)), G) <= z);
    }
    CharFn ch = [](double l) { return cplx(smoothing_char_fn({1.0, 2}, l), 0.0); };
    CHECK(zolotarev_bound(ch, ch, 0.3) == 0.3);
    CHECK_THROWS_AS(zolotarev_bound(ch, ch, 0.0), InvalidArgument);
    CHECK_THROWS_AS(zolotarev_bound(ch, ch, 1.5), InvalidArgument);
}

TEST_CASE("transfer from levy to kolmogorov on a smooth region") {
    const auto coin = CoinParams::hadamard();
    const KonnoCDF kc(coin, symmetric());
    const auto G = CdfHandle::continuous([&](double x) { return kc.cdf(x); }, -kc.support(), kc.support());
    const auto F = CdfHandle::step(rescaled_cdf(distribution(coin, InitialState::localized(symmetric()), 512)));
    const double L = levy(F, G);
    double gp = 0.0;
    for (int i = 0; i <= 10000; ++i) gp = std::max(gp, kc.density(-0.5 - L + (1.0 + 2.0 * L) * i / 10000.0));
    const double bound = smooth_region_transfer(F, G, -0.5, 0.5, gp, L);
    CHECK(kolmogorov_on(F, G, -0.5, 0.5) <= bound);
    CHECK_THROWS_AS(smooth_region_transfer(F, G, -0.7, 0.5, gp, 0.2), PreconditionViolation);
    CHECK_THROWS_AS(smooth_region_transfer(F, F, -0.5, 0.5, gp, L), InvalidArgument);
}
