#include "qwalk/wavefront.hpp"
#include "qwalk/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qwalk {

WavefrontApprox::WavefrontApprox(const CoinParams& coin, const Spinor& phi, double window_c)
    : coin_(coin), window_c_(window_c) {
    coin_.validate();
    if (!(window_c > 0.0)) throw InvalidArgument("wavefront window constant must be positive");
    abs_a_ = coin_.abs_a();
    const double bb = std::norm(coin_.b);
    alpha_ = std::cbrt(2.0 / (abs_a_ * bb));
    lambda_ = lambda_c(coin_, phi);
}

long WavefrontApprox::front_site(int n, Side side) const {
    const long f = static_cast<long>(std::floor(n * abs_a_));
    return side == Side::Left ? -f : f;
}

double WavefrontApprox::offset(int n, long site, Side side) const {
    const double edge = n * abs_a_;
    return side == Side::Left ? static_cast<double>(site) + edge : static_cast<double>(site) - edge;
}

double WavefrontApprox::envelope(int n, double d, Side side) const {
    if (n < 1) throw InvalidArgument("envelope: n must be >= 1");
    const double cr = std::cbrt(static_cast<double>(n));
    const double sgn = side == Side::Left ? -1.0 : 1.0;
    const double ai = airy(sgn * alpha_ * d / cr);
    return 2.0 * alpha_ * alpha_ / (cr * cr) * ai * ai * (1.0 + sgn * abs_a_ * lambda_);
}

double WavefrontApprox::approx_pn(int n, long d, Side side) const {
    if (n < 1) throw InvalidArgument("approx_pn: n must be >= 1");
    const long site = front_site(n, side) + d;
    const double dn = offset(n, site, side);
    if (std::abs(dn) > window_c_ * std::cbrt(static_cast<double>(n)))
        throw WindowViolation("approx_pn: |d| exceeds the validity window c n^{1/3}");
    if ((static_cast<long>(n) + site) % 2 != 0) return 0.0;
    return envelope(n, dn, side);
}

double approx_max_error(const PositionDistribution& dist, const WavefrontApprox& wa, Side side, double width) {
    const int n = dist.n;
    if (n < 1) throw InvalidArgument("approx_max_error needs n >= 1");
    if (width > wa.window()) throw WindowViolation("approx_max_error: width exceeds the validity window");
    const double reach = width * std::cbrt(static_cast<double>(n));
    const long front = wa.front_site(n, side);
    const long span = static_cast<long>(std::ceil(reach)) + 1;
    double err = 0.0;
    for (long d = -span; d <= span; ++d) {
        const long site = front + d;
        if (std::abs(wa.offset(n, site, side)) > reach) continue;
        if ((static_cast<long>(n) + site) % 2 != 0) continue;
        err = std::max(err, std::abs(dist.at(site) - wa.approx_pn(n, d, side)));
    }
    return err;
}

namespace {

// sum of p_k over k <= x
double mass_upto(const PositionDistribution& dist, double x) {
    double s = 0.0;
    for (std::size_t j = 0; j < dist.probs.size(); ++j) {
        if (static_cast<double>(dist.offset + static_cast<long>(j)) > x) break;
        s += dist.probs[j];
    }
    return s;
}

double mass_above(const PositionDistribution& dist, double x) {
    double s = 0.0;
    for (std::size_t j = dist.probs.size(); j-- > 0;) {
        if (static_cast<double>(dist.offset + static_cast<long>(j)) <= x) break;
        s += dist.probs[j];
    }
    return s;
}

} // namespace

double wavefront_mass_lower(const PositionDistribution& dist, const CoinParams& coin, Side side) {
    if (dist.n < 1) throw InvalidArgument("wavefront mass needs n >= 1");
    const double n = dist.n, edge = n * coin.abs_a();
    const double m = side == Side::Left ? mass_upto(dist, -edge) : mass_above(dist, edge);
    return std::cbrt(n) * m;
}

double wavefront_mass_upper(const PositionDistribution& dist, const CoinParams& coin, Side side) {
    if (dist.n < 1) throw InvalidArgument("wavefront mass needs n >= 1");
    const double n = dist.n, edge = n * coin.abs_a(), cr = std::cbrt(n);
    const double m = side == Side::Left ? mass_upto(dist, -edge + cr) : mass_above(dist, edge - cr);
    return cr * m;
}

PhaseFn linear_phase(double alpha) {
    return [alpha](double x) { return alpha * x; };
}

PhaseFn quadratic_phase(double alpha, double beta) {
    return [alpha, beta](double x) { return alpha * x + beta * x * x; };
}

namespace {

long first_index(int n) { return static_cast<long>(std::ceil(std::cbrt(static_cast<double>(n)) - 1e-12)); }

double phase_term(int n, const PhaseFn& p, long k) {
    const double v = p(static_cast<double>(k) / n);
    if (!(v > 0.0)) throw InvalidArgument("phase function must be positive on (0, r]");
    return std::sin(4.0 / 3.0 * n * v * std::sqrt(v));
}

} // namespace

double oscillatory_sum(int n, const PhaseFn& p, double r) {
    if (n < 1 || !(r > 0.0)) throw InvalidArgument("oscillatory_sum needs n >= 1 and r > 0");
    const long last = static_cast<long>(std::floor(r * n));
    long double s = 0.0L;
    for (long k = first_index(n); k <= last; ++k) s += phase_term(n, p, k);
    return static_cast<double>(s);
}

WeightedSum weighted_oscillatory_sum(int n, const PhaseFn& p, double r) {
    if (n < 1 || !(r > 0.0)) throw InvalidArgument("weighted_oscillatory_sum needs n >= 1 and r > 0");
    const long first = first_index(n);
    const long last = static_cast<long>(std::floor(r * n));
    long double plain = 0.0L, weighted = 0.0L;
    double peak = 0.0;
    for (long k = first; k <= last; ++k) {
        const double t = phase_term(n, p, k);
        plain += t;
        weighted += t / std::sqrt(p(static_cast<double>(k) / n));
        peak = std::max(peak, std::abs(static_cast<double>(plain)));
    }
    WeightedSum w;
    w.value = static_cast<double>(weighted);
    w.constant = peak / std::sqrt(static_cast<double>(n));
    auto f = [&](long k) { return 1.0 / std::sqrt(p(static_cast<double>(k) / n)); };
    w.bound = w.constant * std::sqrt(static_cast<double>(n)) * (2.0 * std::abs(f(last + 1)) + std::abs(f(first)));
    return w;
}

double riemann_vs_integral_check(int n, const PhaseFn& p) {
    if (n < 1) throw InvalidArgument("riemann_vs_integral_check needs n >= 1");
    const double cr = std::cbrt(static_cast<double>(n));
    const long last = static_cast<long>(std::floor(cr * cr + 1e-9));
    long double s = 0.0L;
    for (long k = first_index(n); k <= last; ++k)
        s += phase_term(n, p, k) / std::sqrt(p(static_cast<double>(k) / n));
    return static_cast<double>(s / n);
}

} // namespace qwalk
