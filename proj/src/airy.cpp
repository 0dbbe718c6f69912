#include "qwalk/errors.hpp"
#include "qwalk/wavefront.hpp"

#include <cmath>
#include <numbers>

namespace qwalk {

namespace {

constexpr double kAi0 = 0.355028053887817239260;  // Ai(0)
constexpr double kAip0 = 0.258819403792806798405; // -Ai'(0)
constexpr double kSeriesLo = -7.0;
constexpr double kSeriesHi = 5.5;

double series(double x) {
    const double x3 = x * x * x;
    double f = 1.0, g = x, tf = 1.0, tg = x;
    for (int k = 0; k < 200; ++k) {
        tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f += tf;
        g += tg;
        if (std::abs(tf) < 1e-18 * std::abs(f) && std::abs(tg) < 1e-18 * (std::abs(g) + 1e-300)) break;
    }
    return kAi0 * f - kAip0 * g;
}

// u_k = (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k) u_{k-1}
double u_next(double u, int k) {
    return u * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
}

double decaying(double x) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    double sum = 1.0, u = 1.0, term = 1.0, prev = 1.0;
    for (int k = 1; k < 60; ++k) {
        u = u_next(u, k);
        term = (k % 2 ? -u : u) / std::pow(zeta, k);
        if (std::abs(term) > std::abs(prev) || std::abs(term) < 1e-17) break;
        sum += term;
        prev = term;
    }
    return std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.25)) * sum;
}

double oscillating(double z) {
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    double even = 1.0, odd = 0.0, u = 1.0, prev = 1.0;
    for (int k = 1; k < 60; ++k) {
        u = u_next(u, k);
        const double mag = u / std::pow(zeta, k);
        if (mag > prev || mag < 1e-17) break;
        // (-1)^j u_{2j} zeta^{-2j} and (-1)^j u_{2j+1} zeta^{-2j-1}
        const int j = k / 2;
        const double s = j % 2 ? -1.0 : 1.0;
        if (k % 2) odd += s * mag;
        else even += s * mag;
        prev = mag;
    }
    const double ph = zeta - std::numbers::pi / 4;
    return (std::cos(ph) * even + std::sin(ph) * odd) / (std::sqrt(std::numbers::pi) * std::pow(z, 0.25));
}

} // namespace

double airy(double x) {
    if (!(x >= -100.0 && x <= 20.0)) throw OutOfSupportedRange("airy: argument outside [-100, 20]");
    if (x < kSeriesLo) return oscillating(-x);
    if (x > kSeriesHi) return decaying(x);
    return series(x);
}

} // namespace qwalk
