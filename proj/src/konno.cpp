#include "qwalk/konno.hpp"
#include "qwalk/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace qwalk {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;
} // namespace

double lambda_c(const CoinParams& coin, const Spinor& phi) {
    const double aa = std::norm(coin.a);
    if (aa == 0.0) throw InvalidArgument("lambda_c: a must be nonzero");
    const cplx cross = std::conj(coin.a) * coin.b * std::conj(phi[0]) * phi[1] +
                       coin.a * std::conj(coin.b) * phi[0] * std::conj(phi[1]);
    if (std::abs(cross.imag()) > 1e-14) throw InvalidArgument("lambda_c: non-real cross term");
    return std::norm(phi[0]) - std::norm(phi[1]) + cross.real() / aa;
}

double lambda_c(const CoinParams& coin, const InitialState& init) {
    init.validate();
    double l = 0.0;
    for (const auto& e : init.entries) l += e.weight * lambda_c(coin, e.spinor);
    return l;
}

KonnoCDF::KonnoCDF(const CoinParams& coin, const Spinor& phi) : coin_(coin) {
    coin_.validate();
    const double nrm = std::norm(phi[0]) + std::norm(phi[1]);
    if (std::abs(nrm - 1.0) > 1e-12) throw InvalidArgument("KonnoCDF: spinor is not normalized");
    lambda_ = lambda_c(coin_, phi);
    init();
}

KonnoCDF::KonnoCDF(const CoinParams& coin, const InitialState& st) : coin_(coin) {
    coin_.validate();
    lambda_ = lambda_c(coin_, st);
    init();
}

void KonnoCDF::init() {
    abs_a_ = coin_.abs_a();
    abs_b_ = coin_.abs_b();
    if (std::abs(lambda_) > 1.0 / abs_a_ + 1e-12)
        throw InvalidArgument("KonnoCDF: |lambda| exceeds 1/|a|, density would be negative");
    build_cache();
}

double KonnoCDF::g(double t) const {
    const double s = std::sin(t);
    return abs_b_ * (1.0 + lambda_ * abs_a_ * s) / (kPi * (1.0 - abs_a_ * abs_a_ * s * s));
}

double KonnoCDF::segment(double t0, double t1) const {
    using boost::math::quadrature::gauss_kronrod;
    if (t1 <= t0) return 0.0;
    return gauss_kronrod<double, 31>::integrate([this](double t) { return g(t); }, t0, t1, 10, 1e-12);
}

void KonnoCDF::build_cache() {
    constexpr int kInitial = 64;
    constexpr double kTol = 1e-12;
    constexpr int kMaxDepth = 30;

    t_.clear();
    f_.clear();
    d_.clear();

    auto hermite = [](double h, double f0, double f1, double d0, double d1, double s) {
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * f1 +
               (s3 - s2) * h * d1;
    };

    // depth-first refinement keeps t_ sorted
    struct Seg {
        double t0, t1, f0, f1;
        int depth;
    };
    double acc = 0.0;
    t_.push_back(-kHalfPi);
    f_.push_back(0.0);
    d_.push_back(g(-kHalfPi));
    for (int i = 0; i < kInitial; ++i) {
        const double a = -kHalfPi + kPi * i / kInitial;
        const double b = -kHalfPi + kPi * (i + 1) / kInitial;
        std::vector<Seg> stack{{a, b, acc, acc + segment(a, b), 0}};
        while (!stack.empty()) {
            Seg s = stack.back();
            stack.pop_back();
            const double tm = 0.5 * (s.t0 + s.t1);
            const double fm = s.f0 + segment(s.t0, tm);
            const double h = s.t1 - s.t0;
            const double guess = hermite(h, s.f0, s.f1, g(s.t0), g(s.t1), 0.5);
            if (std::abs(guess - fm) > kTol && s.depth < kMaxDepth) {
                stack.push_back({tm, s.t1, fm, s.f1, s.depth + 1});
                stack.push_back({s.t0, tm, s.f0, fm, s.depth + 1});
                continue;
            }
            t_.push_back(s.t1);
            f_.push_back(s.f1);
            d_.push_back(g(s.t1));
        }
        acc = f_.back();
    }
    for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
        const double sec = (f_[i + 1] - f_[i]) / (t_[i + 1] - t_[i]);
        if (sec <= 0.0) continue;
        const double al = d_[i] / sec, be = d_[i + 1] / sec;
        const double r = al * al + be * be;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            d_[i] = tau * al * sec;
            d_[i + 1] = tau * be * sec;
        }
    }
}

double KonnoCDF::density(double x) const {
    if (!(std::abs(x) < abs_a_)) return 0.0;
    return abs_b_ * (1.0 + lambda_ * x) /
           (kPi * (1.0 - x * x) * std::sqrt(abs_a_ * abs_a_ - x * x));
}

double KonnoCDF::cdf(double x) const {
    if (x <= -abs_a_) return 0.0;
    if (x >= abs_a_) return 1.0;
    const double t = std::asin(x / abs_a_);
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - t_.begin());
    i = std::clamp<std::size_t>(i, 1, t_.size() - 1) - 1;
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double v = (2 * s3 - 3 * s2 + 1) * f_[i] + (s3 - 2 * s2 + s) * h * d_[i] +
                     (-2 * s3 + 3 * s2) * f_[i + 1] + (s3 - s2) * h * d_[i + 1];
    return std::clamp(v, 0.0, 1.0);
}

double KonnoCDF::cdf_direct(double x) const {
    if (x <= -abs_a_) return 0.0;
    if (x >= abs_a_) return 1.0;
    const double t = std::asin(x / abs_a_);
    // integrate over the shorter side to keep the error absolute
    if (t <= 0.0) return segment(-kHalfPi, t);
    return 1.0 - segment(t, kHalfPi);
}

double KonnoCDF::edge_coefficient(Side side) const {
    const double sgn = side == Side::Left ? -1.0 : 1.0;
    return abs_b_ * (1.0 + sgn * lambda_ * abs_a_) /
           (kPi * (1.0 - abs_a_ * abs_a_) * std::sqrt(2.0 * abs_a_));
}

double KonnoCDF::edge_cdf_scaling(int n, double eps_exponent) const {
    if (n < 2) throw InvalidArgument("edge_cdf_scaling needs n >= 2");
    if (eps_exponent < 0.0) throw InvalidArgument("edge_cdf_scaling needs eps_exponent >= 0");
    return cdf(-abs_a_ + std::pow(static_cast<double>(n), -2.0 / 3.0 - eps_exponent));
}

cplx KonnoCDF::char_fn(double lambda) const {
    using Q = boost::math::quadrature::gauss<double, 20>;
    const auto& xs = Q::abscissa();
    const auto& ws = Q::weights();
    const int panels = std::max(64, static_cast<int>(std::ceil(std::abs(lambda) * abs_a_)) + 64);
    const double h = kPi / panels;
    cplx sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = -kHalfPi + (p + 0.5) * h;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            for (int sgn : {-1, 1}) {
                if (xs[k] == 0.0 && sgn < 0) continue;
                const double t = mid + sgn * 0.5 * h * xs[k];
                sum += ws[k] * std::polar(g(t), lambda * abs_a_ * std::sin(t));
            }
        }
    }
    return 0.5 * h * sum;
}

void write_konno_csv(std::ostream& os, const KonnoCDF& kc, const std::vector<double>& xs) {
    char buf[96];
    os << "x,sigma,F\n";
    for (double x : xs) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, kc.density(x), kc.cdf(x));
        os << buf;
    }
}

} // namespace qwalk
