#include "qwalk/metrics.hpp"
#include "qwalk/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace qwalk {

CdfHandle CdfHandle::step(StepCDF cdf) {
    CdfHandle h;
    h.kind_ = Kind::Step;
    if (cdf.jump_points.empty()) throw InvalidArgument("step CDF without jumps");
    h.lo_ = cdf.jump_points.front();
    h.hi_ = cdf.jump_points.back();
    h.step_ = std::make_shared<const StepCDF>(std::move(cdf));
    return h;
}

CdfHandle CdfHandle::continuous(std::function<double(double)> fn, double lo, double hi) {
    CdfHandle h;
    h.kind_ = Kind::Continuous;
    h.fn_ = std::move(fn);
    h.lo_ = lo;
    h.hi_ = hi;
    return h;
}

double CdfHandle::operator()(double x) const {
    if (kind_ == Kind::Step) return cdf_at(*step_, x);
    if (x < lo_) return 0.0;
    if (x > hi_) return 1.0;
    return fn_(x);
}

double CdfHandle::left(double x) const {
    if (kind_ == Kind::Step) return cdf_at_left(*step_, x);
    return (*this)(x);
}

double kolmogorov(const CdfHandle& F, const CdfHandle& G, std::span<const double> grid) {
    if (!F.is_step() && !G.is_step()) {
        if (grid.empty()) throw ContinuousPairWithoutGrid("kolmogorov: two continuous CDFs need a grid");
        double m = 0.0;
        for (double x : grid) m = std::max(m, std::abs(F(x) - G(x)));
        return m;
    }
    if (!F.is_step()) return kolmogorov(G, F, grid);

    double m = 0.0;
    if (!G.is_step()) {
        const auto& s = F.steps();
        for (std::size_t i = 0; i < s.jump_points.size(); ++i) {
            const double x = s.jump_points[i];
            const double g = G(x);
            const double fl = i == 0 ? 0.0 : s.cumulative[i - 1];
            m = std::max({m, std::abs(s.cumulative[i] - g), std::abs(fl - g)});
        }
        return m;
    }
    std::vector<double> pts = F.steps().jump_points;
    pts.insert(pts.end(), G.steps().jump_points.begin(), G.steps().jump_points.end());
    for (double x : pts) {
        m = std::max({m, std::abs(F(x) - G(x)), std::abs(F.left(x) - G.left(x))});
    }
    return m;
}

double kolmogorov_on(const CdfHandle& F, const CdfHandle& G, double lo, double hi) {
    if (!F.is_step() || G.is_step()) throw InvalidArgument("kolmogorov_on: needs step F and continuous G");
    double m = std::max(std::abs(F(lo) - G(lo)), std::abs(F(hi) - G(hi)));
    const auto& s = F.steps();
    auto it = std::lower_bound(s.jump_points.begin(), s.jump_points.end(), lo);
    for (; it != s.jump_points.end() && *it <= hi; ++it) {
        const double g = G(*it);
        m = std::max(m, std::abs(F(*it) - g));
        if (*it > lo) m = std::max(m, std::abs(F.left(*it) - g));
    }
    return m;
}

namespace {

// sup_x [G(x) - F(x+e)] <= e and sup_x [F(x-e) - G(x)] <= e, exact for step F
bool levy_feasible_step(const CdfHandle& F, const CdfHandle& G, double e) {
    const auto& s = F.steps();
    for (std::size_t i = 0; i < s.jump_points.size(); ++i) {
        const double x = s.jump_points[i];
        const double fl = i == 0 ? 0.0 : s.cumulative[i - 1];
        if (G.left(x - e) - fl > e) return false;
        if (s.cumulative[i] - G(x + e) > e) return false;
    }
    return true;
}

// grid maximum of h, refined by golden-section search around the best samples
template <class H>
double refined_sup(const H& h, const std::vector<double>& grid) {
    const std::size_t n = grid.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = h(grid[i]);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    const std::size_t top = std::min<std::size_t>(8, n);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(top), idx.end(),
                      [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    double best = v[idx[0]];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (std::size_t t = 0; t < top; ++t) {
        const std::size_t i = idx[t];
        double a = grid[i == 0 ? 0 : i - 1], b = grid[std::min(i + 1, n - 1)];
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = h(c), fd = h(d);
        for (int it = 0; it < 60; ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = h(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = h(d);
            }
        }
        best = std::max({best, fc, fd});
    }
    return best;
}

bool levy_feasible_grid(const CdfHandle& F, const CdfHandle& G, double e,
                        const std::vector<double>& grid) {
    if (refined_sup([&](double x) { return G(x) - F(x + e); }, grid) > e) return false;
    return refined_sup([&](double x) { return F(x - e) - G(x); }, grid) <= e;
}

} // namespace

double levy(const CdfHandle& F, const CdfHandle& G, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("levy: tol must be positive");
    if (!F.is_step() && G.is_step()) return levy(G, F, tol);

    std::function<bool(double)> feasible;
    std::vector<double> grid;
    if (F.is_step()) {
        feasible = [&](double e) { return levy_feasible_step(F, G, e); };
    } else {
        const double lo = std::min(F.lo(), G.lo()) - 1.0;
        const double hi = std::max(F.hi(), G.hi()) + 1.0;
        constexpr std::size_t kGrid = 20001;
        grid.resize(kGrid);
        for (std::size_t i = 0; i < kGrid; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
        feasible = [&](double e) { return levy_feasible_grid(F, G, e, grid); };
    }

    if (feasible(0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

double smoothing_cdf(const SmoothingFamily& fam, double x) {
    if (!(fam.eps > 0.0) || fam.order < 1) throw InvalidArgument("smoothing family needs eps > 0, order >= 1");
    if (fam.order > 12) throw InvalidArgument("smoothing family order above 12 is not supported");
    // n triangles on [-eps/2n, eps/2n] are 2n uniforms of width eps/2n
    const int m = 2 * fam.order;
    const double w = fam.eps / (2.0 * fam.order);
    double s = (x + 0.5 * fam.eps) / w;
    if (s <= 0.0) return 0.0;
    if (s >= m) return 1.0;
    const bool flip = s > 0.5 * m;
    if (flip) s = m - s;
    double sum = 0.0, binom = 1.0;
    for (int k = 0; k <= static_cast<int>(std::floor(s)); ++k) {
        sum += (k % 2 ? -1.0 : 1.0) * binom * std::pow(s - k, m);
        binom = binom * (m - k) / (k + 1);
    }
    double fact = 1.0;
    for (int k = 2; k <= m; ++k) fact *= k;
    const double v = std::clamp(sum / fact, 0.0, 1.0);
    return flip ? 1.0 - v : v;
}

double smoothing_char_fn(const SmoothingFamily& fam, double lambda) {
    if (!(fam.eps > 0.0) || fam.order < 1) throw InvalidArgument("smoothing family needs eps > 0, order >= 1");
    const double u = fam.eps * lambda / (4.0 * fam.order);
    const double sinc = u == 0.0 ? 1.0 : std::sin(u) / u;
    return std::pow(sinc, 2 * fam.order);
}

CdfHandle convolve(const CdfHandle& F, const SmoothingFamily& H) {
    if (!F.is_step()) throw InvalidArgument("convolve: F must be a step CDF");
    const double half = 0.5 * H.eps;
    auto steps = std::make_shared<const StepCDF>(F.steps());
    auto fn = [steps, H, half](double x) {
        const auto& s = *steps;
        double v = cdf_at(s, x - half);
        auto it = std::upper_bound(s.jump_points.begin(), s.jump_points.end(), x - half);
        for (; it != s.jump_points.end() && *it < x + half; ++it) {
            const std::size_t i = static_cast<std::size_t>(it - s.jump_points.begin());
            const double mass = s.cumulative[i] - (i == 0 ? 0.0 : s.cumulative[i - 1]);
            v += mass * smoothing_cdf(H, x - *it);
        }
        return std::clamp(v, 0.0, 1.0);
    };
    return CdfHandle::continuous(fn, F.lo() - half, F.hi() + half);
}

ZolotarevWeights ZolotarevWeights::standard() { return {67.8358201907444}; }

double compute_zolotarev_constant(int order) {
    using boost::math::quadrature::gauss_kronrod;
    const SmoothingFamily fam{1.0, order};
    const int power = 2 * order;
    const double period = 4.0 * order * std::numbers::pi;
    auto near = [&](double l) { return std::abs(smoothing_char_fn(fam, l)); };
    auto far = [&](double l) { return l * std::abs(smoothing_char_fn(fam, l)); };

    double c = gauss_kronrod<double, 61>::integrate(near, 0.0, 1.0, 10, 1e-12);
    c += gauss_kronrod<double, 61>::integrate(far, 1.0, period, 10, 1e-12);
    constexpr int kPeriods = 4000;
    for (int k = 1; k < kPeriods; ++k)
        c += gauss_kronrod<double, 61>::integrate(far, k * period, (k + 1) * period, 10, 1e-12);
    // beyond: |sin|^power averages to binom(power, power/2)/2^power
    double avg = 1.0;
    for (int j = 1; j <= power / 2; ++j) avg *= (power / 2.0 + j) / j;
    avg /= std::pow(2.0, power);
    const double L = kPeriods * period;
    const double scale = std::pow(4.0 * order, power);
    c += scale * avg / ((power - 2) * std::pow(L, power - 2));
    if (!std::isfinite(c) || c <= 0.0) throw Error("Zolotarev constant is not finite");
    return c;
}

double zolotarev_bound(const CharFn& charF, const CharFn& charG, double eps,
                       const ZolotarevWeights& zw) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("zolotarev_bound: eps must lie in (0,1]");
    auto diff = [&](double l) { return std::abs(charF(l) - charG(l)); };

    double near = 0.0;
    constexpr int kLogPoints = 10000;
    for (int i = 0; i < kLogPoints; ++i) {
        const double l = std::pow(10.0, -6.0 + 6.0 * i / (kLogPoints - 1));
        near = std::max(near, diff(l) / l);
    }
    double far = 0.0;
    constexpr double kLambdaMax = 1e5;
    double l = 1.0;
    while (l < kLambdaMax) {
        l = l < 10.0 ? l + 0.01 : l * 1.001;
        // |charF - charG| <= 2 caps the rest of the tail
        if (2.0 / (l * l) <= std::max(far, near)) break;
        far = std::max(far, diff(l) / (l * l));
    }
    return eps + zw.constant_c * std::max(near, far) / (eps * eps);
}

double smooth_region_transfer(const CdfHandle& F, const CdfHandle& G, double lo, double hi,
                              double g_prime_sup, double levy_value) {
    (void)F;
    if (G.is_step()) throw InvalidArgument("smooth_region_transfer: G must be continuous");
    if (!(lo <= hi)) throw InvalidArgument("smooth_region_transfer: empty interval");
    const double margin = std::min(lo - G.lo(), G.hi() - hi);
    if (!(levy_value < margin))
        throw PreconditionViolation("smooth_region_transfer: Levy distance exceeds the interval margin");
    return (1.0 + g_prime_sup) * levy_value;
}

} // namespace qwalk
