#pragma once

#include "qwalk/konno.hpp"
#include "qwalk/walk.hpp"

#include <functional>

namespace qwalk {

// Ai on [-100, 20]; OutOfSupportedRange outside
double airy(double x);

class WavefrontApprox {
public:
    WavefrontApprox(const CoinParams& coin, const Spinor& phi, double window_c = 3.0);

    double alpha() const { return alpha_; }
    double lambda() const { return lambda_; }
    double window() const { return window_c_; }

    // -floor(n|a|) on the left, floor(n|a|) on the right
    long front_site(int n, Side side) const;
    // signed distance d_n = y -+ n|a| of a site from the real wavefront
    double offset(int n, long site, Side side) const;

    // 2 alpha^2 n^{-2/3} Ai(+-alpha n^{-1/3} d)^2 (1 +- |a| lambda), parity factor taken as 2
    double envelope(int n, double d, Side side) const;
    // site = front_site(n, side) + d; includes the (1 + (-1)^{n+y}) factor
    double approx_pn(int n, long d, Side side) const;

private:
    CoinParams coin_;
    double abs_a_ = 0.0, alpha_ = 0.0, lambda_ = 0.0, window_c_ = 3.0;
};

// max over parity-allowed sites with |d_n| <= width n^{1/3} of |p_n - approx|
double approx_max_error(const PositionDistribution& dist, const WavefrontApprox& wa, Side side,
                        double width = 1.0);

// n^{1/3} F_n(-n|a|), or n^{1/3} (1 - F_n(n|a|)) on the right
double wavefront_mass_lower(const PositionDistribution& dist, const CoinParams& coin, Side side = Side::Left);
// n^{1/3} F_n(-n|a| + n^{1/3}), or n^{1/3} (1 - F_n(n|a| - n^{1/3})) on the right
double wavefront_mass_upper(const PositionDistribution& dist, const CoinParams& coin, Side side = Side::Left);

using PhaseFn = std::function<double(double)>;

PhaseFn linear_phase(double alpha);
PhaseFn quadratic_phase(double alpha, double beta);

// sum_{k = ceil(n^{1/3})}^{floor(rn)} sin(4/3 n p(k/n)^{3/2})
double oscillatory_sum(int n, const PhaseFn& p, double r);

struct WeightedSum {
    double value = 0.0;
    double bound = 0.0;
    double constant = 0.0; // max partial |sum| / sqrt(n)
};

// weights f(k/n) = p(k/n)^{-1/2}, bound C n^{1/2} (2|f((floor(rn)+1)/n)| + |f(s_n/n)|)
WeightedSum weighted_oscillatory_sum(int n, const PhaseFn& p, double r);

// n^{-1} sum_{k = n^{1/3}}^{n^{2/3}} p(k/n)^{-1/2} sin(4/3 n p(k/n)^{3/2})
double riemann_vs_integral_check(int n, const PhaseFn& p);

} // namespace qwalk
