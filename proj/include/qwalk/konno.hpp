#pragma once

#include "qwalk/walk.hpp"

#include <iosfwd>
#include <vector>

namespace qwalk {

enum class Side { Left, Right };

// Weight of the asymmetric part of the limiting velocity density.
double lambda_c(const CoinParams& coin, const Spinor& phi);

// Weighted weight for a localized mixture; the site shift drops out in the limit.
double lambda_c(const CoinParams& coin, const InitialState& init);

class KonnoCDF {
public:
    KonnoCDF(const CoinParams& coin, const Spinor& phi);
    KonnoCDF(const CoinParams& coin, const InitialState& init);

    const CoinParams& coin() const { return coin_; }
    double lambda() const { return lambda_; }
    double support() const { return abs_a_; }

    double density(double x) const;
    double cdf(double x) const;        // cached interpolant
    double cdf_direct(double x) const; // quadrature, no cache
    double edge_coefficient(Side side) const;
    double edge_cdf_scaling(int n, double eps_exponent) const;
    cplx char_fn(double lambda) const;

    std::size_t cache_size() const { return t_.size(); }

private:
    void init();
    double g(double t) const; // density in t with x = |a| sin t
    double segment(double t0, double t1) const;
    void build_cache();

    CoinParams coin_;
    double abs_a_ = 0.0, abs_b_ = 0.0, lambda_ = 0.0;
    std::vector<double> t_, f_, d_;
};

void write_konno_csv(std::ostream& os, const KonnoCDF& kc, const std::vector<double>& xs);

} // namespace qwalk
