#pragma once

#include "qwalk/walk.hpp"

#include <functional>
#include <memory>
#include <span>

namespace qwalk {

class CdfHandle {
public:
    enum class Kind { Step, Continuous };

    static CdfHandle step(StepCDF cdf);
    // fn must be a CDF that is 0 below lo and 1 above hi
    static CdfHandle continuous(std::function<double(double)> fn, double lo, double hi);

    Kind kind() const { return kind_; }
    bool is_step() const { return kind_ == Kind::Step; }
    const StepCDF& steps() const { return *step_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    double operator()(double x) const;
    double left(double x) const;

private:
    Kind kind_ = Kind::Continuous;
    std::shared_ptr<const StepCDF> step_;
    std::function<double(double)> fn_;
    double lo_ = 0.0, hi_ = 0.0;
};

double kolmogorov(const CdfHandle& F, const CdfHandle& G, std::span<const double> grid = {});

// sup of |F - G| restricted to [lo, hi]; F must be a step CDF, G continuous
double kolmogorov_on(const CdfHandle& F, const CdfHandle& G, double lo, double hi);

double levy(const CdfHandle& F, const CdfHandle& G, double tol = 1e-9);

struct SmoothingFamily {
    double eps = 1.0;
    int order = 3;
};

double smoothing_cdf(const SmoothingFamily& fam, double x);
double smoothing_char_fn(const SmoothingFamily& fam, double lambda);

CdfHandle convolve(const CdfHandle& F, const SmoothingFamily& H);

using CharFn = std::function<cplx(double)>;

struct ZolotarevWeights {
    double constant_c = 0.0;

    // the stored value; compute_zolotarev_constant reproduces it
    static ZolotarevWeights standard();
};

double compute_zolotarev_constant(int order = 3);

double zolotarev_bound(const CharFn& charF, const CharFn& charG, double eps,
                       const ZolotarevWeights& zw = ZolotarevWeights::standard());

double smooth_region_transfer(const CdfHandle& F, const CdfHandle& G, double lo, double hi,
                              double g_prime_sup, double levy_value);

} // namespace qwalk
