#pragma once

#include "qwalk/walk.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace qwalk {

// cos(omega - theta) = |a| cos(p + arg a) for W(p) = diag(e^{ip}, e^{-ip}) C
struct CoinDispersion {
    cplx a;
    double theta = 0.0;
};

struct MomentumWalk {
    int dim = 0;
    std::function<Eigen::MatrixXcd(double)> unitary_at;
    std::optional<CoinDispersion> dispersion;

    static MomentumWalk coin_step(const CoinParams& coin);
    static MomentumWalk free_shift();
};

struct SpectralGrid {
    int dim = 0;
    int M = 0;
    std::vector<double> p;                  // p_j = 2 pi (j + 1/2) / M
    Eigen::MatrixXd omega;                  // M x dim, continuous branches
    std::vector<Eigen::MatrixXcd> vectors;  // per p: eigenvector columns, band order
    std::vector<int> wrap;                  // band k at p_{M-1} continues as band wrap[k] at p_0
    MomentumWalk walk;

    bool has_derivatives = false;
    Eigen::MatrixXd velocity;               // M x dim
    Eigen::MatrixXd curvature;              // M x dim
    std::vector<double> proj_deriv_sup;     // per band, sup_p ||Pi_k'(p)||
    double sup_curvature = 0.0;
    double sup_velocity = 0.0;

    Eigen::MatrixXcd projector(int j, int k) const;
    double weight(int j, int k, const Spinor& phi) const; // ||Pi_k(p_j) phi||^2, d = 2
};

struct BoundConstants {
    double sup_curvature = 0.0;
    double sum_proj_deriv = 0.0;
    double abs_position_moment = 0.0;
};

SpectralGrid decompose(const MomentumWalk& walk, int M = 1 << 14);
SpectralGrid derivatives(SpectralGrid sg);
SpectralGrid decompose_with_derivatives(const MomentumWalk& walk, int M = 1 << 14);

BoundConstants bound_constants(const SpectralGrid& sg, const InitialState& init);

// Pushforward of the momentum weights under the group velocity.
class VelocityLaw {
public:
    VelocityLaw(const SpectralGrid& sg, const InitialState& init);

    double cdf(double x) const;
    cplx char_fn(double lambda) const;
    double min_velocity() const { return vmin_; }
    double max_velocity() const { return vmax_; }

private:
    struct Cell {
        double v0, v1, s0, s1; // Hermite data: values and scaled slopes
        double w0, w1;         // weight at the ends, linear in between
        double lo, hi;         // range of the cubic on the cell
    };
    double below(const Cell& c, double x) const;

    std::vector<Cell> cells_;
    std::vector<double> node_v_, node_w_; // trapezoid nodes for the char fn
    double scale_ = 0.0;
    double vmin_ = 0.0, vmax_ = 0.0;
};

VelocityLaw velocity_cdf(const SpectralGrid& sg, const InitialState& init);

cplx char_fn_limit(const SpectralGrid& sg, const InitialState& init, double lambda);
cplx char_fn_finite(const PositionDistribution& dist, double lambda);

struct TriangleCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

TriangleCheck check_triangle_bound(const SpectralGrid& sg, const InitialState& init,
                                   const PositionDistribution& dist, double lambda);
TriangleCheck check_triangle_bound(const BoundConstants& bc, cplx finite, cplx limit,
                                   int n, double lambda);

// Exact position distribution from W(p)^n by a discrete Fourier sum on 2n+w+1 or more points.
PositionDistribution evolve_momentum(const MomentumWalk& walk, const InitialState& init, int n);

void write_spectral_csv(std::ostream& os, const SpectralGrid& sg);

} // namespace qwalk
