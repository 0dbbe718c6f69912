#include "qwalk/spectral.hpp"
#include "qwalk/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace qwalk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pi(double x) { return std::remainder(x, kTwoPi); }

// vertex of the parabola through the maximum and its neighbours
double refine_peak(double ym, double y0, double yp) {
    const double den = ym - 2.0 * y0 + yp;
    if (den >= 0.0) return y0;
    return y0 - (yp - ym) * (yp - ym) / (8.0 * den);
}

template <class F>
double periodic_sup(int count, F&& value) {
    int best = 0;
    double bv = -1.0;
    for (int j = 0; j < count; ++j) {
        const double v = value(j);
        if (v > bv) {
            bv = v;
            best = j;
        }
    }
    return refine_peak(value((best - 1 + count) % count), bv, value((best + 1) % count));
}

} // namespace

MomentumWalk MomentumWalk::coin_step(const CoinParams& coin) {
    MomentumWalk w;
    w.dim = 2;
    const auto m = coin.matrix();
    w.unitary_at = [m](double p) {
        Eigen::MatrixXcd u(2, 2);
        const cplx ep = std::polar(1.0, p), em = std::polar(1.0, -p);
        u << ep * m[0], ep * m[1], em * m[2], em * m[3];
        return u;
    };
    w.dispersion = CoinDispersion{coin.a, coin.theta};
    return w;
}

MomentumWalk MomentumWalk::free_shift() { return coin_step(CoinParams{1.0, 0.0, 0.0}); }

Eigen::MatrixXcd SpectralGrid::projector(int j, int k) const {
    const auto v = vectors[static_cast<std::size_t>(j)].col(k);
    return v * v.adjoint();
}

double SpectralGrid::weight(int j, int k, const Spinor& phi) const {
    const auto& V = vectors[static_cast<std::size_t>(j)];
    const cplx ov = std::conj(V(0, k)) * phi[0] + std::conj(V(1, k)) * phi[1];
    return std::norm(ov);
}

namespace {

struct Eig {
    Eigen::VectorXd phase;
    Eigen::MatrixXcd vec;
};

Eig eigen_at(const MomentumWalk& walk, double p) {
    const Eigen::MatrixXcd u = walk.unitary_at(p);
    const auto d = walk.dim;
    if (u.rows() != d || u.cols() != d) throw InvalidArgument("momentum walk: wrong matrix size");
    if ((u * u.adjoint() - Eigen::MatrixXcd::Identity(d, d)).norm() > 1e-12)
        throw InvalidArgument("momentum walk: matrix is not unitary");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u);
    Eig e;
    e.phase.resize(d);
    e.vec = es.eigenvectors();
    for (int m = 0; m < d; ++m) {
        e.phase(m) = std::arg(es.eigenvalues()(m));
        e.vec.col(m).normalize();
    }
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b)
            if (std::abs(wrap_pi(e.phase(a) - e.phase(b))) < 1e-6)
                throw DegenerateSpectrum("eigenphases closer than 1e-6 at p = " + std::to_string(p));
    return e;
}

// band k of `from` continues as match[k] of `to`
std::vector<int> match_bands(const Eigen::MatrixXcd& from, const Eigen::MatrixXcd& to) {
    const int d = static_cast<int>(from.cols());
    const Eigen::MatrixXd ov = (from.adjoint() * to).cwiseAbs2();
    std::vector<int> match(static_cast<std::size_t>(d));
    std::vector<bool> used(static_cast<std::size_t>(d), false);
    for (int k = 0; k < d; ++k) {
        int best = 0;
        ov.row(k).maxCoeff(&best);
        if (ov(k, best) <= 0.5 || used[static_cast<std::size_t>(best)])
            throw BranchTrackingFailure("eigenvector overlap does not identify a unique band");
        used[static_cast<std::size_t>(best)] = true;
        match[static_cast<std::size_t>(k)] = best;
    }
    return match;
}

} // namespace

SpectralGrid decompose(const MomentumWalk& walk, int M) {
    if (M < 64 || M % 2 != 0) throw InvalidArgument("decompose: M must be even and >= 64");
    if (walk.dim < 1 || !walk.unitary_at) throw InvalidArgument("decompose: empty momentum walk");
    const int d = walk.dim;

    SpectralGrid sg;
    sg.dim = d;
    sg.M = M;
    sg.walk = walk;
    sg.p.resize(static_cast<std::size_t>(M));
    sg.omega.resize(M, d);
    sg.vectors.resize(static_cast<std::size_t>(M));

    for (int j = 0; j < M; ++j) {
        const double p = kTwoPi * (j + 0.5) / M;
        sg.p[static_cast<std::size_t>(j)] = p;
        Eig e = eigen_at(walk, p);
        Eigen::MatrixXcd vec(d, d);
        if (j == 0) {
            std::vector<int> order(static_cast<std::size_t>(d));
            for (int k = 0; k < d; ++k) order[static_cast<std::size_t>(k)] = k;
            std::sort(order.begin(), order.end(), [&](int x, int y) { return e.phase(x) < e.phase(y); });
            for (int k = 0; k < d; ++k) {
                sg.omega(0, k) = e.phase(order[static_cast<std::size_t>(k)]);
                vec.col(k) = e.vec.col(order[static_cast<std::size_t>(k)]);
            }
        } else {
            const auto match = match_bands(sg.vectors[static_cast<std::size_t>(j - 1)], e.vec);
            for (int k = 0; k < d; ++k) {
                const int m = match[static_cast<std::size_t>(k)];
                const double step = wrap_pi(e.phase(m) - sg.omega(j - 1, k));
                if (std::abs(step) >= kPi / 4)
                    throw BranchTrackingFailure("eigenphase jump above pi/4 between adjacent momenta");
                sg.omega(j, k) = sg.omega(j - 1, k) + step;
                vec.col(k) = e.vec.col(m);
            }
        }
        sg.vectors[static_cast<std::size_t>(j)] = vec;
    }
    sg.wrap = match_bands(sg.vectors.back(), sg.vectors.front());

    if (walk.dispersion && d == 2) {
        const double aa = std::abs(walk.dispersion->a), arga = std::arg(walk.dispersion->a);
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < d; ++k) {
                const double lhs = std::cos(sg.omega(j, k) - walk.dispersion->theta);
                const double rhs = aa * std::cos(sg.p[static_cast<std::size_t>(j)] + arga);
                if (std::abs(lhs - rhs) > 1e-9)
                    throw SpectralMismatch("eigenphase violates the coin dispersion relation");
            }
    }
    return sg;
}

namespace {

struct Neighbours {
    const SpectralGrid& sg;
    std::vector<int> inv;

    explicit Neighbours(const SpectralGrid& g) : sg(g), inv(g.wrap.size()) {
        for (std::size_t k = 0; k < g.wrap.size(); ++k) inv[static_cast<std::size_t>(g.wrap[k])] = static_cast<int>(k);
    }

    std::pair<int, int> at(int j, int k, int m) const {
        int idx = j + m;
        if (idx >= sg.M) return {idx - sg.M, sg.wrap[static_cast<std::size_t>(k)]};
        if (idx < 0) return {idx + sg.M, inv[static_cast<std::size_t>(k)]};
        return {idx, k};
    }

    double dphase(int j, int k, int m) const {
        auto [i, b] = at(j, k, m);
        return wrap_pi(sg.omega(i, b) - sg.omega(j, k));
    }
};

double curvature_at(const Neighbours& nb, int j, int k, int s, double h) {
    const double d1 = nb.dphase(j, k, s), d2 = nb.dphase(j, k, 2 * s);
    const double m1 = nb.dphase(j, k, -s), m2 = nb.dphase(j, k, -2 * s);
    const double hs = h * s;
    return (-d2 + 16.0 * d1 + 16.0 * m1 - m2) / (12.0 * hs * hs);
}

} // namespace

SpectralGrid derivatives(SpectralGrid sg) {
    const int M = sg.M, d = sg.dim;
    if (M < 64 || sg.omega.rows() != M) throw InvalidArgument("derivatives: grid not decomposed");
    const double h = kTwoPi / M;
    const Neighbours nb(sg);

    sg.velocity.resize(M, d);
    sg.curvature.resize(M, d);
    for (int j = 0; j < M; ++j)
        for (int k = 0; k < d; ++k) {
            const double d1 = nb.dphase(j, k, 1), d2 = nb.dphase(j, k, 2);
            const double m1 = nb.dphase(j, k, -1), m2 = nb.dphase(j, k, -2);
            sg.velocity(j, k) = (-d2 + 8.0 * d1 - 8.0 * m1 + m2) / (12.0 * h);
            sg.curvature(j, k) = curvature_at(nb, j, k, 1, h);
        }

    sg.sup_curvature = 0.0;
    sg.sup_velocity = 0.0;
    double coarse = 0.0;
    for (int k = 0; k < d; ++k) {
        sg.sup_curvature = std::max(sg.sup_curvature, periodic_sup(M, [&](int j) { return std::abs(sg.curvature(j, k)); }));
        sg.sup_velocity = std::max(sg.sup_velocity, periodic_sup(M, [&](int j) { return std::abs(sg.velocity(j, k)); }));
        coarse = std::max(coarse, periodic_sup(M / 2, [&](int j) { return std::abs(curvature_at(nb, 2 * j, k, 2, h)); }));
    }
    if (std::abs(coarse - sg.sup_curvature) >= 1e-6)
        throw GridTooCoarse("sup of the curvature moves by more than 1e-6 when the grid is halved");

    if (sg.walk.dispersion && d == 2) {
        const double aa = std::abs(sg.walk.dispersion->a), arga = std::arg(sg.walk.dispersion->a);
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < d; ++k) {
                const double s = std::sin(sg.omega(j, k) - sg.walk.dispersion->theta);
                const double exact = aa * std::sin(sg.p[static_cast<std::size_t>(j)] + arga) / s;
                if (std::abs(exact - sg.velocity(j, k)) > 1e-8)
                    throw SpectralMismatch("group velocity disagrees with the differentiated dispersion relation");
            }
    }

    sg.proj_deriv_sup.assign(static_cast<std::size_t>(d), 0.0);
    std::vector<double> norms(static_cast<std::size_t>(M));
    for (int k = 0; k < d; ++k) {
        for (int j = 0; j < M; ++j) {
            auto proj = [&](int m) {
                auto [i, b] = nb.at(j, k, m);
                return sg.projector(i, b);
            };
            const Eigen::MatrixXcd dp = (-proj(2) + 8.0 * proj(1) - 8.0 * proj(-1) + proj(-2)) / (12.0 * h);
            const Eigen::MatrixXcd herm = 0.5 * (dp + dp.adjoint());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
            norms[static_cast<std::size_t>(j)] = es.eigenvalues().cwiseAbs().maxCoeff();
        }
        sg.proj_deriv_sup[static_cast<std::size_t>(k)] = periodic_sup(M, [&](int j) { return norms[static_cast<std::size_t>(j)]; });
    }
    sg.has_derivatives = true;
    return sg;
}

SpectralGrid decompose_with_derivatives(const MomentumWalk& walk, int M) {
    return derivatives(decompose(walk, M));
}

BoundConstants bound_constants(const SpectralGrid& sg, const InitialState& init) {
    if (!sg.has_derivatives) throw InvalidArgument("bound_constants: derivatives not filled");
    BoundConstants bc;
    bc.sup_curvature = sg.sup_curvature;
    for (double v : sg.proj_deriv_sup) bc.sum_proj_deriv += v;
    bc.abs_position_moment = init.abs_position_moment();
    return bc;
}

namespace {

double cubic(double v0, double v1, double s0, double s1, double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * s0 + (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * s1;
}

// interior critical points of the Hermite cubic on (0,1)
int critical_points(double v0, double v1, double s0, double s1, double out[2]) {
    const double A = 3.0 * (2 * v0 - 2 * v1 + s0 + s1);
    const double B = 2.0 * (-3 * v0 + 3 * v1 - 2 * s0 - s1);
    const double C = s0;
    int n = 0;
    if (std::abs(A) < 1e-300) {
        if (B != 0.0) {
            const double t = -C / B;
            if (t > 0.0 && t < 1.0) out[n++] = t;
        }
        return n;
    }
    const double disc = B * B - 4 * A * C;
    if (disc < 0.0) return 0;
    const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
    double r[2] = {q / A, q != 0.0 ? C / q : 0.0};
    if (r[0] > r[1]) std::swap(r[0], r[1]);
    for (double t : r)
        if (t > 0.0 && t < 1.0 && (n == 0 || t != out[n - 1])) out[n++] = t;
    return n;
}

} // namespace

VelocityLaw::VelocityLaw(const SpectralGrid& sg, const InitialState& init) {
    if (!sg.has_derivatives) throw InvalidArgument("velocity law: derivatives not filled");
    if (sg.dim != 2) throw InvalidArgument("velocity law: spinor states need a two-dimensional coin");
    init.validate();
    const int M = sg.M;
    const double h = kTwoPi / M;
    scale_ = 1.0 / M;
    const Neighbours nb(sg);

    auto w_at = [&](int j, int k) {
        double w = 0.0;
        for (const auto& e : init.entries) w += e.weight * sg.weight(j, k, e.spinor);
        return w;
    };

    vmin_ = 1e300;
    vmax_ = -1e300;
    cells_.reserve(static_cast<std::size_t>(M * sg.dim));
    for (int k = 0; k < sg.dim; ++k)
        for (int j = 0; j < M; ++j) {
            auto [i, b] = nb.at(j, k, 1);
            Cell c{sg.velocity(j, k), sg.velocity(i, b), h * sg.curvature(j, k), h * sg.curvature(i, b),
                   w_at(j, k), w_at(i, b), 0.0, 0.0};
            c.lo = std::min(c.v0, c.v1);
            c.hi = std::max(c.v0, c.v1);
            double tc[2];
            const int nc = critical_points(c.v0, c.v1, c.s0, c.s1, tc);
            for (int q = 0; q < nc; ++q) {
                const double v = cubic(c.v0, c.v1, c.s0, c.s1, tc[q]);
                c.lo = std::min(c.lo, v);
                c.hi = std::max(c.hi, v);
            }
            vmin_ = std::min(vmin_, c.lo);
            vmax_ = std::max(vmax_, c.hi);
            cells_.push_back(c);
            node_v_.push_back(c.v0);
            node_w_.push_back(c.w0);
        }
}

double VelocityLaw::below(const Cell& c, double x) const {
    if (c.hi <= x) return 0.5 * (c.w0 + c.w1);
    if (c.lo > x) return 0.0;
    double knots[4] = {0.0, 0.0, 0.0, 1.0};
    double tc[2];
    const int nc = critical_points(c.v0, c.v1, c.s0, c.s1, tc);
    int nk = 1;
    for (int q = 0; q < nc; ++q) knots[nk++] = tc[q];
    knots[nk++] = 1.0;

    auto f = [&](double t) { return cubic(c.v0, c.v1, c.s0, c.s1, t) - x; };
    // antiderivative of the linear weight
    auto W = [&](double t) { return c.w0 * t + 0.5 * (c.w1 - c.w0) * t * t; };

    double acc = 0.0;
    for (int q = 0; q + 1 < nk; ++q) {
        double a = knots[q], b = knots[q + 1];
        const double fa = f(a), fb = f(b);
        if (fa <= 0.0 && fb <= 0.0) {
            acc += W(b) - W(a);
            continue;
        }
        if (fa > 0.0 && fb > 0.0) continue;
        double lo = a, hi = b;
        const bool rising = fa <= 0.0;
        for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((f(mid) <= 0.0) == rising) lo = mid;
            else hi = mid;
        }
        const double r = 0.5 * (lo + hi);
        acc += rising ? W(r) - W(a) : W(b) - W(r);
    }
    return acc;
}

double VelocityLaw::cdf(double x) const {
    if (x >= vmax_) return 1.0;
    if (x < vmin_) return 0.0;
    double s = 0.0;
    for (const auto& c : cells_) s += below(c, x);
    return std::clamp(s * scale_, 0.0, 1.0);
}

cplx VelocityLaw::char_fn(double lambda) const {
    cplx s = 0.0;
    for (std::size_t i = 0; i < node_v_.size(); ++i) s += node_w_[i] * std::polar(1.0, lambda * node_v_[i]);
    return s * scale_;
}

VelocityLaw velocity_cdf(const SpectralGrid& sg, const InitialState& init) { return VelocityLaw(sg, init); }

cplx char_fn_limit(const SpectralGrid& sg, const InitialState& init, double lambda) {
    if (!sg.has_derivatives) throw InvalidArgument("char_fn_limit: derivatives not filled");
    if (sg.dim != 2) throw InvalidArgument("char_fn_limit: spinor states need a two-dimensional coin");
    cplx s = 0.0;
    for (int j = 0; j < sg.M; ++j)
        for (int k = 0; k < sg.dim; ++k) {
            double w = 0.0;
            for (const auto& e : init.entries) w += e.weight * sg.weight(j, k, e.spinor);
            s += w * std::polar(1.0, lambda * sg.velocity(j, k));
        }
    return s / static_cast<double>(sg.M);
}

cplx char_fn_finite(const PositionDistribution& dist, double lambda) {
    const double n = dist.n > 0 ? dist.n : 1.0;
    const cplx z = std::polar(1.0, lambda / n);
    const double zr = z.real(), zi = z.imag();
    double ar = 0.0, ai = 0.0;
    for (auto it = dist.probs.rbegin(); it != dist.probs.rend(); ++it) {
        const double r = ar * zr - ai * zi + *it;
        ai = ar * zi + ai * zr;
        ar = r;
    }
    return cplx(ar, ai) * std::polar(1.0, lambda * static_cast<double>(dist.offset) / n);
}

TriangleCheck check_triangle_bound(const BoundConstants& bc, cplx finite, cplx limit, int n,
                                   double lambda) {
    if (n < 1) throw InvalidArgument("check_triangle_bound: n must be >= 1");
    TriangleCheck r;
    r.lhs = std::abs(finite - limit);
    const double al = std::abs(lambda);
    r.rhs = al * al / n * bc.sup_curvature + al / n * (bc.abs_position_moment + bc.sum_proj_deriv);
    r.ok = r.lhs <= r.rhs + 1e-8;
    return r;
}

TriangleCheck check_triangle_bound(const SpectralGrid& sg, const InitialState& init,
                                   const PositionDistribution& dist, double lambda) {
    return check_triangle_bound(bound_constants(sg, init), char_fn_finite(dist, lambda),
                                char_fn_limit(sg, init, lambda), dist.n, lambda);
}

PositionDistribution evolve_momentum(const MomentumWalk& walk, const InitialState& init, int n) {
    if (walk.dim != 2) throw InvalidArgument("evolve_momentum: spinor states need a two-dimensional coin");
    if (n < 0) throw InvalidArgument("evolve_momentum: n must be nonnegative");
    init.validate();
    long lo = init.entries.front().site, hi = lo;
    for (const auto& e : init.entries) {
        lo = std::min(lo, e.site);
        hi = std::max(hi, e.site);
    }
    const long width = hi - lo + 2L * n + 1;
    int M = 64;
    while (M < width + 1) M *= 2;

    PositionDistribution dist;
    dist.n = n;
    dist.offset = lo - n;
    dist.probs.assign(static_cast<std::size_t>(width), 0.0);

    std::vector<Eigen::Vector2cd> hat(static_cast<std::size_t>(M));
    for (const auto& e : init.entries) {
        for (int j = 0; j < M; ++j) {
            const double p = kTwoPi * j / M;
            const Eigen::MatrixXcd u = walk.unitary_at(p);
            Eigen::Vector2cd v(e.spinor[0], e.spinor[1]);
            v *= std::polar(1.0, p * static_cast<double>(e.site));
            for (int s = 0; s < n; ++s) v = u * v;
            hat[static_cast<std::size_t>(j)] = v;
        }
        for (long x = 0; x < width; ++x) {
            const long site = dist.offset + x;
            Eigen::Vector2cd psi = Eigen::Vector2cd::Zero();
            const cplx step = std::polar(1.0, -kTwoPi * static_cast<double>(site) / M);
            cplx ph = 1.0;
            for (int j = 0; j < M; ++j) {
                psi += ph * hat[static_cast<std::size_t>(j)];
                ph *= step;
                if ((j & 63) == 63) ph = std::polar(1.0, -kTwoPi * static_cast<double>(site) * (j + 1) / M);
            }
            psi /= static_cast<double>(M);
            dist.probs[static_cast<std::size_t>(x)] += e.weight * psi.squaredNorm();
        }
    }
    return dist;
}

void write_spectral_csv(std::ostream& os, const SpectralGrid& sg) {
    char buf[160];
    os << "p,band,omega,velocity,curvature\n";
    for (int j = 0; j < sg.M; ++j)
        for (int k = 0; k < sg.dim; ++k) {
            const double v = sg.has_derivatives ? sg.velocity(j, k) : std::nan("");
            const double c = sg.has_derivatives ? sg.curvature(j, k) : std::nan("");
            std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g\n", sg.p[static_cast<std::size_t>(j)], k,
                          sg.omega(j, k), v, c);
            os << buf;
        }
}

} // namespace qwalk
