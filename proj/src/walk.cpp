#include "qwalk/walk.hpp"
#include "qwalk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace qwalk {

std::array<cplx, 4> CoinParams::matrix() const {
    const cplx ph = std::polar(1.0, theta);
    return {ph * a, ph * b, -ph * std::conj(b), ph * std::conj(a)};
}

void CoinParams::validate() const {
    const double s = std::norm(a) + std::norm(b);
    if (std::abs(s - 1.0) > 1e-12)
        throw InvalidArgument("coin: |a|^2 + |b|^2 must equal 1");
    if (std::abs(a) == 0.0 || std::abs(b) == 0.0)
        throw InvalidArgument("coin: a and b must both be nonzero");
}

CoinParams CoinParams::hadamard() {
    const double r = 1.0 / std::numbers::sqrt2;
    return {cplx(0.0, -r), cplx(0.0, -r), std::numbers::pi / 2};
}

CoinParams make_coin(cplx a, cplx b, double theta) {
    CoinParams c{a, b, theta};
    c.validate();
    return c;
}

Spinor normalized(const Spinor& phi) {
    const double nrm = std::sqrt(std::norm(phi[0]) + std::norm(phi[1]));
    if (nrm == 0.0) throw InvalidArgument("spinor has zero norm");
    return {phi[0] / nrm, phi[1] / nrm};
}

InitialState InitialState::localized(const Spinor& phi, long site) {
    InitialState s;
    s.entries.push_back({site, phi, 1.0});
    s.validate();
    return s;
}

void InitialState::validate() const {
    if (entries.empty()) throw InvalidArgument("initial state has no entries");
    double wsum = 0.0;
    for (const auto& e : entries) {
        if (!(e.weight > 0.0 && e.weight <= 1.0))
            throw InvalidArgument("initial state weight outside (0,1]");
        const double nrm = std::norm(e.spinor[0]) + std::norm(e.spinor[1]);
        if (std::abs(nrm - 1.0) > 1e-12)
            throw InvalidArgument("initial state spinor is not normalized");
        wsum += e.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw InvalidArgument("initial state weights do not sum to 1");
}

double InitialState::abs_position_moment() const {
    double m = 0.0;
    for (const auto& e : entries) m += e.weight * std::abs(static_cast<double>(e.site));
    return m;
}

WalkState WalkState::localized(const Spinor& phi, long site) {
    return {site, {phi}, 0};
}

double WalkState::norm2() const {
    double s = 0.0;
    for (const auto& v : amplitudes) s += std::norm(v[0]) + std::norm(v[1]);
    return s;
}

namespace {

inline cplx mul(cplx x, cplx y) {
    return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

inline cplx flush(cplx z) {
    constexpr double kTiny = 1e-160;
    return {std::abs(z.real()) < kTiny ? 0.0 : z.real(), std::abs(z.imag()) < kTiny ? 0.0 : z.imag()};
}

void step_into(const std::array<cplx, 4>& m, const std::vector<Spinor>& in,
               std::vector<Spinor>& out) {
    out.resize(in.size() + 2);
    out[0][0] = out[1][0] = 0.0;
    out[in.size()][1] = out[in.size() + 1][1] = 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
        const cplx u = in[j][0], d = in[j][1];
        out[j + 2][0] = flush(mul(m[0], u) + mul(m[1], d));
        out[j][1] = flush(mul(m[2], u) + mul(m[3], d));
    }
}

} // namespace

WalkState evolve(const CoinParams& coin, const WalkState& state) {
    WalkState next;
    next.offset = state.offset - 1;
    next.step_count = state.step_count + 1;
    step_into(coin.matrix(), state.amplitudes, next.amplitudes);
    return next;
}

double PositionDistribution::at(long site) const {
    if (site < offset || site > last_site()) return 0.0;
    return probs[static_cast<std::size_t>(site - offset)];
}

double PositionDistribution::total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

std::vector<PositionDistribution> distributions(const CoinParams& coin,
                                                const InitialState& init,
                                                const std::vector<int>& ns) {
    init.validate();
    if (ns.empty()) return {};
    for (int n : ns)
        if (n < 0) throw InvalidArgument("step count must be nonnegative");

    long lo = init.entries.front().site, hi = lo;
    for (const auto& e : init.entries) {
        lo = std::min(lo, e.site);
        hi = std::max(hi, e.site);
    }

    std::vector<PositionDistribution> out(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        out[i].n = ns[i];
        out[i].offset = lo - ns[i];
        out[i].probs.assign(static_cast<std::size_t>(hi - lo + 2 * ns[i] + 1), 0.0);
    }
    const int nmax = *std::max_element(ns.begin(), ns.end());
    const auto m = coin.matrix();

    std::vector<Spinor> cur, nxt;
    for (const auto& e : init.entries) {
        cur.assign(1, e.spinor);
        long offset = e.site;
        for (int step = 0;; ++step) {
            for (std::size_t i = 0; i < ns.size(); ++i) {
                if (ns[i] != step) continue;
                auto& probs = out[i].probs;
                const auto base = static_cast<std::size_t>(offset - out[i].offset);
                for (std::size_t j = 0; j < cur.size(); ++j)
                    probs[base + j] += e.weight * (std::norm(cur[j][0]) + std::norm(cur[j][1]));
            }
            if (step == nmax) break;
            step_into(m, cur, nxt);
            cur.swap(nxt);
            --offset;
        }
    }
    return out;
}

PositionDistribution distribution(const CoinParams& coin, const InitialState& init, int n) {
    return distributions(coin, init, {n}).front();
}

namespace {

StepCDF build_cdf(const PositionDistribution& dist, double scale) {
    StepCDF cdf;
    double acc = 0.0;
    for (std::size_t j = 0; j < dist.probs.size(); ++j) {
        if (dist.probs[j] <= 0.0) continue;
        acc += dist.probs[j];
        cdf.jump_points.push_back(static_cast<double>(dist.offset + static_cast<long>(j)) / scale);
        cdf.cumulative.push_back(acc);
    }
    return cdf;
}

} // namespace

StepCDF rescaled_cdf(const PositionDistribution& dist) {
    if (dist.n < 1) throw InvalidArgument("rescaled CDF needs n >= 1");
    return build_cdf(dist, static_cast<double>(dist.n));
}

StepCDF unscaled_cdf(const PositionDistribution& dist) { return build_cdf(dist, 1.0); }

double cdf_at(const StepCDF& cdf, double x) {
    auto it = std::upper_bound(cdf.jump_points.begin(), cdf.jump_points.end(), x);
    if (it == cdf.jump_points.begin()) return 0.0;
    return cdf.cumulative[static_cast<std::size_t>(it - cdf.jump_points.begin()) - 1];
}

double cdf_at_left(const StepCDF& cdf, double x) {
    auto it = std::lower_bound(cdf.jump_points.begin(), cdf.jump_points.end(), x);
    if (it == cdf.jump_points.begin()) return 0.0;
    return cdf.cumulative[static_cast<std::size_t>(it - cdf.jump_points.begin()) - 1];
}

void write_distribution_csv(std::ostream& os, const PositionDistribution& dist) {
    char buf[64];
    os << "k,p\n";
    for (std::size_t j = 0; j < dist.probs.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%ld,%.17g\n", dist.offset + static_cast<long>(j), dist.probs[j]);
        os << buf;
    }
}

void write_cdf_csv(std::ostream& os, const StepCDF& cdf) {
    char buf[64];
    os << "x,F\n";
    for (std::size_t j = 0; j < cdf.jump_points.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", cdf.jump_points[j], cdf.cumulative[j]);
        os << buf;
    }
}

} // namespace qwalk
