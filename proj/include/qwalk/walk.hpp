#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <vector>

namespace qwalk {

using cplx = std::complex<double>;
using Spinor = std::array<cplx, 2>;

// C = e^{i theta} (a b; -conj(b) conj(a))
struct CoinParams {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    double theta = 0.0;

    double abs_a() const { return std::abs(a); }
    double abs_b() const { return std::abs(b); }
    std::array<cplx, 4> matrix() const; // row-major

    // throws InvalidArgument unless |a|^2+|b|^2 = 1 and a, b nonzero
    void validate() const;

    static CoinParams hadamard();
};

CoinParams make_coin(cplx a, cplx b, double theta);

struct InitialState {
    struct Entry {
        long site = 0;
        Spinor spinor{};
        double weight = 1.0;
    };
    std::vector<Entry> entries;

    static InitialState localized(const Spinor& phi, long site = 0);
    void validate() const;
    double abs_position_moment() const;
};

Spinor normalized(const Spinor& phi);

struct WalkState {
    long offset = 0;
    std::vector<Spinor> amplitudes;
    int step_count = 0;

    static WalkState localized(const Spinor& phi, long site = 0);
    double norm2() const;
};

WalkState evolve(const CoinParams& coin, const WalkState& state);

struct PositionDistribution {
    long offset = 0;
    std::vector<double> probs;
    int n = 0;

    double at(long site) const;
    long first_site() const { return offset; }
    long last_site() const { return offset + static_cast<long>(probs.size()) - 1; }
    double total() const;
};

PositionDistribution distribution(const CoinParams& coin, const InitialState& init, int n);

// One evolution up to max(ns), snapshotting each requested step count.
std::vector<PositionDistribution> distributions(const CoinParams& coin,
                                                const InitialState& init,
                                                const std::vector<int>& ns);

struct StepCDF {
    std::vector<double> jump_points;
    std::vector<double> cumulative;
};

StepCDF rescaled_cdf(const PositionDistribution& dist);
StepCDF unscaled_cdf(const PositionDistribution& dist);

double cdf_at(const StepCDF& cdf, double x);
double cdf_at_left(const StepCDF& cdf, double x);

void write_distribution_csv(std::ostream& os, const PositionDistribution& dist);
void write_cdf_csv(std::ostream& os, const StepCDF& cdf);

} // namespace qwalk
