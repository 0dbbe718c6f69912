#pragma once

#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qwalk {

struct RateRow {
    int n = 0;
    double kolmogorov = 0.0;
    double levy = 0.0;
    double zolotarev_bound = 0.0;
    double left_tail_scaled = 0.0;
};

struct RateTable {
    std::vector<RateRow> rows;

    std::vector<double> ns() const;
    std::vector<double> column(std::string_view name) const;
    // levy <= kolmogorov + tol and levy <= zolotarev_bound on every row
    bool invariants_hold(double tol = 1e-9) const;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double n_min = 0.0;
    double n_max = 0.0;
};

struct SweepOptions {
    double tol = 1e-9;
    bool zolotarev = true;
};

RateTable run_rate_sweep(const CoinParams& coin, const InitialState& init, const std::vector<int>& n_list,
                         const SweepOptions& opts = {});

SlopeFit fit_slope(const std::vector<double>& ns, const std::vector<double>& values);
SlopeFit fit_slope(const RateTable& table, std::string_view column);

struct BatteryCell {
    double lambda = 0.0;
    int n = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

struct BatteryReport {
    BoundConstants constants;
    std::vector<BatteryCell> cells;
    bool all_ok = false;
    std::size_t failures = 0;
};

BatteryReport run_bound_battery(const CoinParams& coin, const InitialState& init,
                                const std::vector<double>& lambda_grid, const std::vector<int>& n_grid,
                                int M = 1 << 14);

// "128:8192:x2", "16:1024:+16" or "64,128,256"
std::vector<int> parse_n_list(const std::string& text);

int cli_main(int argc, const char* const* argv);

} // namespace qwalk
