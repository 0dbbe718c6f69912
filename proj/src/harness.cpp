#include "qwalk/harness.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/konno.hpp"
#include "qwalk/metrics.hpp"
#include "qwalk/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace qwalk {

std::vector<double> RateTable::ns() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.n);
    return v;
}

std::vector<double> RateTable::column(std::string_view name) const {
    std::vector<double> v;
    for (const auto& r : rows) {
        if (name == "kolmogorov") v.push_back(r.kolmogorov);
        else if (name == "levy") v.push_back(r.levy);
        else if (name == "zolotarev_bound") v.push_back(r.zolotarev_bound);
        else if (name == "left_tail_scaled") v.push_back(r.left_tail_scaled);
        else throw InvalidArgument("unknown rate table column: " + std::string(name));
    }
    return v;
}

bool RateTable::invariants_hold(double tol) const {
    for (const auto& r : rows) {
        if (r.kolmogorov < 0.0 || r.kolmogorov > 1.0 || r.levy < 0.0 || r.levy > 1.0) return false;
        if (r.levy > r.kolmogorov + tol) return false;
        if (r.zolotarev_bound > 0.0 && r.levy > r.zolotarev_bound) return false;
    }
    return true;
}

RateTable run_rate_sweep(const CoinParams& coin, const InitialState& init, const std::vector<int>& n_list,
                         const SweepOptions& opts) {
    if (n_list.empty()) throw InvalidArgument("rate sweep: empty n list");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw InvalidArgument("rate sweep: n must be >= 1");
        if (i > 0 && n_list[i] <= n_list[i - 1]) throw InvalidArgument("rate sweep: n list must be strictly increasing");
    }
    if (n_list.back() > (1 << 14)) throw InvalidArgument("rate sweep: n above 2^14 exceeds the budget");

    const KonnoCDF kc(coin, init);
    const auto G = CdfHandle::continuous([&kc](double x) { return kc.cdf(x); }, -kc.support(), kc.support());
    std::unordered_map<double, cplx> limit_cache;
    const CharFn charG = [&](double l) {
        auto it = limit_cache.find(l);
        if (it != limit_cache.end()) return it->second;
        const cplx v = kc.char_fn(l);
        limit_cache.emplace(l, v);
        return v;
    };

    const auto dists = distributions(coin, init, n_list);
    RateTable table;
    for (const auto& dist : dists) {
        RateRow row;
        row.n = dist.n;
        const auto F = CdfHandle::step(rescaled_cdf(dist));
        row.kolmogorov = kolmogorov(F, G);
        row.levy = levy(F, G, opts.tol);
        if (opts.zolotarev) {
            const double eps = std::pow(static_cast<double>(dist.n), -1.0 / 3.0);
            row.zolotarev_bound = zolotarev_bound([&dist](double l) { return char_fn_finite(dist, l); }, charG, eps);
        }
        row.left_tail_scaled = wavefront_mass_lower(dist, coin, Side::Left);
        table.rows.push_back(row);
    }
    return table;
}

SlopeFit fit_slope(const std::vector<double>& ns, const std::vector<double>& values) {
    if (ns.size() != values.size()) throw InvalidArgument("fit_slope: size mismatch");
    if (ns.size() < 5) throw InvalidArgument("fit_slope: needs at least 5 points");
    const std::size_t m = ns.size();
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(ns[i] > 0.0) || !(values[i] > 0.0)) throw NonPositiveValue("fit_slope: values must be positive");
        x[i] = std::log(ns[i]);
        y[i] = std::log(values[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("fit_slope: all n equal");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ssr += r * r;
    }
    f.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    f.n_min = *std::min_element(ns.begin(), ns.end());
    f.n_max = *std::max_element(ns.begin(), ns.end());
    return f;
}

SlopeFit fit_slope(const RateTable& table, std::string_view column) {
    return fit_slope(table.ns(), table.column(column));
}

BatteryReport run_bound_battery(const CoinParams& coin, const InitialState& init,
                                const std::vector<double>& lambda_grid, const std::vector<int>& n_grid, int M) {
    if (lambda_grid.empty() || n_grid.empty()) throw InvalidArgument("bound battery: empty grid");
    const auto sg = decompose_with_derivatives(MomentumWalk::coin_step(coin), M);
    BatteryReport rep;
    rep.constants = bound_constants(sg, init);

    std::vector<int> ns = n_grid;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    const auto dists = distributions(coin, init, ns);
    std::map<int, const PositionDistribution*> by_n;
    for (const auto& d : dists) by_n[d.n] = &d;

    std::map<double, cplx> limits;
    for (double l : lambda_grid) limits.emplace(l, char_fn_limit(sg, init, l));

    for (int n : n_grid)
        for (double l : lambda_grid) {
            const auto& dist = *by_n.at(n);
            const auto r = check_triangle_bound(rep.constants, char_fn_finite(dist, l), limits.at(l), n, l);
            rep.cells.push_back({l, n, r.lhs, r.rhs, r.ok});
            if (!r.ok) ++rep.failures;
        }
    rep.all_ok = rep.failures == 0;
    return rep;
}

std::vector<int> parse_n_list(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("bad n list: " + text);
        }
        if (used != s.size() || v < 0) throw InvalidArgument("bad n list: " + text);
        return v;
    };
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
        if (parts.size() != 3 || parts[2].size() < 2) throw InvalidArgument("bad n list: " + text);
        const int lo = to_int(parts[0]), hi = to_int(parts[1]);
        const int step = to_int(parts[2].substr(1));
        if (parts[2][0] == 'x') {
            if (step < 2 || lo < 1) throw InvalidArgument("bad n list: " + text);
            for (long v = lo; v <= hi; v *= step) out.push_back(static_cast<int>(v));
        } else if (parts[2][0] == '+') {
            if (step < 1) throw InvalidArgument("bad n list: " + text);
            for (long v = lo; v <= hi; v += step) out.push_back(static_cast<int>(v));
        } else {
            throw InvalidArgument("bad n list: " + text);
        }
    } else {
        std::stringstream ss(text);
        for (std::string tok; std::getline(ss, tok, ',');) out.push_back(to_int(tok));
    }
    if (out.empty()) throw InvalidArgument("bad n list: " + text);
    return out;
}

} // namespace qwalk
