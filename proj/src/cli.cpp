#include "qwalk/errors.hpp"
#include "qwalk/harness.hpp"
#include "qwalk/konno.hpp"
#include "qwalk/metrics.hpp"
#include "qwalk/wavefront.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qwalk {

namespace {

using json = nlohmann::json;

struct Options {
    std::string coin;
    std::string preset;
    std::string phi = "1,0,0,0";
    int n = -1;
    std::string n_list;
    std::string out;
    std::string slopes_out;
    std::string format; // empty: per-command default
    std::string lambdas;
    int grid = 1 << 14;
    int points = 201;
    double r = 0.1;
    double alpha = 1.0;
    double beta = 0.0;
};

std::vector<double> parse_doubles(const std::string& s, std::size_t expected, const char* what) {
    std::vector<double> v;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("cannot parse ") + what + ": " + s);
        }
    }
    if (expected && v.size() != expected)
        throw InvalidArgument(std::string(what) + " needs " + std::to_string(expected) + " comma-separated numbers");
    return v;
}

std::vector<int> n_values(const Options& o, const char* fallback) {
    if (!o.n_list.empty()) return parse_n_list(o.n_list);
    if (o.n >= 0) return {o.n};
    return parse_n_list(fallback);
}

CoinParams coin_from(const Options& o) {
    if (!o.coin.empty() && !o.preset.empty()) throw InvalidArgument("give either --coin or --preset, not both");
    if (!o.coin.empty()) {
        const auto v = parse_doubles(o.coin, 5, "--coin");
        return make_coin({v[0], v[1]}, {v[2], v[3]}, v[4]);
    }
    if (o.preset.empty() || o.preset == "hadamard") return CoinParams::hadamard();
    throw InvalidArgument("unknown preset: " + o.preset);
}

Spinor phi_from(const Options& o) {
    const auto v = parse_doubles(o.phi, 4, "--phi");
    return normalized({cplx(v[0], v[1]), cplx(v[2], v[3])});
}

json coin_json(const CoinParams& c) { return {c.a.real(), c.a.imag(), c.b.real(), c.b.imag(), c.theta}; }
json phi_json(const Spinor& p) { return {p[0].real(), p[0].imag(), p[1].real(), p[1].imag()}; }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json fit_json(const SlopeFit& f) {
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
            {"n_min", f.n_min}, {"n_max", f.n_max}};
}

struct Sink {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw InvalidArgument("cannot open output file: " + path);
        os = &file;
    }
    std::ostream& operator*() { return *os; }
};

void write_rows(std::ostream& os, const std::vector<std::tuple<int, std::string, double>>& rows, bool as_json) {
    if (as_json) {
        json arr = json::array();
        for (const auto& [n, q, v] : rows) arr.push_back({{"n", n}, {"quantity", q}, {"value", v}});
        os << arr.dump(2) << "\n";
        return;
    }
    os << "n,quantity,value\n";
    for (const auto& [n, q, v] : rows) os << n << "," << q << "," << fmt(v) << "\n";
}

int cmd_simulate(const Options& o) {
    if (o.n < 0) throw InvalidArgument("simulate needs --n");
    const auto coin = coin_from(o);
    const auto phi = phi_from(o);
    const auto dist = distribution(coin, InitialState::localized(phi), o.n);
    Sink out(o.out);
    if (o.format == "json") {
        json probs = json::array();
        for (std::size_t j = 0; j < dist.probs.size(); ++j)
            probs.push_back({{"k", dist.offset + static_cast<long>(j)}, {"p", dist.probs[j]}});
        *out << json{{"n", dist.n}, {"coin", coin_json(coin)}, {"phi", phi_json(phi)}, {"probs", probs}}.dump(2) << "\n";
    } else {
        write_distribution_csv(*out, dist);
    }
    return 0;
}

int cmd_limit(const Options& o) {
    if (o.points < 2) throw InvalidArgument("--points must be >= 2");
    const auto coin = coin_from(o);
    const auto phi = phi_from(o);
    const KonnoCDF kc(coin, phi);
    std::vector<double> xs(static_cast<std::size_t>(o.points));
    for (int i = 0; i < o.points; ++i) xs[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (o.points - 1);
    Sink out(o.out);
    if (o.format == "json") {
        json rows = json::array();
        for (double x : xs) rows.push_back({{"x", x}, {"sigma", kc.density(x)}, {"F", kc.cdf(x)}});
        *out << json{{"lambda_c", kc.lambda()}, {"coin", coin_json(coin)}, {"phi", phi_json(phi)}, {"table", rows}}.dump(2)
             << "\n";
    } else {
        write_konno_csv(*out, kc, xs);
    }
    return 0;
}

int cmd_rates(const Options& o) {
    const auto coin = coin_from(o);
    const auto phi = phi_from(o);
    const auto ns = n_values(o, "128:8192:x2");
    const auto table = run_rate_sweep(coin, InitialState::localized(phi), ns);
    const bool ok = table.invariants_hold();

    json slopes = json::object();
    if (table.rows.size() >= 5) {
        for (const char* c : {"kolmogorov", "levy", "left_tail_scaled"}) {
            try {
                slopes[c] = fit_json(fit_slope(table, c));
            } catch (const NonPositiveValue&) {
                slopes[c] = nullptr;
            }
        }
    }
    double lo = 1e300, hi = 0.0;
    for (const auto& r : table.rows) {
        const double s = std::cbrt(static_cast<double>(r.n)) * r.kolmogorov;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    json summary{{"slopes", slopes}, {"band_ratio", lo > 0.0 ? hi / lo : 0.0}, {"invariants_hold", ok}};

    if (o.format == "json") {
        json records = json::array();
        for (const auto& r : table.rows)
            for (auto [m, v] : {std::pair{"kolmogorov", r.kolmogorov}, {"levy", r.levy},
                                {"zolotarev_bound", r.zolotarev_bound}, {"left_tail_scaled", r.left_tail_scaled}})
                records.push_back({{"metric", m}, {"value", v}, {"tol", 1e-9}, {"n", r.n},
                                   {"coin", coin_json(coin)}, {"phi", phi_json(phi)}});
        summary["records"] = records;
        Sink out(o.out);
        *out << summary.dump(2) << "\n";
    } else {
        {
            Sink out(o.out);
            *out << "n,kolmogorov,levy,zolotarev_bound,left_tail_scaled\n";
            for (const auto& r : table.rows)
                *out << r.n << "," << fmt(r.kolmogorov) << "," << fmt(r.levy) << "," << fmt(r.zolotarev_bound) << ","
                     << fmt(r.left_tail_scaled) << "\n";
        }
        if (!o.slopes_out.empty()) {
            Sink s(o.slopes_out);
            *s << summary.dump(2) << "\n";
        } else {
            (o.out.empty() ? std::cerr : std::cout) << summary.dump(2) << "\n";
        }
    }
    return ok ? 0 : 1;
}

int cmd_bounds(const Options& o) {
    const auto coin = coin_from(o);
    const auto phi = phi_from(o);
    const auto ns = n_values(o, "16:1024:+16");
    const auto lambdas = o.lambdas.empty()
                             ? std::vector<double>{-10, -5, -2, -1, -0.5, -0.1, 0, 0.1, 0.5, 1, 2, 5, 10}
                             : parse_doubles(o.lambdas, 0, "--lambdas");
    const auto rep = run_bound_battery(coin, InitialState::localized(phi), lambdas, ns, o.grid);
    Sink out(o.out);
    if (o.format != "csv") {
        json cells = json::array();
        for (const auto& c : rep.cells)
            cells.push_back({{"lambda", c.lambda}, {"n", c.n}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok}});
        *out << json{{"coin", coin_json(coin)},
                     {"phi", phi_json(phi)},
                     {"sup_curvature", rep.constants.sup_curvature},
                     {"sum_proj_deriv", rep.constants.sum_proj_deriv},
                     {"abs_position_moment", rep.constants.abs_position_moment},
                     {"all_ok", rep.all_ok},
                     {"failures", rep.failures},
                     {"cells", cells}}
                    .dump(2)
             << "\n";
    } else {
        *out << "lambda,n,lhs,rhs,ok\n";
        for (const auto& c : rep.cells)
            *out << fmt(c.lambda) << "," << c.n << "," << fmt(c.lhs) << "," << fmt(c.rhs) << "," << (c.ok ? 1 : 0) << "\n";
    }
    return rep.all_ok ? 0 : 1;
}

int cmd_wavefront(const Options& o) {
    const auto coin = coin_from(o);
    const auto phi = phi_from(o);
    const auto ns = n_values(o, "256:8192:x2");
    const WavefrontApprox wa(coin, phi);
    const auto dists = distributions(coin, InitialState::localized(phi), ns);
    std::vector<std::tuple<int, std::string, double>> rows;
    for (const auto& d : dists) {
        if (d.n < 1) throw InvalidArgument("wavefront needs n >= 1");
        rows.emplace_back(d.n, "approx_error_left", approx_max_error(d, wa, Side::Left));
        rows.emplace_back(d.n, "approx_error_right", approx_max_error(d, wa, Side::Right));
        rows.emplace_back(d.n, "mass_lower_left", wavefront_mass_lower(d, coin, Side::Left));
        rows.emplace_back(d.n, "mass_upper_left", wavefront_mass_upper(d, coin, Side::Left));
        rows.emplace_back(d.n, "mass_lower_right", wavefront_mass_lower(d, coin, Side::Right));
        rows.emplace_back(d.n, "mass_upper_right", wavefront_mass_upper(d, coin, Side::Right));
    }
    Sink out(o.out);
    write_rows(*out, rows, o.format == "json");
    return 0;
}

int cmd_oscsum(const Options& o) {
    const auto ns = n_values(o, "4096:262144:x2");
    const auto p = quadratic_phase(o.alpha, o.beta);
    bool ok = true;
    std::vector<std::tuple<int, std::string, double>> rows;
    for (int n : ns) {
        if (n < 1) throw InvalidArgument("oscsum needs n >= 1");
        const auto w = weighted_oscillatory_sum(n, p, o.r);
        ok = ok && std::abs(w.value) <= w.bound;
        rows.emplace_back(n, "osc_sum", oscillatory_sum(n, p, o.r));
        rows.emplace_back(n, "weighted_sum", w.value);
        rows.emplace_back(n, "weighted_bound", w.bound);
        rows.emplace_back(n, "riemann_sum", riemann_vs_integral_check(n, p));
    }
    Sink out(o.out);
    write_rows(*out, rows, o.format == "json");
    return ok ? 0 : 1;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Discrete-time quantum walk laboratory"};
    app.name("qwalk");
    app.require_subcommand(1, 1);
    app.set_config("--config", "", "flat key=value file mirroring the command-line flags");
    app.get_config_formatter_base()->arrayDelimiter('\0');

    Options o;
    app.add_option("--coin", o.coin, "coin as a_re,a_im,b_re,b_im,theta");
    app.add_option("--preset", o.preset, "named coin (hadamard)");
    app.add_option("--phi", o.phi, "initial spinor re1,im1,re2,im2 (normalized on input)");
    app.add_option("--n", o.n, "step count");
    app.add_option("--n-list", o.n_list, "step counts: lo:hi:xK, lo:hi:+K or a,b,c");
    app.add_option("--out", o.out, "output path (default stdout)");
    app.add_option("--slopes-out", o.slopes_out, "rates: path for the slope JSON");
    app.add_option("--format", o.format, "csv or json (default csv, json for bounds)")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--lambdas", o.lambdas, "bounds: comma-separated lambda grid");
    app.add_option("--grid", o.grid, "bounds: momentum grid size");
    app.add_option("--points", o.points, "limit: number of table points on [-1, 1]");
    app.add_option("--r", o.r, "oscsum: upper summation fraction");
    app.add_option("--alpha", o.alpha, "oscsum: linear phase coefficient");
    app.add_option("--beta", o.beta, "oscsum: quadratic phase coefficient");

    std::string cmd;
    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"simulate", "dump p_n as CSV k,p"},
             {"limit", "dump the limiting density and CDF as CSV x,sigma,F"},
             {"rates", "Kolmogorov / Levy / Zolotarev rate sweep"},
             {"bounds", "characteristic-function inequality battery"},
             {"wavefront", "Airy wavefront comparison"},
             {"oscsum", "oscillatory sum scaling experiments"}}) {
        auto* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        sub->callback([&cmd, name = name] { cmd = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e);
            return 0;
        }
        std::cerr << "qwalk: " << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd == "simulate") return cmd_simulate(o);
        if (cmd == "limit") return cmd_limit(o);
        if (cmd == "rates") return cmd_rates(o);
        if (cmd == "bounds") return cmd_bounds(o);
        if (cmd == "wavefront") return cmd_wavefront(o);
        if (cmd == "oscsum") return cmd_oscsum(o);
    } catch (const InvalidArgument& e) {
        std::cerr << "qwalk: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qwalk: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace qwalk
