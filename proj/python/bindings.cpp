#include "qwalk/errors.hpp"
#include "qwalk/harness.hpp"
#include "qwalk/konno.hpp"
#include "qwalk/metrics.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/wavefront.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qwalk;

namespace {

Spinor spinor(std::pair<cplx, cplx> p) { return normalized({p.first, p.second}); }

CdfHandle konno_handle(const KonnoCDF& kc) {
    return CdfHandle::continuous([&kc](double x) { return kc.cdf(x); }, -kc.support(), kc.support());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Discrete-time quantum walk laboratory";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<WindowViolation>(m, "WindowViolation", PyExc_ValueError);
    py::register_exception<OutOfSupportedRange>(m, "OutOfSupportedRange", PyExc_ValueError);
    py::register_exception<NonPositiveValue>(m, "NonPositiveValue", PyExc_ValueError);

    py::enum_<Side>(m, "Side").value("Left", Side::Left).value("Right", Side::Right);

    py::class_<CoinParams>(m, "Coin")
        .def(py::init(&make_coin), py::arg("a"), py::arg("b"), py::arg("theta"))
        .def_static("hadamard", &CoinParams::hadamard)
        .def_readonly("a", &CoinParams::a)
        .def_readonly("b", &CoinParams::b)
        .def_readonly("theta", &CoinParams::theta)
        .def_property_readonly("abs_a", &CoinParams::abs_a);

    py::class_<PositionDistribution>(m, "Distribution")
        .def_readonly("offset", &PositionDistribution::offset)
        .def_readonly("probs", &PositionDistribution::probs)
        .def_readonly("n", &PositionDistribution::n)
        .def("at", &PositionDistribution::at)
        .def("total", &PositionDistribution::total);

    m.def("distribution",
          [](const CoinParams& c, std::pair<cplx, cplx> phi, int n) {
              return distribution(c, InitialState::localized(spinor(phi)), n);
          },
          py::arg("coin"), py::arg("phi"), py::arg("n"));

    m.def("rescaled_cdf",
          [](const PositionDistribution& d) {
              const auto s = rescaled_cdf(d);
              return std::make_pair(s.jump_points, s.cumulative);
          });

    m.def("lambda_c", [](const CoinParams& c, std::pair<cplx, cplx> phi) { return lambda_c(c, spinor(phi)); });

    py::class_<KonnoCDF>(m, "Konno")
        .def(py::init([](const CoinParams& c, std::pair<cplx, cplx> phi) { return KonnoCDF(c, spinor(phi)); }))
        .def_property_readonly("lambda_c", &KonnoCDF::lambda)
        .def("density", &KonnoCDF::density)
        .def("cdf", &KonnoCDF::cdf)
        .def("char_fn", &KonnoCDF::char_fn)
        .def("edge_coefficient", &KonnoCDF::edge_coefficient);

    m.def("kolmogorov_to_limit", [](const PositionDistribution& d, const KonnoCDF& kc) {
        return kolmogorov(CdfHandle::step(rescaled_cdf(d)), konno_handle(kc));
    });
    m.def("levy_to_limit",
          [](const PositionDistribution& d, const KonnoCDF& kc, double tol) {
              return levy(CdfHandle::step(rescaled_cdf(d)), konno_handle(kc), tol);
          },
          py::arg("dist"), py::arg("konno"), py::arg("tol") = 1e-9);
    m.def("levy_steps", [](std::vector<double> xa, std::vector<double> fa, std::vector<double> xb,
                           std::vector<double> fb, double tol) {
        return levy(CdfHandle::step({xa, fa}), CdfHandle::step({xb, fb}), tol);
    }, py::arg("xa"), py::arg("fa"), py::arg("xb"), py::arg("fb"), py::arg("tol") = 1e-9);

    m.def("smoothing_cdf", [](double eps, int order, double x) { return smoothing_cdf({eps, order}, x); });
    m.def("smoothing_char_fn", [](double eps, int order, double l) { return smoothing_char_fn({eps, order}, l); });
    m.def("char_fn_finite", &char_fn_finite);

    m.def("velocity_cdf",
          [](const CoinParams& c, std::pair<cplx, cplx> phi, const std::vector<double>& xs, int M) {
              const auto sg = decompose_with_derivatives(MomentumWalk::coin_step(c), M);
              const VelocityLaw law(sg, InitialState::localized(spinor(phi)));
              std::vector<double> out;
              for (double x : xs) out.push_back(law.cdf(x));
              return out;
          },
          py::arg("coin"), py::arg("phi"), py::arg("xs"), py::arg("M") = 1 << 14);

    m.def("airy", &airy);

    py::class_<WavefrontApprox>(m, "Wavefront")
        .def(py::init([](const CoinParams& c, std::pair<cplx, cplx> phi) { return WavefrontApprox(c, spinor(phi)); }))
        .def_property_readonly("alpha", &WavefrontApprox::alpha)
        .def("envelope", &WavefrontApprox::envelope)
        .def("approx_pn", &WavefrontApprox::approx_pn)
        .def("front_site", &WavefrontApprox::front_site);

    py::class_<SlopeFit>(m, "SlopeFit")
        .def_readonly("slope", &SlopeFit::slope)
        .def_readonly("intercept", &SlopeFit::intercept)
        .def_readonly("r_squared", &SlopeFit::r_squared);
    m.def("fit_slope", py::overload_cast<const std::vector<double>&, const std::vector<double>&>(&fit_slope));

    m.def("rate_sweep",
          [](const CoinParams& c, std::pair<cplx, cplx> phi, const std::vector<int>& ns, bool zolotarev) {
              SweepOptions opts;
              opts.zolotarev = zolotarev;
              const auto t = run_rate_sweep(c, InitialState::localized(spinor(phi)), ns, opts);
              py::list rows;
              for (const auto& r : t.rows) {
                  py::dict d;
                  d["n"] = r.n;
                  d["kolmogorov"] = r.kolmogorov;
                  d["levy"] = r.levy;
                  d["zolotarev_bound"] = r.zolotarev_bound;
                  d["left_tail_scaled"] = r.left_tail_scaled;
                  rows.append(d);
              }
              return rows;
          },
          py::arg("coin"), py::arg("phi"), py::arg("ns"), py::arg("zolotarev") = true);

    m.def("oscillatory_sum", [](int n, double alpha, double r) { return oscillatory_sum(n, linear_phase(alpha), r); });

    m.def("cli", [](std::vector<std::string> args) {
        args.insert(args.begin(), "qwalk");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        return cli_main(static_cast<int>(argv.size()), argv.data());
    });
}
