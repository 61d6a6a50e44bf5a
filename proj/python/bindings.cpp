#include <algorithm>
#include <complex>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pockets/cli.hpp"
#include "pockets/dynamics.hpp"
#include "pockets/forcing.hpp"
#include "pockets/normal_form.hpp"
#include "pockets/scanner.hpp"

namespace py = pybind11;
using namespace pockets;

namespace {

// Real series from {k: c_k} for k >= 0; negative indices are mirrored.
FourierSeries1 series_from_map(const std::map<int, std::complex<double>>& coeffs) {
    int order = 1;
    for (const auto& [k, c] : coeffs) order = std::max(order, std::abs(k));
    auto f = FourierSeries1::zeros(order);
    for (const auto& [k, c] : coeffs) {
        if (k == 0 && c.imag() != 0.0) throw std::invalid_argument("f_0 must be real");
        if (k < 0)
            f.set(-k, std::conj(c));
        else
            f.set(k, c);
    }
    return f;
}

std::map<int, std::complex<double>> series_to_map(const FourierSeries1& f) {
    std::map<int, std::complex<double>> out;
    for (int k = -f.order(); k <= f.order(); ++k)
        if (f[k] != cplx{}) out[k] = f[k];
    return out;
}

AxisSpec axis_from(const std::string& name, double lo, double hi, int n) { return {parse_param(name), lo, hi, n}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Seasonal phase-oscillator entrainment: forcing, dynamics, normal form and scans";

    py::enum_<Smoother>(m, "Smoother")
        .value("gaussian", Smoother::gaussian)
        .value("cosine_bump", Smoother::cosine_bump);

    py::class_<SeasonalForcing>(m, "SeasonalForcing")
        .def(py::init([](double lambda, double alpha, int order, double beta, Smoother smoother) {
                 SeasonalForcing sf{lambda, alpha, order, beta, smoother};
                 sf.validate();
                 return sf;
             }),
             py::arg("lam") = 0.5, py::arg("alpha") = 50.0, py::arg("order") = 64, py::arg("beta") = 0.0,
             py::arg("smoother") = Smoother::gaussian)
        .def_readwrite("lam", &SeasonalForcing::lambda)
        .def_readwrite("alpha", &SeasonalForcing::alpha)
        .def_readwrite("order", &SeasonalForcing::order)
        .def_readwrite("beta", &SeasonalForcing::beta)
        .def_readwrite("smoother", &SeasonalForcing::smoother)
        .def("validate", &SeasonalForcing::validate);

    py::class_<OscillatorParams>(m, "OscillatorParams")
        .def(py::init([](int p, int q, double sigma, double eta, double eps, SeasonalForcing forcing, int steps) {
                 OscillatorParams params;
                 params.p = p;
                 params.q = q;
                 params.sigma = sigma;
                 params.eta = eta;
                 params.eps = eps;
                 params.forcing = forcing;
                 params.steps_per_period = steps;
                 params.validate();
                 return params;
             }),
             py::arg("p") = 1, py::arg("q") = 1, py::arg("sigma") = 0.0, py::arg("eta") = 0.0, py::arg("eps") = 0.0,
             py::arg("forcing") = SeasonalForcing{}, py::arg("steps") = 512)
        .def_readwrite("p", &OscillatorParams::p)
        .def_readwrite("q", &OscillatorParams::q)
        .def_readwrite("sigma", &OscillatorParams::sigma)
        .def_readwrite("eta", &OscillatorParams::eta)
        .def_readwrite("eps", &OscillatorParams::eps)
        .def_readwrite("forcing", &OscillatorParams::forcing)
        .def_readwrite("steps", &OscillatorParams::steps_per_period)
        .def_property("omega", &OscillatorParams::omega, &OscillatorParams::set_omega)
        .def_property(
            "nonlinearity", [](const OscillatorParams& p) { return series_to_map(p.nonlinearity); },
            [](OscillatorParams& p, const std::map<int, std::complex<double>>& c) { p.nonlinearity = series_from_map(c); },
            "Fourier coefficients {k: f_k} of f; defaults to sin(2 pi x)")
        .def("validate", &OscillatorParams::validate);

    m.def("block_coeff", &block_coeff, py::arg("k"), py::arg("lam"));
    m.def("gaussian_transform", &gaussian_transform, py::arg("k"), py::arg("alpha"));
    m.def("smoothed_coeff", &smoothed_coeff, py::arg("k"), py::arg("forcing"));
    m.def("perturbed_coeff", &perturbed_coeff, py::arg("k"), py::arg("forcing"));
    m.def("eval_forcing", &eval_forcing, py::arg("t"), py::arg("forcing"));

    m.def("rhs", &rhs, py::arg("x"), py::arg("y"), py::arg("params"));
    m.def("poincare_map",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> xs, const OscillatorParams& params) {
              std::vector<double> values(xs.data(), xs.data() + xs.size());
              {
                  py::gil_scoped_release release;
                  const LiftedMap map(params);
                  map.apply(values);
              }
              py::array_t<double> out(xs.request().shape);
              std::copy(values.begin(), values.end(), out.mutable_data());
              return out;
          },
          py::arg("x0"), py::arg("params"), "Stroboscopic map applied elementwise");
    m.def("rotation_number", &rotation_number, py::arg("params"), py::arg("x0") = 0.0, py::arg("n_iter") = 4096,
          py::call_guard<py::gil_scoped_release>());
    m.def("entrainment_test",
          [](const OscillatorParams& params) {
              EntrainmentResult r;
              {
                  py::gil_scoped_release release;
                  r = entrainment_test(params);
              }
              py::dict d;
              d["entrained"] = r.entrained;
              d["degenerate"] = r.degenerate;
              d["witness"] = r.witness ? py::cast(*r.witness) : py::none();
              d["g_min"] = r.g_min;
              d["g_max"] = r.g_max;
              return d;
          },
          py::arg("params"));

    py::class_<ReducedField>(m, "ReducedField")
        .def_readonly("p", &ReducedField::p)
        .def_readonly("q", &ReducedField::q)
        .def_readonly("sigma", &ReducedField::sigma)
        .def_readonly("mean_drift", &ReducedField::mean_drift)
        .def_readonly("second_order_drift", &ReducedField::second_order_drift)
        .def_property_readonly("drift", &ReducedField::drift)
        .def_property_readonly("coupling", [](const ReducedField& rf) { return series_to_map(rf.coupling); })
        .def("__call__", &ReducedField::evaluate, py::arg("u"));
    m.def("seasonal_normal_form", &seasonal_normal_form, py::arg("params"));
    m.def("stationary_range", [](const ReducedField& rf) {
        const auto r = stationary_range(rf);
        return py::make_tuple(r.min, r.max);
    });
    m.def("map_to_general", [](const OscillatorParams& params) {
        const auto g = map_to_general(params);
        return py::make_tuple(g.delta, g.mu);
    });
    m.def("predicted_boundaries", [](const OscillatorParams& params, double lambda) {
        const auto b = predicted_boundaries(params, lambda);
        return py::make_tuple(b.lo, b.hi);
    }, py::arg("params"), py::arg("lam"));
    m.def("pocket_count", &pocket_count, py::arg("p"), py::arg("forcing"));

    m.def("measure_width",
          [](double lambda, const OscillatorParams& params) {
              WidthResult w;
              {
                  py::gil_scoped_release release;
                  w = measure_width(lambda, params);
              }
              if (w.empty()) return py::object(py::none());
              return py::object(py::make_tuple(w.lo, w.hi));
          },
          py::arg("lam"), py::arg("params"), "Entrained sigma-interval (lo, hi), or None");
    m.def("seasonal_range",
          [](double omega, const OscillatorParams& params) {
              std::vector<LambdaInterval> runs;
              {
                  py::gil_scoped_release release;
                  runs = seasonal_range(omega, params);
              }
              std::vector<std::pair<double, double>> out;
              for (const auto& r : runs) out.emplace_back(r.lo, r.hi);
              return out;
          },
          py::arg("omega"), py::arg("params"));

    m.def("scan",
          [](const OscillatorParams& params, const std::string& col, double col_lo, double col_hi, int col_n,
             const std::string& row, double row_lo, double row_hi, int row_n, int rotation_iters, int jobs) {
              ScanSpec spec;
              spec.columns = axis_from(col, col_lo, col_hi, col_n);
              spec.rows = axis_from(row, row_lo, row_hi, row_n);
              spec.rotation_iters = rotation_iters;
              spec.jobs = jobs;
              ScanGrid grid;
              {
                  py::gil_scoped_release release;
                  grid = scan(spec, params);
              }
              const std::vector<py::ssize_t> shape{grid.rows.n, grid.columns.n};
              py::array_t<bool> entrained(shape);
              py::array_t<bool> degenerate(shape);
              py::array_t<double> rotation(shape);
              for (std::size_t i = 0; i < grid.cells.size(); ++i) {
                  entrained.mutable_data()[i] = grid.cells[i].entrained;
                  degenerate.mutable_data()[i] = grid.cells[i].degenerate;
                  rotation.mutable_data()[i] = grid.cells[i].rotation;
              }
              py::dict d;
              d["entrained"] = entrained;
              d["degenerate"] = degenerate;
              d["rotation"] = rotation;
              return d;
          },
          py::arg("params"), py::arg("col"), py::arg("col_lo"), py::arg("col_hi"), py::arg("col_n"), py::arg("row"),
          py::arg("row_lo"), py::arg("row_hi"), py::arg("row_n"), py::arg("rotation_iters") = 0, py::arg("jobs") = 1,
          "Rows follow the second axis, columns the first");

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              int status = 0;
              {
                  py::gil_scoped_release release;
                  status = cli::run(args, out, err);
              }
              return py::make_tuple(status, py::bytes(out.str()), err.str());
          },
          py::arg("args"), "Runs the command-line front end in-process; returns (status, stdout bytes, stderr)");
}
