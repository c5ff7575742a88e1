#include <complex>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swarmdoppler/analytic.hpp"
#include "swarmdoppler/config.hpp"
#include "swarmdoppler/errors.hpp"
#include "swarmdoppler/estimate.hpp"
#include "swarmdoppler/io.hpp"
#include "swarmdoppler/model.hpp"
#include "swarmdoppler/simulate.hpp"
#include "swarmdoppler/special.hpp"

namespace py = pybind11;
using namespace swarmdoppler;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const RealArray& a) { return {a.data(), static_cast<std::size_t>(a.size())}; }

RealArray to_array(const std::vector<double>& v) {
    RealArray out(static_cast<py::ssize_t>(v.size()));
    std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
    return out;
}

ComplexArray to_array(const std::vector<std::complex<double>>& v, py::ssize_t rows, py::ssize_t cols) {
    ComplexArray out({rows, cols});
    std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(std::complex<double>));
    return out;
}

EstimatorMode parse_mode(const std::string& mode) {
    if (mode == "single_reference") return EstimatorMode::single_reference;
    if (mode == "time_averaged") return EstimatorMode::time_averaged;
    throw py::value_error("mode must be \"single_reference\" or \"time_averaged\"");
}

FourierConvention parse_convention(const std::string& c) {
    if (c == "angular") return FourierConvention::angular;
    if (c == "angular_unitary") return FourierConvention::angular_unitary;
    throw py::value_error("convention must be \"angular\" or \"angular_unitary\"");
}

py::dict curve_dict(const Curve& c) {
    py::dict d;
    d["x"] = to_array(c.x);
    d["y"] = to_array(c.y, 1, static_cast<py::ssize_t>(c.y.size())).reshape({static_cast<py::ssize_t>(c.y.size())});
    d["axis"] = to_string(c.axis);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Drone-swarm micro-Doppler second-order statistics, simulator and estimators";

    auto base = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
    (void)base;

    py::class_<SwarmParams>(m, "SwarmParams")
        .def(py::init([](int n_drones, int n_rotors, int n_blades, double blade_length, double wavelength,
                         double mean_speed, double speed_variance, double gain_magnitude) {
                 SwarmParams p{n_drones, n_rotors, n_blades, blade_length, wavelength,
                               mean_speed, speed_variance, gain_magnitude};
                 p.validate();
                 return p;
             }),
             py::kw_only(), py::arg("n_drones"), py::arg("n_rotors"), py::arg("n_blades"), py::arg("blade_length"),
             py::arg("wavelength"), py::arg("mean_speed"), py::arg("speed_variance"),
             py::arg("gain_magnitude") = 1.0)
        .def_readwrite("n_drones", &SwarmParams::n_drones)
        .def_readwrite("n_rotors", &SwarmParams::n_rotors)
        .def_readwrite("n_blades", &SwarmParams::n_blades)
        .def_readwrite("blade_length", &SwarmParams::blade_length)
        .def_readwrite("wavelength", &SwarmParams::wavelength)
        .def_readwrite("mean_speed", &SwarmParams::mean_speed)
        .def_readwrite("speed_variance", &SwarmParams::speed_variance)
        .def_readwrite("gain_magnitude", &SwarmParams::gain_magnitude)
        .def_property_readonly("l", [](const SwarmParams& p) { return derive(p).l; })
        .def("validate", &SwarmParams::validate)
        .def("warnings", [](const SwarmParams& p) { return regime_warnings(p); })
        .def("digest", [](const SwarmParams& p) { return params_digest(p); })
        .def(py::self == py::self)
        .def("__repr__", [](const SwarmParams& p) { return "SwarmParams(" + params_to_json(p).dump() + ")"; });

    py::class_<SamplingGrid>(m, "SamplingGrid")
        .def(py::init([](double dt, std::int64_t n_samples, double t_start) {
                 SamplingGrid g{t_start, dt, n_samples};
                 g.validate();
                 return g;
             }),
             py::kw_only(), py::arg("dt"), py::arg("n_samples"), py::arg("t_start") = 0.0)
        .def_readwrite("t_start", &SamplingGrid::t_start)
        .def_readwrite("dt", &SamplingGrid::dt)
        .def_readwrite("n_samples", &SamplingGrid::n_samples)
        .def("times", [](const SamplingGrid& g) {
            std::vector<double> t(static_cast<std::size_t>(g.n_samples));
            for (std::int64_t k = 0; k < g.n_samples; ++k) t[static_cast<std::size_t>(k)] = g.time(k);
            return to_array(t);
        })
        .def(py::self == py::self)
        .def("__repr__", [](const SamplingGrid& g) { return "SamplingGrid(" + grid_to_json(g).dump() + ")"; });

    m.def("mavic_like", &mavic_like, "Quadcopter-like reference parameter set");
    m.def("default_grid", &default_grid, py::arg("params"), py::arg("oversample") = 1.0,
          py::arg("n_samples") = kDefaultSampleCount, "Grid sampling the PSD support at `oversample` x Nyquist");
    m.def("satisfies_nyquist", &satisfies_nyquist, py::arg("params"), py::arg("grid"));

    m.def("bessel_j", &special::bessel_j, py::arg("n"), py::arg("x"), "Integer-order Bessel function of the first kind");
    m.def("bessel_j_sequence", [](int max_order, double x) { return to_array(special::bessel_j_sequence(max_order, x)); },
          py::arg("max_order"), py::arg("x"), "J_0(x) .. J_max_order(x)");

    m.def("truncation_index", &truncation_index, py::arg("l"), py::arg("n_blades"));
    m.def("series_coefficients",
          [](double l, int n_blades, int count) { return to_array(series_coefficients(l, n_blades, count)); },
          py::arg("l"), py::arg("n_blades"), py::arg("count"), "c_1 .. c_count of the autocorrelation series");
    m.def(
        "coefficient_power_fraction",
        [](double l, int n_blades, double fraction, const std::string& ordering) {
            if (ordering != "magnitude" && ordering != "index")
                throw py::value_error("ordering must be \"magnitude\" or \"index\"");
            return coefficient_power_fraction(
                l, n_blades, fraction,
                ordering == "magnitude" ? CoefficientOrdering::by_magnitude : CoefficientOrdering::by_index);
        },
        py::arg("l"), py::arg("n_blades"), py::arg("fraction"), py::arg("ordering") = "magnitude");

    m.def(
        "acf",
        [](const SwarmParams& p, const RealArray& tau) { return to_array(acf_eval(build_acf(p), view(tau))); },
        py::arg("params"), py::arg("tau"), "Closed-form autocorrelation at the lags `tau` (s)");
    m.def(
        "acf_deterministic",
        [](const SwarmParams& p, const RealArray& tau) {
            std::vector<double> out;
            out.reserve(static_cast<std::size_t>(tau.size()));
            for (double t : view(tau)) out.push_back(acf_deterministic_eval(p, t));
            return to_array(out);
        },
        py::arg("params"), py::arg("tau"), "Finite form of the autocorrelation for zero speed spread");
    m.def("acf_summary", [](const SwarmParams& p) {
        const auto a = build_acf(p);
        py::dict d;
        d["R0"] = acf_eval(a, 0.0);
        d["dc_level"] = a.dc_level;
        d["truncation_index"] = a.truncation;
        d["n_terms"] = a.n_terms;
        d["c0"] = a.c0;
        d["coefficients"] = to_array(a.coefficients);
        d["mainlobe_width"] = mainlobe_width(p);
        d["first_null"] = acf_first_null(p);
        return d;
    });
    m.def("mainlobe_width", &mainlobe_width);
    m.def("acf_first_null", &acf_first_null);

    m.def("psd_support", [](const SwarmParams& p) {
        const auto s = psd_support(p);
        return py::make_tuple(s.lower, s.upper);
    });
    m.def(
        "psd",
        [](const SwarmParams& p, const RealArray& f, const std::string& convention) {
            const auto model = build_psd(p, parse_convention(convention));
            std::vector<double> out;
            out.reserve(static_cast<std::size_t>(f.size()));
            for (double v : view(f)) out.push_back(psd_eval(model, v));
            return to_array(out);
        },
        py::arg("params"), py::arg("f"), py::arg("convention") = "angular",
        "Continuous part of the PSD at angular frequencies `f` (rad/s); requires speed_variance > 0");
    m.def(
        "psd_kernels",
        [](const SwarmParams& p, const std::string& convention) {
            const auto model = build_psd(p, parse_convention(convention));
            std::vector<double> c, s, w;
            for (const auto& k : model.kernels) {
                c.push_back(k.center);
                s.push_back(k.std);
                w.push_back(k.mass);
            }
            py::dict d;
            d["center"] = to_array(c);
            d["std"] = to_array(s);
            d["mass"] = to_array(w);
            d["dc_weight"] = model.dc_weight;
            return d;
        },
        py::arg("params"), py::arg("convention") = "angular");
    m.def(
        "psd_lines",
        [](const SwarmParams& p, const std::string& convention) {
            const auto lines = psd_line_spectrum(p, parse_convention(convention));
            std::vector<double> f, w;
            for (const auto& l : lines) {
                f.push_back(l.frequency);
                w.push_back(l.weight);
            }
            return py::make_tuple(to_array(f), to_array(w));
        },
        py::arg("params"), py::arg("convention") = "angular", "Line spectrum (frequencies, weights) for zero speed spread");

    m.def(
        "simulate",
        [](const SwarmParams& p, const SamplingGrid& g, std::int64_t n, std::uint64_t seed, unsigned workers) {
            std::vector<std::complex<double>> rows;
            {
                py::gil_scoped_release release;
                rows = simulate_rows(p, g, 0, n, seed, workers);
            }
            return to_array(rows, n, g.n_samples);
        },
        py::arg("params"), py::arg("grid"), py::arg("n_realizations"), py::arg("seed"), py::arg("workers") = 0,
        "Ensemble of shape (n_realizations, n_samples); identical for every worker count");
    m.def(
        "estimate_acf",
        [](const SwarmParams& p, const SamplingGrid& g, std::int64_t n, std::uint64_t seed, const std::string& mode,
           std::int64_t t_ref_index, std::int64_t max_lag, unsigned workers) {
            AcfEstimatorOptions o;
            o.mode = parse_mode(mode);
            o.t_ref_index = t_ref_index;
            o.max_lag = max_lag;
            Curve c;
            {
                py::gil_scoped_release release;
                c = estimate_acf_streaming(p, g, n, seed, o, workers);
            }
            return curve_dict(c);
        },
        py::arg("params"), py::arg("grid"), py::arg("n_realizations"), py::arg("seed"),
        py::arg("mode") = "single_reference", py::arg("t_ref_index") = 0, py::arg("max_lag") = -1,
        py::arg("workers") = 0, "Monte Carlo ACF estimate without storing the ensemble");

    m.def(
        "load_config",
        [](const std::string& text) {
            const auto cfg = load_config(text);
            py::dict d;
            d["params"] = cfg.params;
            d["grid"] = cfg.grid;
            d["allow_undersampled"] = cfg.allow_undersampled;
            d["n_realizations"] = cfg.estimator.n_realizations;
            d["seed"] = cfg.estimator.seed;
            d["t_ref_index"] = cfg.estimator.t_ref_index;
            d["mode"] = to_string(cfg.estimator.mode);
            return d;
        },
        py::arg("text"), "Parse a JSON run configuration");

    m.def(
        "read_ensemble",
        [](const std::string& path) {
            const auto e = read_ensemble(std::filesystem::path(path));
            py::dict d;
            d["params"] = e.params;
            d["grid"] = e.grid;
            d["seed"] = e.master_seed;
            d["signals"] = to_array(e.signals, e.n_realizations, e.grid.n_samples);
            return d;
        },
        py::arg("path"));
    m.def(
        "write_ensemble",
        [](const std::string& path, const SwarmParams& p, const SamplingGrid& g, std::uint64_t seed,
           const ComplexArray& signals, const std::string& precision) {
            if (signals.ndim() != 2 || signals.shape(1) != g.n_samples)
                throw py::value_error("signals must have shape (n_realizations, grid.n_samples)");
            if (precision != "complex64" && precision != "complex128")
                throw py::value_error("precision must be \"complex64\" or \"complex128\"");
            const auto type = precision == "complex64" ? SampleType::complex64 : SampleType::complex128;
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::ios_base::failure("cannot open " + path);
            write_ensemble_prefix(out, p, g, seed, signals.shape(0), type);
            write_ensemble_rows(out, {signals.data(), static_cast<std::size_t>(signals.size())}, type);
            out.flush();
            if (!out) throw std::ios_base::failure("write failed: " + path);
        },
        py::arg("path"), py::arg("params"), py::arg("grid"), py::arg("seed"), py::arg("signals"),
        py::arg("precision") = "complex128");
}
