#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hhg/cli.hpp"
#include "hhg/config.hpp"
#include "hhg/eigensolver.hpp"
#include "hhg/errors.hpp"
#include "hhg/propagator.hpp"
#include "hhg/spectra.hpp"
#include "hhg/sweep.hpp"
#include "hhg/tls.hpp"

namespace py = pybind11;
using namespace hhg;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data()); }

py::dict series_dict(const TimeSeries& s) {
    py::dict d;
    d["t"] = to_array(s.times);
    d["field"] = to_array(s.field);
    d["norm"] = to_array(s.norm);
    d["dipole"] = to_array(s.dipole);
    d["accel"] = to_array(s.accel);
    return d;
}

Envelope make_envelope(const std::string& kind, double a, double b, double c) {
    if (kind == "gaussian") return GaussianEnvelope{a};
    if (kind == "trapezoid") return TrapezoidEnvelope{a, b, c};
    throw ValidationError("envelope must be 'trapezoid' or 'gaussian'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "hhgsim core: bound states, length-gauge TDSE, two-level model and harmonic spectra";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<RuntimeFailure>(m, "RuntimeFailure", PyExc_RuntimeError);

    py::class_<WellSpec>(m, "WellSpec")
        .def(py::init<double, double, double>(), py::arg("a") = 1.0, py::arg("b") = 1.0, py::arg("center") = 0.0)
        .def_readwrite("a", &WellSpec::a)
        .def_readwrite("b", &WellSpec::b)
        .def_readwrite("center", &WellSpec::center)
        .def("__repr__", [](const WellSpec& w) {
            std::ostringstream s;
            s << "WellSpec(a=" << w.a << ", b=" << w.b << ", center=" << w.center << ")";
            return s.str();
        });

    m.def("equally_spaced_wells", &equally_spaced_wells, py::arg("count"), py::arg("a"), py::arg("b"), py::arg("separation"));
    m.def("potential", [](const std::vector<WellSpec>& wells, py::array_t<double> x) {
        auto out = py::array_t<double>(x.size());
        auto xi = x.unchecked<1>();
        auto o = out.mutable_unchecked<1>();
        for (py::ssize_t i = 0; i < xi.shape(0); ++i) o(i) = potential_at(wells, xi(i));
        return out;
    }, py::arg("wells"), py::arg("x"));

    m.def("bound_states", [](const std::vector<WellSpec>& wells, double x_min, double x_max, std::size_t n_points,
                             std::size_t n_levels) {
        const Grid g(x_min, x_max, n_points);
        const auto set = solve_bound_states(build_potential(wells, g), n_levels);
        py::dict d;
        d["x"] = to_array(g.coordinates());
        d["energies"] = to_array(set.energies);
        py::array_t<double> states({set.size(), g.size()});
        auto s = states.mutable_unchecked<2>();
        for (std::size_t k = 0; k < set.size(); ++k)
            for (std::size_t i = 0; i < g.size(); ++i) s(k, i) = set.states[k][i];
        d["states"] = states;
        d["dipoles"] = set.dipoles;
        d["warnings"] = set.warnings;
        return d;
    }, py::arg("wells"), py::arg("x_min") = -200.0, py::arg("x_max") = 200.0, py::arg("n_points") = 8192,
       py::arg("n_levels") = 3);

    m.def("tune_well_separation", [](std::size_t count, double a, double b, double target, double x_min, double x_max,
                                     std::size_t n_points) {
        return tune_well_separation(count, a, b, target, Grid(x_min, x_max, n_points));
    }, py::arg("count"), py::arg("a"), py::arg("b"), py::arg("target_splitting"), py::arg("x_min"), py::arg("x_max"),
       py::arg("n_points"));

    m.def("propagate", [](const std::vector<WellSpec>& wells, double x_min, double x_max, std::size_t n_points,
                          double omega_d, double e_peak, const std::string& envelope, double p1, double p2, double p3,
                          double dt, bool mask, std::size_t record_stride) {
        const Grid g(x_min, x_max, n_points);
        const auto pot = build_potential(wells, g);
        const auto set = solve_bound_states(pot, 1);
        PropagationConfig cfg;
        cfg.dt = dt;
        cfg.mask_enabled = mask;
        cfg.record_stride = record_stride;
        PropagationResult res;
        {
            py::gil_scoped_release release;
            res = propagate(Wavefunction::from_real(g, set.states[0]), pot, Pulse(omega_d, e_peak, make_envelope(envelope, p1, p2, p3)), cfg);
        }
        auto d = series_dict(res.series);
        d["depleted"] = res.depleted;
        d["dt"] = res.dt;
        return d;
    }, py::arg("wells"), py::arg("x_min"), py::arg("x_max"), py::arg("n_points"), py::arg("omega_d"), py::arg("e_peak"),
       py::arg("envelope") = "trapezoid", py::arg("p1") = 1.0, py::arg("p2") = 50.0, py::arg("p3") = 1.0,
       py::arg("dt") = 0.02, py::arg("mask") = true, py::arg("record_stride") = 1);

    m.def("tls_propagate", [](double omega_a, double mu, double omega_d, double e_peak, const std::string& envelope,
                              double p1, double p2, double p3, double dt, std::size_t record_stride) {
        TlsRun run;
        {
            py::gil_scoped_release release;
            run = tls_propagate({omega_a, mu}, Pulse(omega_d, e_peak, make_envelope(envelope, p1, p2, p3)), dt, record_stride);
        }
        auto d = series_dict(run.series);
        d["excited"] = to_array(run.excited_population);
        return d;
    }, py::arg("omega_a"), py::arg("mu"), py::arg("omega_d"), py::arg("e_peak"), py::arg("envelope") = "trapezoid",
       py::arg("p1") = 1.0, py::arg("p2") = 50.0, py::arg("p3") = 1.0, py::arg("dt") = 0.02, py::arg("record_stride") = 1);

    m.def("spectrum", [](py::array_t<double, py::array::c_style | py::array::forcecast> signal, double dt, double omega_d,
                         const std::string& window, const std::string& source) {
        SpectrumOptions opts;
        opts.window = parse_window(window);
        opts.source = parse_source(source);
        const auto s = compute_spectrum(std::span<const double>(signal.data(), static_cast<std::size_t>(signal.size())), dt, omega_d, opts);
        py::dict d;
        d["omega"] = to_array(s.omega);
        d["order"] = to_array(s.order);
        d["log_d"] = to_array(s.log_d);
        return d;
    }, py::arg("signal"), py::arg("dt"), py::arg("omega_d"), py::arg("window") = "rectangular", py::arg("source") = "dipole");

    m.def("find_peaks", [](py::array_t<double, py::array::c_style | py::array::forcecast> signal, double dt, double omega_d,
                           double min_prominence_db, double order_lo, double order_hi, const std::string& window) {
        SpectrumOptions opts;
        opts.window = parse_window(window);
        const auto s = compute_spectrum(std::span<const double>(signal.data(), static_cast<std::size_t>(signal.size())), dt, omega_d, opts);
        py::list out;
        for (const auto& p : find_peaks(s, min_prominence_db, order_lo, order_hi).peaks)
            out.append(py::dict(py::arg("omega") = p.omega, py::arg("order") = p.order, py::arg("log_height") = p.log_height,
                                py::arg("prominence_db") = p.prominence_db));
        return out;
    }, py::arg("signal"), py::arg("dt"), py::arg("omega_d"), py::arg("min_prominence_db") = kDefaultProminenceDb,
       py::arg("order_lo") = 0.0, py::arg("order_hi") = 10.0, py::arg("window") = "rectangular");

    m.def("bessel_j0", py::vectorize(&bessel_j0), py::arg("x"));
    m.def("carrier_wave_sidebands", [](double omega_a, double omega_d, double rabi, int n) {
        const auto p = carrier_wave_sidebands({omega_a, 1.0}, omega_d, rabi, n);
        return py::make_tuple(p.lower, p.upper);
    }, py::arg("omega_a"), py::arg("omega_d"), py::arg("rabi"), py::arg("n"));
    m.def("odd_centered_sidebands", [](double omega_a3, double omega_d, double rabi, int n) {
        const auto p = odd_centered_sidebands({omega_a3, 1.0}, omega_d, rabi, n);
        return py::make_tuple(p.lower, p.upper);
    }, py::arg("omega_a3"), py::arg("omega_d"), py::arg("rabi"), py::arg("n"));
    m.def("linear_sidebands", [](double omega_a, double omega_d, double rabi, int n) {
        const auto p = linear_sidebands({omega_a, 1.0}, omega_d, rabi, n);
        return py::make_tuple(p.lower, p.upper);
    }, py::arg("omega_a"), py::arg("omega_d"), py::arg("rabi"), py::arg("n"));
    m.def("fit_dipole", [](const std::vector<double>& e_peak, const std::vector<double>& omega, double omega_d) {
        if (e_peak.size() != omega.size()) throw ValidationError("e_peak and omega must have equal length");
        std::vector<DipoleFitPoint> pts;
        for (std::size_t i = 0; i < e_peak.size(); ++i) pts.push_back({e_peak[i], omega[i]});
        return fit_dipole(pts, omega_d);
    }, py::arg("e_peak"), py::arg("sideband_omega"), py::arg("omega_d"));

    m.def("sweep", [](const std::string& config_text) {
        const auto cfg = parse_config(config_text);
        const auto system = resolve_system(cfg);
        const auto ref = reference_for(system);
        auto sc = resolve_sweep(cfg, ref);
        sc.system = system;
        SpectrumMap map;
        {
            py::gil_scoped_release release;
            map = run_sweep(sc);
        }
        const auto preds = predictions_for(map, resolve_predictions(cfg));
        const auto tracks = extract_tracks(map, preds, cfg.real("sweep.tolerance_order"), cfg.real("spectrum.min_prominence_db"));
        const auto report = compare_tracks(tracks, preds, cfg.real("sweep.compare_min_over_wa") * ref.omega_a,
                                           cfg.real("sweep.compare_max_over_wa") * ref.omega_a);
        py::dict d;
        d["rabi"] = to_array(map.rabi);
        d["order"] = to_array(map.order);
        py::array_t<double> log_d({map.rows(), map.cols()});
        std::copy(map.log_d.begin(), map.log_d.end(), log_d.mutable_data());
        d["log_d"] = log_d;
        d["omega_a"] = ref.omega_a;
        d["mu"] = ref.mu;
        py::dict fams;
        for (const auto& f : report.families)
            fams[py::str(f.name)] = py::dict(py::arg("rms") = f.rms, py::arg("coverage") = f.coverage);
        d["families"] = fams;
        return d;
    }, py::arg("config_text"));

    m.def("main", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli_dispatch(args, out, err);
        py::print(out.str(), py::arg("end") = "");
        if (!err.str().empty()) py::print(err.str(), py::arg("end") = "", py::arg("file") = py::module_::import("sys").attr("stderr"));
        return code;
    }, py::arg("args"));
}
