#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diffsimo/channel.hpp"
#include "diffsimo/constellation.hpp"
#include "diffsimo/errors.hpp"
#include "diffsimo/harness.hpp"
#include "diffsimo/selftest.hpp"
#include "diffsimo/sep_analysis.hpp"
#include "diffsimo/specfun.hpp"

namespace py = pybind11;
using namespace diffsimo;

namespace {

PointConfig make_point(const std::string& method, const std::string& osc, int antennas, double snr_db, double var_tx,
                       double var_rx, int qam, long symbols, int trials, std::optional<int> pilot_period,
                       std::uint64_t seed, bool hold_receive_snr) {
    PointConfig p;
    p.method = parse_method(method);
    p.osc_mode = parse_osc_mode(osc);
    p.antennas = antennas;
    p.snr_db = snr_db;
    p.var_tx = var_tx;
    p.var_rx = var_rx;
    p.qam = qam;
    p.symbols_per_trial = symbols;
    p.trials = trials;
    p.pilot_period = pilot_period;
    p.seed = seed;
    p.hold_receive_snr = hold_receive_snr;
    return p;
}

RunOptions make_options(int workers, bool simulate, bool noise, const std::string& phase_average,
                        const std::string& past_amplitude) {
    RunOptions o;
    o.workers = workers;
    o.simulate = simulate;
    o.noise = noise ? NoiseMode::kOn : NoiseMode::kOff;
    o.averaging = parse_phase_averaging(phase_average);
    o.past = parse_past_amplitude(past_amplitude);
    return o;
}

ChannelRealization channel_from(const std::vector<std::complex<double>>& h) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(h.size()));
    for (std::size_t i = 0; i < h.size(); ++i) v[static_cast<Eigen::Index>(i)] = h[i];
    return fixed_channel(v);
}

}  // namespace

PYBIND11_MODULE(_diffsimo, m) {
    m.doc() = "Differential two-stage detection over SIMO Wiener phase-noise channels";
    m.attr("__version__") = DIFFSIMO_VERSION;
    m.attr("CSV_HEADER") = kCsvHeader;

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<LookupError>(m, "SymbolLookupError", PyExc_KeyError);

    m.def("log_bessel_i", &log_bessel_i, py::arg("nu"), py::arg("x"));
    m.def("log_bessel_i_scaled", &log_bessel_i_scaled, py::arg("nu"), py::arg("x"));
    m.def("q_function", &q_function, py::arg("x"));
    m.def("log_ncx2_pdf", &log_ncx2_pdf, py::arg("t"), py::arg("half_dof"), py::arg("noncentrality"));

    m.def(
        "qam_points",
        [](int order, double avg_energy) { return build_qam(order, avg_energy).points(); },
        py::arg("order"), py::arg("avg_energy") = 1.0);
    m.def(
        "qam_classes",
        [](int order, double avg_energy) {
            const Constellation constellation = build_qam(order, avg_energy);
            py::list out;
            for (const AmplitudeClass& c : constellation.classes()) {
                py::dict d;
                d["amplitude"] = c.amplitude;
                d["prior"] = c.prior;
                d["phases"] = c.phases;
                d["point_indices"] = c.point_indices;
                out.append(d);
            }
            return out;
        },
        py::arg("order"), py::arg("avg_energy") = 1.0);
    m.def("symbol_energy_for_snr", &symbol_energy_for_snr, py::arg("snr_db"), py::arg("antennas"),
          py::arg("hold_receive_snr") = false);

    m.def(
        "union_bound_sep",
        [](int qam, double avg_energy, double var_tx, double var_rx, const std::string& osc,
           const std::vector<std::complex<double>>& h, const std::string& past) {
            return union_bound_sep(build_qam(qam, avg_energy), PhaseNoiseConfig{var_tx, var_rx, parse_osc_mode(osc)},
                                   channel_from(h), parse_past_amplitude(past));
        },
        py::arg("qam"), py::arg("avg_energy"), py::arg("var_tx"), py::arg("var_rx"), py::arg("osc"), py::arg("h"),
        py::arg("past_amplitude") = "energy");
    m.def(
        "error_floor",
        [](int qam, double var_tx, double var_rx, const std::string& osc) {
            return error_floor(build_qam(qam, 1.0), PhaseNoiseConfig{var_tx, var_rx, parse_osc_mode(osc)});
        },
        py::arg("qam"), py::arg("var_tx"), py::arg("var_rx"), py::arg("osc"));
    m.def(
        "estimate_sep",
        [](std::size_t errors, std::size_t scored) {
            const SepEstimate e = estimate_sep(errors, scored);
            return py::make_tuple(e.sep, e.ci_low, e.ci_high);
        },
        py::arg("errors"), py::arg("scored"));

    // Records come back as the JSON text the CLI writes; the Python package parses it.
    m.def(
        "_run_sweep_json",
        [](const std::string& method, const std::string& osc, const std::vector<int>& antennas,
           const std::vector<double>& snr_db, const std::vector<double>& var_tx, const std::vector<double>& var_rx,
           int qam, long symbols, int trials, std::optional<int> pilot_period, std::uint64_t seed,
           bool hold_receive_snr, int workers, bool simulate, bool noise, const std::string& phase_average,
           const std::string& past_amplitude) {
            SweepConfig sweep;
            sweep.base = make_point(method, osc, antennas.empty() ? 1 : antennas.front(),
                                    snr_db.empty() ? 0.0 : snr_db.front(), var_tx.empty() ? 0.0 : var_tx.front(),
                                    var_rx.empty() ? 0.0 : var_rx.front(), qam, symbols, trials, pilot_period, seed,
                                    hold_receive_snr);
            sweep.antennas = antennas;
            sweep.snr_db = snr_db;
            sweep.var_tx = var_tx;
            sweep.var_rx = var_rx;
            const RunOptions options = make_options(workers, simulate, noise, phase_average, past_amplitude);
            std::vector<ResultRecord> records;
            {
                py::gil_scoped_release release;
                records = run_sweep(sweep, options);
            }
            return std::make_pair(to_json(records), [&] {
                std::string csv;
                for (const ResultRecord& r : records) csv += csv_row(r) + "\n";
                return csv;
            }());
        },
        py::arg("method"), py::arg("osc"), py::arg("antennas"), py::arg("snr_db"), py::arg("var_tx"),
        py::arg("var_rx"), py::arg("qam"), py::arg("symbols"), py::arg("trials"), py::arg("pilot_period"),
        py::arg("seed"), py::arg("hold_receive_snr"), py::arg("workers"), py::arg("simulate"), py::arg("noise"),
        py::arg("phase_average"), py::arg("past_amplitude"));

    m.def(
        "selftest",
        [](std::size_t gof_samples, std::size_t wiener_steps, std::uint64_t seed) {
            SelfTestOptions o;
            o.gof_samples = gof_samples;
            o.wiener_steps = wiener_steps;
            o.seed = seed;
            SelfTestReport rep;
            {
                py::gil_scoped_release release;
                rep = run_selftest(o);
            }
            py::list checks;
            for (const auto& c : rep.checks) checks.append(py::make_tuple(c.name, c.passed, c.detail));
            py::dict d;
            d["passed"] = rep.passed();
            d["seconds"] = rep.seconds;
            d["checks"] = checks;
            return d;
        },
        py::arg("gof_samples") = SelfTestOptions{}.gof_samples, py::arg("wiener_steps") = SelfTestOptions{}.wiener_steps,
        py::arg("seed") = SelfTestOptions{}.seed);
}
