// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/config.hpp"
#include "shadowsec/dualhop.hpp"
#include "shadowsec/errors.hpp"
#include "shadowsec/extremes.hpp"
#include "shadowsec/metrics.hpp"
#include "shadowsec/montecarlo.hpp"
#include "shadowsec/sweep.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace shadowsec;

namespace {

EvalOptions make_options(const SeriesConfig& series, std::uint64_t trials, std::uint64_t seed, const std::string& mode,
                         int threads) {
    EvalOptions o;
    o.series = series;
    o.simulation.trials = trials;
    o.simulation.seed = seed;
    o.simulation.mode = sim_mode_from_string(mode);
    o.simulation.threads = threads;
    return o;
}

py::dict row_dict(const SweepRow& r) {
    py::dict d;
    d["curve"] = r.curve;
    d["variable"] = r.variable;
    d["value"] = r.value;
    d["metric"] = to_string(r.metric);
    d["method"] = to_string(r.method);
    d["result"] = r.result.value;
    d["result_positive"] = r.result.value_positive;
    d["stderr_or_tail"] = r.result.tail_estimate;
    d["terms_used"] = r.result.terms_used;
    d["error"] = r.error;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Secrecy metrics for dual-hop multicast relaying over kappa-mu shadowed fading";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<ShapeIntegralityError>(m, "ShapeIntegralityError", numerical.ptr());
    py::register_exception<BudgetExceededError>(m, "BudgetExceededError", numerical.ptr());
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.attr("INF") = kInfiniteShadowing;

    py::class_<FadingParams>(m, "FadingParams")
        .def(py::init([](double kappa, double mu, double m_, double avg_snr) {
                 FadingParams p{kappa, mu, m_, avg_snr};
                 p.validate();
                 return p;
             }),
             py::arg("kappa") = 0.0, py::arg("mu") = 1.0, py::arg("m") = kInfiniteShadowing, py::arg("avg_snr") = 1.0)
        .def_readwrite("kappa", &FadingParams::kappa)
        .def_readwrite("mu", &FadingParams::mu)
        .def_readwrite("m", &FadingParams::m)
        .def_readwrite("avg_snr", &FadingParams::avg_snr)
        .def("__repr__", [](const FadingParams& p) {
            return "FadingParams(kappa=" + format_number(p.kappa) + ", mu=" + format_number(p.mu) +
                   ", m=" + format_number(p.m) + ", avg_snr=" + format_number(p.avg_snr) + ")";
        });

    py::class_<NetworkConfig>(m, "NetworkConfig")
        .def(py::init<>())
        .def_readwrite("relays", &NetworkConfig::relays)
        .def_readwrite("receivers", &NetworkConfig::receivers)
        .def_readwrite("eavesdroppers", &NetworkConfig::eavesdroppers)
        .def_readwrite("antennas_rx", &NetworkConfig::antennas_rx)
        .def_readwrite("antennas_eve", &NetworkConfig::antennas_eve)
        .def_readwrite("hop_sp", &NetworkConfig::hop_sp)
        .def_readwrite("hop_pq", &NetworkConfig::hop_pq)
        .def_readwrite("hop_pw", &NetworkConfig::hop_pw)
        .def("validate", &NetworkConfig::validate);

    py::enum_<ExpansionStrategy>(m, "ExpansionStrategy")
        .value("grouped", ExpansionStrategy::grouped)
        .value("enumerate", ExpansionStrategy::enumerate);

    py::class_<SeriesConfig>(m, "SeriesConfig")
        .def(py::init<>())
        .def_readwrite("depth", &SeriesConfig::depth)
        .def_readwrite("prune", &SeriesConfig::prune)
        .def_readwrite("max_depth", &SeriesConfig::max_depth)
        .def_readwrite("composition_budget", &SeriesConfig::composition_budget)
        .def_readwrite("expansion", &SeriesConfig::expansion)
        .def_readwrite("inf_m_surrogate", &SeriesConfig::inf_m_surrogate);

    py::class_<MetricResult>(m, "MetricResult")
        .def_property_readonly("metric", [](const MetricResult& r) { return to_string(r.metric); })
        .def_property_readonly("method", [](const MetricResult& r) { return to_string(r.method); })
        .def_readonly("value", &MetricResult::value)
        .def_readonly("value_positive", &MetricResult::value_positive)
        .def_readonly("complement", &MetricResult::complement)
        .def_readonly("terms_used", &MetricResult::terms_used)
        .def_readonly("tail_estimate", &MetricResult::tail_estimate)
        .def_readonly("warnings", &MetricResult::warnings)
        .def("__repr__", [](const MetricResult& r) {
            return "MetricResult(" + to_string(r.metric) + ", " + to_string(r.method) + ", value=" + format_number(r.value) + ")";
        });

    m.def("db_to_linear", &db_to_linear);
    m.def("preset", &preset_params, py::arg("spec"), "Shape triple of a named special case (avg_snr = 1)");

    m.def(
        "hop_pdf",
        [](const FadingParams& p, double snr, int antennas, const SeriesConfig& s) {
            return hop_pdf(hop_coefficients(p, antennas, s), snr);
        },
        py::arg("params"), py::arg("snr"), py::arg("antennas") = 1, py::arg("series") = SeriesConfig{});
    m.def(
        "hop_ccdf",
        [](const FadingParams& p, double snr, int antennas, const SeriesConfig& s) {
            return hop_ccdf(hop_coefficients(p, antennas, s), snr);
        },
        py::arg("params"), py::arg("snr"), py::arg("antennas") = 1, py::arg("series") = SeriesConfig{});
    m.def(
        "bestrelay_cdf",
        [](const NetworkConfig& net, double snr, bool eavesdropper, const SeriesConfig& s) {
            return bestrelay_cdf(eavesdropper ? eavesdropper_link(net, s) : receiver_link(net, s), snr);
        },
        py::arg("net"), py::arg("snr"), py::arg("eavesdropper") = false, py::arg("series") = SeriesConfig{});

    m.def(
        "pnsmc",
        [](const NetworkConfig& net, const std::string& method, const SeriesConfig& s, std::uint64_t trials,
           std::uint64_t seed, const std::string& mode, int threads) {
            return pnsmc(net, method_from_string(method), make_options(s, trials, seed, mode, threads));
        },
        py::arg("net"), py::arg("method") = "quadrature", py::arg("series") = SeriesConfig{},
        py::arg("trials") = 1'000'000, py::arg("seed") = 20240601, py::arg("mode") = "analysis_consistent",
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
    m.def(
        "sopm",
        [](const NetworkConfig& net, double rate, const std::string& method, const SeriesConfig& s, std::uint64_t trials,
           std::uint64_t seed, const std::string& mode, int threads) {
            return sopm(net, rate, method_from_string(method), make_options(s, trials, seed, mode, threads));
        },
        py::arg("net"), py::arg("target_rate"), py::arg("method") = "quadrature", py::arg("series") = SeriesConfig{},
        py::arg("trials") = 1'000'000, py::arg("seed") = 20240601, py::arg("mode") = "analysis_consistent",
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
    m.def(
        "esmc",
        [](const NetworkConfig& net, const std::string& method, const SeriesConfig& s, std::uint64_t trials,
           std::uint64_t seed, const std::string& mode, int threads) {
            return esmc(net, method_from_string(method), make_options(s, trials, seed, mode, threads));
        },
        py::arg("net"), py::arg("method") = "quadrature", py::arg("series") = SeriesConfig{},
        py::arg("trials") = 1'000'000, py::arg("seed") = 20240601, py::arg("mode") = "analysis_consistent",
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());

    m.def(
        "sample_hop",
        [](const FadingParams& p, std::uint64_t count, int antennas, std::uint64_t seed, int threads) {
            return sample_hop(p, antennas, count, seed, threads);
        },
        py::arg("params"), py::arg("count"), py::arg("antennas") = 1, py::arg("seed") = 1, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "run_sweep",
        [](const std::string& path, int threads) {
            const ScenarioConfig cfg = load_config(path);
            RunOptions o;
            o.threads = threads;
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = run_sweep(cfg, o);
            }
            py::list out;
            for (const auto& r : rows)
                out.append(row_dict(r));
            return out;
        },
        py::arg("config_path"), py::arg("threads") = 1, "Run the sweep of a JSON config; one dict per CSV row");
}
