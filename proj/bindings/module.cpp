#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dhtrng/analytic.hpp"
#include "dhtrng/bitstream.hpp"
#include "dhtrng/circuit.hpp"
#include "dhtrng/errors.hpp"
#include "dhtrng/noise.hpp"
#include "dhtrng/stats.hpp"

namespace py = pybind11;
using namespace dhtrng;

PYBIND11_MODULE(_dhtrng, m) {
    m.doc() = "Gate-level DH-TRNG simulator with statistical evaluation";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SimulationFault>(m, "SimulationFault", PyExc_RuntimeError);
    py::register_exception<InsufficientData>(m, "InsufficientData", PyExc_ValueError);

    py::class_<NoiseParams>(m, "NoiseParams")
        .def(py::init<>())
        .def_readwrite("delay_mean", &NoiseParams::delay_mean)
        .def_readwrite("jitter_sigma", &NoiseParams::jitter_sigma)
        .def_readwrite("meta_sigma", &NoiseParams::meta_sigma)
        .def_readwrite("hold_bias", &NoiseParams::hold_bias);

    py::class_<PvtCondition>(m, "PvtCondition")
        .def(py::init<>())
        .def_readwrite("temperature_c", &PvtCondition::temperature_c)
        .def_readwrite("voltage_v", &PvtCondition::voltage_v);

    py::class_<CircuitConfig>(m, "CircuitConfig")
        .def(py::init<>())
        .def_readwrite("coupling_sets", &CircuitConfig::coupling_sets)
        .def_readwrite("edge_rings_per_set", &CircuitConfig::edge_rings_per_set)
        .def_readwrite("central_rings_per_set", &CircuitConfig::central_rings_per_set)
        .def_readwrite("central_ring_xor_stages", &CircuitConfig::central_ring_xor_stages)
        .def_readwrite("entropy_units_per_set", &CircuitConfig::entropy_units_per_set)
        .def_readwrite("ro1_stages", &CircuitConfig::ro1_stages)
        .def_readwrite("edge_ring_stages", &CircuitConfig::edge_ring_stages)
        .def_readwrite("sample_clock_hz", &CircuitConfig::sample_clock_hz)
        .def_readwrite("noise", &CircuitConfig::noise)
        .def_readwrite("pvt", &CircuitConfig::pvt)
        .def_readwrite("feedback_enabled", &CircuitConfig::feedback_enabled)
        .def_readwrite("coupling_enabled", &CircuitConfig::coupling_enabled)
        .def_readwrite("process_spread", &CircuitConfig::process_spread)
        .def_readwrite("warmup_edges", &CircuitConfig::warmup_edges)
        .def_property(
            "seed", [](const CircuitConfig& c) { return c.seed.seed; },
            [](CircuitConfig& c, uint64_t s) { c.seed.seed = s; })
        .def("total_sampled_rings", &CircuitConfig::total_sampled_rings);

    py::class_<BitStream>(m, "BitStream")
        .def(py::init<>())
        .def_static("from_string", &BitStream::from_string)
        .def("__len__", &BitStream::size)
        .def("__getitem__",
             [](const BitStream& s, size_t i) {
                 if (i >= s.size()) throw py::index_error();
                 return s[i];
             })
        .def("to_string", &BitStream::to_string)
        .def("to_bytes",
             [](const BitStream& s) {
                 return py::bytes(reinterpret_cast<const char*>(s.bytes().data()),
                                  s.bytes().size());
             })
        .def("popcount", &BitStream::popcount)
        .def("write_bin", &BitStream::write_bin)
        .def("write_txt", &BitStream::write_txt)
        .def_static("read_file", &BitStream::read_file);

    m.def("generate", &generate, py::arg("config"), py::arg("n_bits"));
    m.def("generate_fast", &generate_fast, py::arg("config"), py::arg("n_bits"));
    m.def("q_function", &q_function);

    py::class_<stats::TestReport>(m, "TestReport")
        .def_readonly("test_name", &stats::TestReport::test_name)
        .def_readonly("statistics", &stats::TestReport::statistics)
        .def_property_readonly("p_value",
                               [](const stats::TestReport& r) {
                                   return r.p_value ? py::cast(*r.p_value) : py::none().cast<py::object>();
                               })
        .def_property_readonly("verdict",
                               [](const stats::TestReport& r) {
                                   switch (r.verdict) {
                                       case stats::Verdict::pass: return "pass";
                                       case stats::Verdict::fail: return "fail";
                                       default: return "not_applicable";
                                   }
                               })
        .def_readonly("sample_bits", &stats::TestReport::sample_bits)
        .def_readonly("note", &stats::TestReport::note)
        .def("passed", &stats::TestReport::passed);

    py::class_<stats::MinEntropyEstimate>(m, "MinEntropyEstimate")
        .def_readonly("estimator", &stats::MinEntropyEstimate::estimator)
        .def_readonly("p_max", &stats::MinEntropyEstimate::p_max)
        .def_readonly("h_min", &stats::MinEntropyEstimate::h_min)
        .def_readonly("confidence_z", &stats::MinEntropyEstimate::confidence_z)
        .def_readonly("sample_bits", &stats::MinEntropyEstimate::sample_bits);

    m.def("monobit_t1", &stats::monobit_t1);
    m.def("poker_t2", &stats::poker_t2);
    m.def("runs_t3", &stats::runs_t3);
    m.def("longrun_t4", &stats::longrun_t4);
    m.def("autocorr_t5", &stats::autocorr_t5);
    m.def("disjointness_t0", &stats::disjointness_t0);
    m.def("nist_frequency", &stats::nist_frequency);
    m.def("nist_block_frequency", &stats::nist_block_frequency, py::arg("stream"),
          py::arg("block_len") = 128);
    m.def("nist_cusum", &stats::nist_cusum);
    m.def("nist_runs", &stats::nist_runs);
    m.def("nist_longest_run", &stats::nist_longest_run);
    m.def("nist_serial", &stats::nist_serial, py::arg("stream"), py::arg("m") = 2);
    m.def("nist_approx_entropy", &stats::nist_approx_entropy, py::arg("stream"),
          py::arg("m") = 2);
    m.def("mcv_estimate", &stats::mcv_estimate);
    m.def("markov_estimate", &stats::markov_estimate);
    m.def("collision_estimate", &stats::collision_estimate);
    m.def(
        "acf",
        [](const BitStream& s, int max_lag) { return stats::acf(s, max_lag).coefficients; },
        py::arg("stream"), py::arg("max_lag") = 100);
    m.def(
        "restart_test",
        [](const CircuitConfig& config, int trials, int prefix_bits, bool identical_seeds) {
            std::vector<uint64_t> prefixes;
            auto report = stats::restart_test(config, trials, prefix_bits, identical_seeds,
                                              &prefixes);
            return py::make_tuple(report, prefixes);
        },
        py::arg("config"), py::arg("trials") = 6, py::arg("prefix_bits") = 32,
        py::arg("identical_seeds") = false);

    m.def("xor2_expectation", &analytic::xor2_expectation);
    m.def("xor_n_expectation",
          [](const std::vector<double>& mus) { return analytic::xor_n_expectation(mus); });
    m.def("bias_percent", &analytic::bias_percent);
}
