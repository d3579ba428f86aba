#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wscap/capacity.hpp"
#include "wscap/channels.hpp"
#include "wscap/fisher.hpp"
#include "wscap/oracle.hpp"

namespace py = pybind11;
using namespace wscap;

PYBIND11_MODULE(_core, m) {
    m.doc() = "weak-signal mutual information and capacity approximations";

    py::enum_<CapacityMethod>(m, "CapacityMethod")
        .value("high", CapacityMethod::high)
        .value("bin", CapacityMethod::bin)
        .value("low", CapacityMethod::low)
        .value("exact_awgn", CapacityMethod::exact_awgn)
        .value("waterfill", CapacityMethod::waterfill)
        .value("waterfill_small_p", CapacityMethod::waterfill_small_p);

    py::class_<CapacityDiagnostics>(m, "CapacityDiagnostics")
        .def_readonly("psd_violation", &CapacityDiagnostics::psd_violation)
        .def_readonly("ill_conditioned", &CapacityDiagnostics::ill_conditioned)
        .def_readonly("quadrature_warning", &CapacityDiagnostics::quadrature_warning);

    py::class_<CapacityEstimate>(m, "CapacityEstimate")
        .def_readonly("nats", &CapacityEstimate::nats)
        .def_readonly("method", &CapacityEstimate::method)
        .def_readonly("per_channel_use", &CapacityEstimate::per_channel_use)
        .def_readonly("diagnostics", &CapacityEstimate::diagnostics)
        .def("bits", &CapacityEstimate::bits);

    py::class_<ScalarChannel>(m, "ScalarChannel")
        .def("log_density", &ScalarChannel::log_density)
        .def("density", &ScalarChannel::density)
        .def("score", &ScalarChannel::score);

    py::class_<AwgnChannel, ScalarChannel>(m, "AwgnChannel").def(py::init<double>());
    py::class_<GammaChannel, ScalarChannel>(m, "GammaChannel").def(py::init<double>());

    py::class_<FisherMatrix>(m, "FisherMatrix")
        .def_readonly("condition_estimate", &FisherMatrix::condition_estimate)
        .def("size", &FisherMatrix::size)
        .def("entry",
             [](const FisherMatrix& j, std::size_t i, std::size_t k) { return j.matrix(i, k); });

    py::class_<NoiseCovariance>(m, "NoiseCovariance")
        .def_readonly("rho", &NoiseCovariance::rho)
        .def("size", &NoiseCovariance::size)
        .def("entry",
             [](const NoiseCovariance& c, std::size_t i, std::size_t k) { return c.matrix(i, k); });

    py::class_<InputCovariance>(m, "InputCovariance")
        .def_readonly("sigma2", &InputCovariance::sigma2)
        .def_readonly("psd_violation", &InputCovariance::psd_violation)
        .def("entry",
             [](const InputCovariance& c, std::size_t i, std::size_t k) { return c.matrix(i, k); });

    py::class_<WaterFilling>(m, "WaterFilling")
        .def_readonly("allocations", &WaterFilling::allocations)
        .def_readonly("level", &WaterFilling::level);

    py::class_<ColoredCapacity>(m, "ColoredCapacity")
        .def_readonly("estimate", &ColoredCapacity::estimate)
        .def_readonly("water", &ColoredCapacity::water);

    m.def("ar1_covariance", &ar1_covariance, py::arg("rho"), py::arg("n"));
    m.def("ma1_covariance", &ma1_covariance, py::arg("rho"), py::arg("n"));
    m.def("rho_to_gamma", &rho_to_gamma, py::arg("rho"));
    m.def("load_covariance_csv", &load_covariance_csv, py::arg("path"));

    m.def("fisher_scalar",
          [](const ScalarChannel& ch, double theta0, double tol) {
              return fisher_scalar(ch, theta0, tol);
          },
          py::arg("channel"), py::arg("theta0"), py::arg("tol") = 1e-10);
    m.def("ar1_fisher", &ar1_fisher, py::arg("rho"), py::arg("n"));
    m.def("ma1_fisher", &ma1_fisher, py::arg("rho"), py::arg("n"));

    m.def("mi_weak", &mi_weak, py::arg("fisher"), py::arg("input_covariance"));
    m.def("optimal_covariance", &optimal_covariance, py::arg("fisher"), py::arg("sigma2"));
    m.def("c_high_memoryless", &c_high_memoryless, py::arg("fisher"), py::arg("delta_theta"));
    m.def("c_high_memory", &c_high_memory, py::arg("fisher"), py::arg("delta_theta"));
    m.def("ar1_mi_per_use", &ar1_mi_per_use, py::arg("p"), py::arg("rho"), py::arg("c"));
    m.def("ar1_capacity", &ar1_capacity, py::arg("p"), py::arg("rho"));
    m.def("c_bin", &c_bin, py::arg("channel"), py::arg("theta0"), py::arg("delta_theta"));
    m.def("c_low", &c_low, py::arg("channel"), py::arg("theta_lo"), py::arg("theta_hi"));
    m.def("shannon_awgn", &shannon_awgn, py::arg("p"), py::arg("noise_power"));
    m.def("water_filling", &water_filling, py::arg("noise_levels"), py::arg("p"));
    m.def("exact_colored_capacity", &exact_colored_capacity, py::arg("covariance"), py::arg("p"));
    m.def("waterfill_smallP", &waterfill_smallP, py::arg("covariance"), py::arg("p"));
    m.def("redundancy_mi", &redundancy_mi, py::arg("channel"), py::arg("theta0"),
          py::arg("delta_theta"));
    m.def("exact_awgn_amplitude_capacity", &exact_awgn_amplitude_capacity,
          py::arg("delta_theta"), py::arg("m") = 65, py::arg("k") = 800);
    m.def("mi_discrete_input", &mi_discrete_input, py::arg("channel"), py::arg("support"),
          py::arg("weights"));
}
