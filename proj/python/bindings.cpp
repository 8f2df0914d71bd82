#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smbcs/config.hpp"
#include "smbcs/errors.hpp"
#include "smbcs/interferometer.hpp"
#include "smbcs/io.hpp"
#include "smbcs/permanent.hpp"
#include "smbcs/sampler.hpp"
#include "smbcs/scattershot.hpp"
#include "smbcs/sources.hpp"

namespace py = pybind11;
using namespace smbcs;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const ComplexArray& a) {
  if (a.ndim() != 2) throw DomainError("expected a 2-D array");
  ComplexMatrix m(a.shape(0), a.shape(1));
  auto view = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = view(i, j);
  return m;
}

ComplexArray to_array(const ComplexMatrix& m) {
  ComplexArray out({m.rows(), m.cols()});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) view(i, j) = m(i, j);
  return out;
}

SpdcSource make_source(double gamma, std::size_t k, bool feed_forward, bool strict) {
  return SpdcSource{gamma, k, Flavor::RFM, feed_forward, strict};
}

ExperimentConfig parse_config(const std::string& text) {
  try {
    return config_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
}

Interferometer interferometer_for(const ExperimentConfig& c) {
  return c.unitary_file.empty() ? haar_random(c.port_count(), c.seed) : load_unitary(c.unitary_file);
}

// One JSON line per outcome of the exact distribution for fixed inputs.
std::string distribution_json(const std::string& config_text,
                              std::optional<std::vector<std::size_t>> modes) {
  const auto c = parse_config(config_text);
  const auto grid = c.inner_mode_grid();
  InputConfiguration inputs;
  for (std::size_t s = 0; s < c.photons; ++s) {
    const std::size_t index = modes ? modes->at(s) : s % grid.size();
    inputs.push_back({s, inner_mode(c.source.flavor, grid, index)});
  }
  const auto domain = detection_domain(c.source.flavor);
  const auto d = brute_force_distribution(interferometer_for(c), inputs, domain,
                                          c.sampler_config().bin_width(c.source.flavor),
                                          c.brute_force_limits, c.probability_options());
  const auto hash = config_hash(c);
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < d.entries.size(); ++i) {
    out.push_back(outcome_record(d.outcome(i), d.entries[i].probability,
                                 d.entries[i].perm_modulus, c.seed, hash));
  }
  return out.dump();
}

std::string simulate_json(const std::string& config_text) {
  const auto c = parse_config(config_text);
  Sampler sampler(c.plan(), interferometer_for(c), c.sampler_config(), c.seed);
  const auto hash = config_hash(c);
  nlohmann::json out = nlohmann::json::array();
  for (std::uint64_t i = 0; i < c.trials; ++i) out.push_back(sample_record_to_json(sampler.draw(i), hash));
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Scattershot multiboson correlation sampling core";

  py::register_exception<GuardExceeded>(m, "GuardExceeded", PyExc_RuntimeError);
  py::register_exception<NumericAssertion>(m, "NumericAssertion", PyExc_ArithmeticError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("perm_naive", [](const ComplexArray& a) { return perm_naive(to_matrix(a)); });
  m.def("perm_fast", [](const ComplexArray& a) { return perm_fast(to_matrix(a)); });
  m.def("perm_glynn", [](const ComplexArray& a) { return perm_glynn(to_matrix(a)); });

  m.def("haar_random", [](std::size_t dim, std::uint64_t seed) {
    return to_array(haar_random(dim, seed).matrix());
  }, py::arg("M"), py::arg("seed"));
  m.def("unitarity_defect", [](const ComplexArray& u) { return unitarity_defect(to_matrix(u)); });
  m.def("eigenphases", [](const ComplexArray& u) { return eigenphases(to_matrix(u)); });

  m.def("single_photon_probability", [](double gamma, std::size_t k, bool strict) {
    return single_photon_probability(make_source(gamma, k, true, strict));
  }, py::arg("gamma"), py::arg("k"), py::arg("strict_single_pair") = true);
  m.def("at_least_one_probability", [](double gamma, std::size_t k) {
    return at_least_one_probability(make_source(gamma, k, false, true));
  }, py::arg("gamma"), py::arg("k"));
  m.def("squeezing_for_at_least_one", &squeezing_for_at_least_one, py::arg("probability"),
        py::arg("k"));
  m.def("source_count", &source_count, py::arg("N"), py::arg("a"));
  m.def("success_probability",
        py::overload_cast<std::size_t, std::size_t, double>(&success_probability),
        py::arg("N"), py::arg("sources"), py::arg("p"));
  m.def("success_curve", [](double a, double gamma, std::size_t k, bool feed_forward,
                            std::size_t n_min, std::size_t n_max) {
    std::vector<std::pair<std::size_t, double>> points;
    for (const auto& p : success_curve(a, make_source(gamma, k, feed_forward, true), n_min, n_max).points)
      points.emplace_back(p.photons, p.probability);
    return points;
  }, py::arg("a"), py::arg("gamma"), py::arg("k"), py::arg("feed_forward") = true,
        py::arg("n_min") = 1, py::arg("n_max") = 200);
  m.def("photon_statistics", [](std::size_t n, double a, double gamma, std::size_t k) {
    const auto s = total_photon_statistics({n, a, make_source(gamma, k, false, true)});
    return std::make_pair(s.mean, s.std_dev);
  }, py::arg("N"), py::arg("a"), py::arg("gamma"), py::arg("k"));

  m.def("gaussian_diagnostics", [](std::size_t ports, std::size_t photons, std::size_t k,
                                   std::uint64_t trials, std::uint64_t seed, bool random_phases) {
    const auto r = gaussian_entry_diagnostics(ports, photons, k, trials, seed, random_phases);
    py::dict d;
    d["re_variance"] = r.real.variance;
    d["im_variance"] = r.imag.variance;
    d["re_excess_kurtosis"] = r.real.excess_kurtosis;
    d["im_excess_kurtosis"] = r.imag.excess_kurtosis;
    d["max_abs_correlation"] = r.max_abs_correlation;
    d["kurtosis_gaussian"] = r.kurtosis_gaussian;
    d["below_recommended_ports"] = r.below_recommended_ports;
    return d;
  }, py::arg("M"), py::arg("N"), py::arg("k") = 8, py::arg("trials") = 1000,
        py::arg("seed") = 1, py::arg("random_phases") = true);

  m.def("default_config_json", [] { return to_json(ExperimentConfig{}).dump(); });
  m.def("config_hash", [](const std::string& text) { return config_hash(parse_config(text)); });
  m.def("distribution_json", &distribution_json, py::arg("config"), py::arg("modes") = py::none());
  m.def("simulate_json", &simulate_json, py::arg("config"));
}
