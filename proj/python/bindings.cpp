// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mlcert/attack_verifier.hpp"
#include "mlcert/errors.hpp"
#include "mlcert/numerics.hpp"
#include "mlcert/pipeline.hpp"

namespace py = pybind11;
using namespace mlcert;

namespace {

std::vector<std::pair<Label, double>> as_pairs(const std::vector<LabelBound>& v) {
  std::vector<std::pair<Label, double>> out;
  for (const auto& b : v) out.emplace_back(b.label, b.value);
  return out;
}

CertifyMode mode_from(const std::string& name) {
  const auto m = parse_mode(name);
  if (!m) throw ValidationError("unknown mode '" + name + "'");
  return *m;
}

}  // namespace

PYBIND11_MODULE(_mlcert, m) {
  m.doc() = "Certified intersection size, radius and top-k metrics for Gaussian-smoothed multi-label classifiers";
  m.attr("__version__") = kVersion;

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    }
  });

  m.def("gaussian_cdf", &gaussian_cdf, py::arg("z"));
  m.def("gaussian_quantile", &gaussian_quantile, py::arg("p"));
  m.def("regularized_incomplete_beta", &regularized_incomplete_beta, py::arg("x"), py::arg("a"), py::arg("b"));
  m.def("beta_quantile", &beta_quantile, py::arg("q"), py::arg("a"), py::arg("b"));

  py::class_<SmoothingConfig>(m, "SmoothingConfig")
      .def(py::init([](double sigma, std::int64_t n, double alpha, int k_prime, int k, std::uint64_t seed) {
             SmoothingConfig c{sigma, n, alpha, k_prime, k, seed};
             c.validate();
             return c;
           }),
           py::arg("sigma") = 0.5, py::arg("n") = 1000, py::arg("alpha") = 0.001, py::arg("k_prime") = 1,
           py::arg("k") = 3, py::arg("seed") = 0)
      .def_readwrite("sigma", &SmoothingConfig::sigma)
      .def_readwrite("n", &SmoothingConfig::n)
      .def_readwrite("alpha", &SmoothingConfig::alpha)
      .def_readwrite("k_prime", &SmoothingConfig::k_prime)
      .def_readwrite("k", &SmoothingConfig::k)
      .def_readwrite("seed", &SmoothingConfig::seed);

  py::class_<CertificationInstance>(m, "CertificationInstance")
      .def(py::init([](std::string id, int c, int k_prime, std::int64_t n, LabelSet truth,
                       std::vector<std::int64_t> counts) {
             CertificationInstance inst{std::move(id), c, k_prime, n, std::move(truth), std::move(counts)};
             std::sort(inst.ground_truth.begin(), inst.ground_truth.end());
             inst.validate();
             return inst;
           }),
           py::arg("id"), py::arg("c"), py::arg("k_prime"), py::arg("n"), py::arg("ground_truth"), py::arg("counts"))
      .def_readonly("id", &CertificationInstance::id)
      .def_readonly("c", &CertificationInstance::num_labels)
      .def_readonly("k_prime", &CertificationInstance::k_prime)
      .def_readonly("n", &CertificationInstance::n)
      .def_readonly("ground_truth", &CertificationInstance::ground_truth)
      .def_readonly("counts", &CertificationInstance::counts)
      .def("__eq__", [](const CertificationInstance& a, const CertificationInstance& b) { return a == b; });

  py::class_<ProbabilityBounds>(m, "ProbabilityBounds")
      .def_static("from_values", &ProbabilityBounds::from_values, py::arg("c"), py::arg("k_prime"),
                  py::arg("ground_truth"), py::arg("lower"), py::arg("upper"))
      .def_static("exact", &ProbabilityBounds::exact, py::arg("k_prime"), py::arg("ground_truth"),
                  py::arg("probabilities"))
      .def_property_readonly("lower_sorted", [](const ProbabilityBounds& b) { return as_pairs(b.lower_sorted()); })
      .def_property_readonly("upper_sorted", [](const ProbabilityBounds& b) { return as_pairs(b.upper_sorted()); })
      .def_property_readonly("d", &ProbabilityBounds::d)
      .def_property_readonly("c", &ProbabilityBounds::num_labels)
      .def_property_readonly("k_prime", &ProbabilityBounds::k_prime);

  m.def(
      "estimate_bounds",
      [](const CertificationInstance& inst, double alpha, bool strict_paper) {
        return estimate_bounds(inst, alpha, strict_paper ? IntervalMethod::strict_paper : IntervalMethod::clopper_pearson);
      },
      py::arg("instance"), py::arg("alpha"), py::arg("strict_paper") = false);

  py::class_<CertifiedResult>(m, "CertifiedResult")
      .def_readonly("instance_id", &CertifiedResult::instance_id)
      .def_readonly("radius", &CertifiedResult::radius)
      .def_readonly("certified_size", &CertifiedResult::certified_size)
      .def_property_readonly("mode", [](const CertifiedResult& r) { return std::string(mode_name(r.mode)); })
      .def_readonly("d", &CertifiedResult::d)
      .def_readonly("k", &CertifiedResult::k);

  m.def("condition_holds", &condition_holds, py::arg("bounds"), py::arg("e_prime"), py::arg("radius"),
        py::arg("config"), py::arg("use_joint_terms") = true);
  m.def("certified_intersection_size", &certified_intersection_size, py::arg("bounds"), py::arg("radius"),
        py::arg("config"), py::arg("use_joint_terms") = true);
  m.def("certified_radius", &certified_radius, py::arg("bounds"), py::arg("e_target"), py::arg("config"),
        py::arg("use_joint_terms") = true);
  m.def("baseline_per_label", &baseline_per_label, py::arg("bounds"), py::arg("radius"), py::arg("config"));

  py::class_<SyntheticClassifier>(m, "SyntheticClassifier")
      .def(py::init([](int dimension, int k_prime, const std::vector<std::pair<std::vector<double>, double>>& scores) {
             std::vector<AffineScore> s;
             for (const auto& [w, b] : scores) s.push_back({w, b});
             return SyntheticClassifier(dimension, k_prime, std::move(s));
           }),
           py::arg("dimension"), py::arg("k_prime"), py::arg("scores"))
      .def_property_readonly("dimension", &SyntheticClassifier::dimension)
      .def_property_readonly("c", &SyntheticClassifier::num_labels)
      .def_property_readonly("k_prime", &SyntheticClassifier::k_prime);

  m.def(
      "predict_topk",
      [](const SyntheticClassifier& c, const std::vector<double>& point) { return predict_topk(c, point); },
      py::arg("classifier"), py::arg("point"));
  m.def(
      "exact_label_probabilities",
      [](const SyntheticClassifier& c, double center, double sigma) { return exact_label_probabilities(c, center, sigma); },
      py::arg("classifier"), py::arg("center"), py::arg("sigma"));
  m.def(
      "exact_bounds",
      [](const SyntheticClassifier& c, double x, LabelSet truth, double sigma) {
        std::sort(truth.begin(), truth.end());
        return exact_bounds(c, x, truth, sigma);
      },
      py::arg("classifier"), py::arg("x"), py::arg("ground_truth"), py::arg("sigma"));
  m.def(
      "count_frequencies",
      [](const SyntheticClassifier& c, const std::string& id, const std::vector<double>& point, LabelSet truth,
         const SmoothingConfig& config, unsigned threads) {
        std::sort(truth.begin(), truth.end());
        return count_frequencies(c, SyntheticInput{id, point, std::move(truth)}, config, threads);
      },
      py::arg("classifier"), py::arg("id"), py::arg("point"), py::arg("ground_truth"), py::arg("config"),
      py::arg("threads") = 1);
  m.def(
      "exhaustive_attack",
      [](const SyntheticClassifier& c, double x, LabelSet truth, const SmoothingConfig& config, double radius,
         double grid_step) {
        std::sort(truth.begin(), truth.end());
        const AttackSweep s = exhaustive_attack(c, x, truth, config, radius, grid_step);
        return py::dict(py::arg("radius") = s.radius, py::arg("grid_step") = s.grid_step,
                        py::arg("worst_intersection") = s.worst_intersection, py::arg("worst_delta") = s.worst_delta);
      },
      py::arg("classifier"), py::arg("x"), py::arg("ground_truth"), py::arg("config"), py::arg("radius"),
      py::arg("grid_step"));

  m.def(
      "instance_metrics",
      [](int e, int d, int k) {
        const auto r = instance_metrics(e, d, k);
        return py::make_tuple(r.precision, r.recall, r.f1);
      },
      py::arg("e"), py::arg("d"), py::arg("k"));
  m.def(
      "sweep",
      [](const std::vector<CertificationInstance>& instances, const SmoothingConfig& config,
         const std::vector<double>& radii, const std::vector<std::string>& modes, bool strict_paper) {
        std::vector<CertifyMode> ms;
        for (const auto& name : modes) ms.push_back(mode_from(name));
        CertifyOptions opts;
        opts.interval = strict_paper ? IntervalMethod::strict_paper : IntervalMethod::clopper_pearson;
        py::list rows;
        for (const auto& r : sweep(instances, config, radii, ms, opts)) {
          rows.append(py::dict(py::arg("mode") = std::string(mode_name(r.mode)), py::arg("R") = r.radius,
                               py::arg("precision") = r.certified_precision, py::arg("recall") = r.certified_recall,
                               py::arg("f1") = r.certified_f1, py::arg("n") = r.num_instances));
        }
        return rows;
      },
      py::arg("instances"), py::arg("config"), py::arg("radii"), py::arg("modes") = std::vector<std::string>{"multiguard"},
      py::arg("strict_paper") = false);

  m.def("parse_counts", &parse_counts, py::arg("text"));
  m.def(
      "format_counts",
      [](const std::vector<CertificationInstance>& instances) { return format_counts(instances); },
      py::arg("instances"));
}
