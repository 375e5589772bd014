// SPDX-License-Identifier: Apache-2.0
#include "mlcert/synthetic_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mlcert/errors.hpp"
#include "mlcert/numerics.hpp"
#include "mlcert/rng.hpp"

namespace mlcert {
namespace {

using nlohmann::json;

// Top-k of `values` by descending value, ties to the smaller index; sorted ascending.
LabelSet top_indices(const std::vector<double>& values, int k) {
  std::vector<Label> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Label a, Label b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

// Mass of N(center, sigma^2) on [lo, hi), computed on the side of the
// distribution that avoids cancellation.
double gaussian_mass(double lo, double hi, double center, double sigma) {
  const double zl = (lo - center) / sigma;
  const double zh = (hi - center) / sigma;
  if (zl > 0.0) return gaussian_ccdf(zl) - gaussian_ccdf(zh);
  return gaussian_cdf(zh) - gaussian_cdf(zl);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

LabelSet parse_label_set(const json& j, int num_labels, const std::string& where) {
  LabelSet labels = j.get<LabelSet>();
  std::sort(labels.begin(), labels.end());
  require(std::adjacent_find(labels.begin(), labels.end()) == labels.end(), where + ": duplicate label");
  for (Label l : labels) {
    require(l >= 0 && l < num_labels, where + ": label " + std::to_string(l) + " out of range");
  }
  return labels;
}

}  // namespace

SyntheticClassifier::SyntheticClassifier(int dimension, int k_prime, std::vector<AffineScore> scores)
    : dimension_(dimension), k_prime_(k_prime), scores_(std::move(scores)) {
  require(dimension_ >= 1, "classifier dimension must be positive");
  require(!scores_.empty(), "classifier needs at least one label");
  require(k_prime_ >= 1 && k_prime_ <= num_labels(), "k_prime must lie in [1, num_labels]");
  for (const auto& s : scores_) {
    require(static_cast<int>(s.weights.size()) == dimension_, "score weight count does not match dimension");
    require(std::isfinite(s.bias), "score bias must be finite");
    for (double w : s.weights) require(std::isfinite(w), "score weights must be finite");
  }
}

double SyntheticClassifier::score(Label label, std::span<const double> point) const {
  const auto& s = scores_[static_cast<std::size_t>(label)];
  double value = s.bias;
  for (int i = 0; i < dimension_; ++i) value += s.weights[i] * point[i];
  return value;
}

std::size_t IntervalPartition::interval_of(double w) const {
  return static_cast<std::size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), w) - breakpoints.begin());
}

LabelSet predict_topk(const SyntheticClassifier& classifier, std::span<const double> point) {
  if (static_cast<int>(point.size()) != classifier.dimension()) {
    throw ValidationError("point dimension " + std::to_string(point.size()) + " does not match classifier dimension " +
                          std::to_string(classifier.dimension()));
  }
  std::vector<double> values(classifier.num_labels());
  for (Label l = 0; l < classifier.num_labels(); ++l) values[l] = classifier.score(l, point);
  return top_indices(values, classifier.k_prime());
}

IntervalPartition partition_line(const SyntheticClassifier& classifier) {
  if (classifier.dimension() != 1) throw ValidationError("partition_line requires a 1-D classifier");

  const auto& scores = classifier.scores();
  const int c = classifier.num_labels();
  std::vector<double> crossings;
  for (int i = 0; i < c; ++i) {
    for (int j = i + 1; j < c; ++j) {
      const double dw = scores[i].weights[0] - scores[j].weights[0];
      if (dw == 0.0) continue;
      const double w = (scores[j].bias - scores[i].bias) / dw;
      if (std::isfinite(w)) crossings.push_back(w);
    }
  }
  std::sort(crossings.begin(), crossings.end());
  crossings.erase(std::unique(crossings.begin(), crossings.end()), crossings.end());

  // Between consecutive crossings the score order is fixed; probe one
  // interior point per piece and keep only boundaries where the set changes.
  auto set_at = [&](double w) { return predict_topk(classifier, std::span<const double>(&w, 1)); };
  IntervalPartition out;
  if (crossings.empty()) {
    out.top_sets.push_back(set_at(0.0));
    return out;
  }
  out.top_sets.push_back(set_at(crossings.front() - 1.0));
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    const double probe = i + 1 < crossings.size() ? 0.5 * (crossings[i] + crossings[i + 1]) : crossings[i] + 1.0;
    LabelSet next = set_at(probe);
    if (next != out.top_sets.back()) {
      out.breakpoints.push_back(crossings[i]);
      out.top_sets.push_back(std::move(next));
    }
  }
  return out;
}

std::vector<double> exact_label_probabilities(const IntervalPartition& partition, int num_labels, double center,
                                              double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> probs(static_cast<std::size_t>(num_labels), 0.0);
  for (std::size_t i = 0; i < partition.top_sets.size(); ++i) {
    const double lo = i == 0 ? -kInf : partition.breakpoints[i - 1];
    const double hi = i == partition.breakpoints.size() ? kInf : partition.breakpoints[i];
    const double mass = gaussian_mass(lo, hi, center, sigma);
    for (Label l : partition.top_sets[i]) probs[l] += mass;
  }
  return probs;
}

std::vector<double> exact_label_probabilities(const SyntheticClassifier& classifier, double center, double sigma) {
  if (classifier.dimension() != 1) {
    throw ValidationError("exact label probabilities are only available for 1-D classifiers");
  }
  return exact_label_probabilities(partition_line(classifier), classifier.num_labels(), center, sigma);
}

ProbabilityEnclosure exact_probability_enclosure(const IntervalPartition& partition, int num_labels, double center,
                                                 double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  // Covers the summation and CDF error of a few dozen interval masses.
  constexpr double kSlack = 1e-13;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const auto c = static_cast<std::size_t>(num_labels);
  std::vector<double> in(c, 0.0), out(c, 0.0);
  std::vector<char> ever_in(c, 0), ever_out(c, 0);
  for (std::size_t i = 0; i < partition.top_sets.size(); ++i) {
    const double lo = i == 0 ? -kInf : partition.breakpoints[i - 1];
    const double hi = i == partition.breakpoints.size() ? kInf : partition.breakpoints[i];
    const double mass = gaussian_mass(lo, hi, center, sigma);
    const auto& top = partition.top_sets[i];
    for (std::size_t l = 0; l < c; ++l) {
      if (std::binary_search(top.begin(), top.end(), static_cast<Label>(l))) {
        in[l] += mass;
        ever_in[l] = 1;
      } else {
        out[l] += mass;
        ever_out[l] = 1;
      }
    }
  }
  ProbabilityEnclosure e{std::vector<double>(c, 0.0), std::vector<double>(c, 1.0)};
  for (std::size_t l = 0; l < c; ++l) {
    e.lower[l] = ever_out[l] ? std::clamp(std::min(in[l], 1.0 - out[l]) - kSlack, 0.0, 1.0) : 1.0;
    e.upper[l] = ever_in[l] ? std::clamp(std::max(in[l], 1.0 - out[l]) + kSlack, 0.0, 1.0) : 0.0;
  }
  return e;
}

ProbabilityEnclosure exact_probability_enclosure(const SyntheticClassifier& classifier, double center, double sigma) {
  if (classifier.dimension() != 1) {
    throw ValidationError("exact label probabilities are only available for 1-D classifiers");
  }
  return exact_probability_enclosure(partition_line(classifier), classifier.num_labels(), center, sigma);
}

ClassifierSpec parse_classifier_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("classifier spec is not valid JSON: ") + e.what());
  }
  try {
    const int dimension = doc.at("dimension").get<int>();
    const int num_labels = doc.at("num_labels").get<int>();
    const int k_prime = doc.at("k_prime").get<int>();
    const auto& labels = doc.at("labels");
    require(labels.is_array() && static_cast<int>(labels.size()) == num_labels,
            "classifier spec: 'labels' must list num_labels entries");
    std::vector<AffineScore> scores;
    for (const auto& l : labels) {
      scores.push_back({l.at("weights").get<std::vector<double>>(), l.at("bias").get<double>()});
    }
    ClassifierSpec spec{SyntheticClassifier(dimension, k_prime, std::move(scores)), {}};
    if (doc.contains("inputs")) {
      for (const auto& in : doc.at("inputs")) {
        SyntheticInput input;
        input.id = in.at("id").get<std::string>();
        input.point = in.at("point").get<std::vector<double>>();
        require(static_cast<int>(input.point.size()) == dimension, "input '" + input.id + "': point dimension mismatch");
        input.ground_truth = parse_label_set(in.at("ground_truth"), num_labels, "input '" + input.id + "'");
        require(!input.ground_truth.empty(), "input '" + input.id + "': empty ground truth");
        for (const auto& prev : spec.inputs) require(prev.id != input.id, "duplicate input id '" + input.id + "'");
        spec.inputs.push_back(std::move(input));
      }
    }
    return spec;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("classifier spec: ") + e.what());
  }
}

ClassifierSpec read_classifier_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open classifier spec " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_classifier_spec(buf.str());
}

std::string format_classifier_spec(const ClassifierSpec& spec) {
  nlohmann::ordered_json doc;
  const auto& cls = spec.classifier;
  doc["dimension"] = cls.dimension();
  doc["num_labels"] = cls.num_labels();
  doc["k_prime"] = cls.k_prime();
  doc["labels"] = nlohmann::ordered_json::array();
  for (const auto& s : cls.scores()) doc["labels"].push_back({{"weights", s.weights}, {"bias", s.bias}});
  if (!spec.inputs.empty()) {
    doc["inputs"] = nlohmann::ordered_json::array();
    for (const auto& in : spec.inputs) {
      doc["inputs"].push_back({{"id", in.id}, {"point", in.point}, {"ground_truth", in.ground_truth}});
    }
  }
  return doc.dump(2) + "\n";
}

ClassifierSpec random_synthetic_instance(std::uint64_t seed, const RandomClassifierOptions& options) {
  SequentialRng rng(seed, stream_id("synthetic-instance"));
  const int c = rng.uniform_int(options.min_labels, options.max_labels);
  const int k_prime = rng.uniform_int(1, std::min(options.max_k_prime, c - 1));
  std::vector<AffineScore> scores;
  for (int l = 0; l < c; ++l) {
    scores.push_back({{rng.uniform(-options.slope_scale, options.slope_scale)},
                      rng.uniform(-options.bias_scale, options.bias_scale)});
  }
  const int d = rng.uniform_int(1, std::min(options.max_ground_truth, c - 1));
  const double center = rng.uniform(-options.center_scale, options.center_scale);
  SyntheticClassifier classifier(1, k_prime, std::move(scores));

  std::vector<Label> pool(static_cast<std::size_t>(c));
  std::iota(pool.begin(), pool.end(), 0);
  int pool_size = c;
  if (options.likely_truth) {
    const auto probs = exact_label_probabilities(classifier, center, options.sigma);
    std::stable_sort(pool.begin(), pool.end(), [&](Label a, Label b) { return probs[a] > probs[b]; });
    pool_size = std::min(c, d + 1);
  }
  for (int i = 0; i < d; ++i) std::swap(pool[i], pool[rng.uniform_int(i, pool_size - 1)]);
  LabelSet truth(pool.begin(), pool.begin() + d);
  std::sort(truth.begin(), truth.end());

  SyntheticInput input{"syn-" + std::to_string(seed), {center}, std::move(truth)};
  return {std::move(classifier), {std::move(input)}};
}

}  // namespace mlcert
