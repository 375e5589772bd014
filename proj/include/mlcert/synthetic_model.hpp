// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mlcert {

using Label = int;

// Sorted ascending, no duplicates.
using LabelSet = std::vector<Label>;

struct AffineScore {
  std::vector<double> weights;
  double bias = 0.0;
};

/// Multi-label classifier whose per-label score is affine in the input; it
/// predicts the k' labels with the largest scores (ties go to the smaller
/// label index). Immutable once constructed.
class SyntheticClassifier {
 public:
  SyntheticClassifier(int dimension, int k_prime, std::vector<AffineScore> scores);

  int dimension() const noexcept { return dimension_; }
  int num_labels() const noexcept { return static_cast<int>(scores_.size()); }
  int k_prime() const noexcept { return k_prime_; }
  const std::vector<AffineScore>& scores() const noexcept { return scores_; }

  double score(Label label, std::span<const double> point) const;

 private:
  int dimension_;
  int k_prime_;
  std::vector<AffineScore> scores_;
};

/// Breakpoints split the real line into |breakpoints| + 1 intervals; interval
/// i spans [breakpoints[i-1], breakpoints[i]) with the outer ends unbounded.
struct IntervalPartition {
  std::vector<double> breakpoints;
  std::vector<LabelSet> top_sets;

  std::size_t interval_of(double w) const;
};

LabelSet predict_topk(const SyntheticClassifier& classifier, std::span<const double> point);

// 1-D only: the intervals on which the predicted top-k' set is constant.
IntervalPartition partition_line(const SyntheticClassifier& classifier);

/// Exact p_i = Pr(i in f_k'(center + eps)), eps ~ N(0, sigma^2), for a 1-D
/// classifier. The result sums to k'.
std::vector<double> exact_label_probabilities(const SyntheticClassifier& classifier, double center,
                                              double sigma);

// Same, with the partition precomputed.
std::vector<double> exact_label_probabilities(const IntervalPartition& partition, int num_labels,
                                              double center, double sigma);

/// Outward-rounded enclosure of the exact probabilities: lower[i] <= p_i <=
/// upper[i] despite floating-point error. The value 1 (or 0) is returned only
/// when the label is in (or out of) the top-k' set on the whole line.
struct ProbabilityEnclosure {
  std::vector<double> lower;
  std::vector<double> upper;
};

ProbabilityEnclosure exact_probability_enclosure(const IntervalPartition& partition, int num_labels, double center,
                                                 double sigma);
ProbabilityEnclosure exact_probability_enclosure(const SyntheticClassifier& classifier, double center, double sigma);

/// One input to certify: where it sits and which labels are correct.
struct SyntheticInput {
  std::string id;
  std::vector<double> point;
  LabelSet ground_truth;
};

/// Classifier spec file (JSON):
///   {"dimension": 1, "num_labels": 3, "k_prime": 1,
///    "labels": [{"weights": [1.0], "bias": 0.0}, ...],
///    "inputs": [{"id": "x0", "point": [0.3], "ground_truth": [0, 2]}, ...]}
/// "inputs" is optional.
struct ClassifierSpec {
  SyntheticClassifier classifier;
  std::vector<SyntheticInput> inputs;
};

ClassifierSpec read_classifier_spec(const std::filesystem::path& path);
ClassifierSpec parse_classifier_spec(const std::string& text);
std::string format_classifier_spec(const ClassifierSpec& spec);

struct RandomClassifierOptions {
  int min_labels = 3;
  int max_labels = 8;
  int max_k_prime = 2;
  int max_ground_truth = 3;
  double slope_scale = 2.0;
  double bias_scale = 1.0;
  double center_scale = 1.0;
  // Draw the ground truth from the d + 1 most probable labels under
  // N(center, sigma^2) instead of uniformly, so certificates are non-trivial.
  bool likely_truth = true;
  double sigma = 0.5;
};

/// Random 1-D affine classifier plus one input, fully determined by `seed`.
ClassifierSpec random_synthetic_instance(std::uint64_t seed, const RandomClassifierOptions& options = {});

}  // namespace mlcert
