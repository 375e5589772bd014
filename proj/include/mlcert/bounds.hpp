// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mlcert/sampler.hpp"

namespace mlcert {

struct LabelBound {
  Label label;
  double value;

  friend bool operator==(const LabelBound&, const LabelBound&) = default;
};

/// Simultaneous label-probability bounds for one input.
///
/// `lower` holds a lower bound for every ground-truth label and `upper` an
/// upper bound for every other label, both sorted by descending value with
/// ties broken by label index. `truth_upper` holds upper bounds for the
/// ground-truth labels at the same confidence; only the per-label baseline
/// uses them, because it re-certifies each true label against all others.
class ProbabilityBounds {
 public:
  ProbabilityBounds() = default;

  /// `lower_values` / `upper_values` are indexed by label; entries for labels
  /// on the other side are ignored. Missing truth uppers default to 1.
  static ProbabilityBounds from_values(int num_labels, int k_prime, const LabelSet& ground_truth,
                                       const std::vector<double>& lower_values,
                                       const std::vector<double>& upper_values);

  /// Exact probabilities used as both bounds (no statistical slack).
  static ProbabilityBounds exact(int k_prime, const LabelSet& ground_truth, const std::vector<double>& probabilities);

  int num_labels() const noexcept { return num_labels_; }
  int k_prime() const noexcept { return k_prime_; }
  int d() const noexcept { return static_cast<int>(lower_.size()); }
  int num_others() const noexcept { return static_cast<int>(upper_.size()); }

  const std::vector<LabelBound>& lower_sorted() const noexcept { return lower_; }
  const std::vector<LabelBound>& upper_sorted() const noexcept { return upper_; }

  // By label; throws ValidationError when the label is on the other side.
  double lower(Label label) const;
  double upper(Label label) const;
  double truth_upper(Label label) const;

  // Sum of all ground-truth lower bounds.
  double lower_total() const noexcept { return lower_total_; }

  /// The same bounds with the ground truth narrowed to {label}: the other
  /// true labels move to the competitor side with their truth_upper values.
  ProbabilityBounds restricted_to(Label label) const;

 private:
  int num_labels_ = 0;
  int k_prime_ = 1;
  std::vector<LabelBound> lower_;
  std::vector<LabelBound> upper_;
  std::vector<LabelBound> truth_upper_;
  double lower_total_ = 0.0;

  void finalize();
};

enum class IntervalMethod {
  // Clopper-Pearson: lower Beta(a; n_i, n-n_i+1), upper Beta(1-a; n_j+1, n-n_j).
  clopper_pearson,
  // Upper endpoint with the shapes (n_j, n-n_j+1) for both sides, kept for
  // comparison with that published parameterization.
  strict_paper,
};

double clopper_pearson_lower(std::int64_t successes, std::int64_t trials, double level);
double clopper_pearson_upper(std::int64_t successes, std::int64_t trials, double level,
                             IntervalMethod method = IntervalMethod::clopper_pearson);

/// Bonferroni-corrected bounds: each of the c one-sided bounds is taken at
/// level alpha / c so all hold jointly with probability >= 1 - alpha.
ProbabilityBounds estimate_bounds(const CertificationInstance& instance, double alpha,
                                  IntervalMethod method = IntervalMethod::clopper_pearson);

/// Sum of lower bounds at sorted positions e'..e'+u-1 (1-based).
double joint_lower_sum(const ProbabilityBounds& bounds, int e_prime, int u);

/// min(sum of upper bounds at sorted positions s-v+1..s, k' - sum of all
/// truth lower bounds), floored at 0, where s = k - e' + 1 (1-based).
double joint_upper_sum(const ProbabilityBounds& bounds, int e_prime, int v, int k, int k_prime);

}  // namespace mlcert
