// SPDX-License-Identifier: Apache-2.0
#include "mlcert/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlcert/errors.hpp"
#include "mlcert/numerics.hpp"

namespace mlcert {
namespace {

void sort_descending(std::vector<LabelBound>& v) {
  std::sort(v.begin(), v.end(), [](const LabelBound& a, const LabelBound& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.label < b.label;
  });
}

double find(const std::vector<LabelBound>& v, Label label, const char* what) {
  for (const auto& b : v) {
    if (b.label == label) return b.value;
  }
  throw ValidationError(std::string("no ") + what + " bound for label " + std::to_string(label));
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("bound outside [0, 1]: " + std::to_string(p));
}

}  // namespace

ProbabilityBounds ProbabilityBounds::from_values(int num_labels, int k_prime, const LabelSet& ground_truth,
                                                 const std::vector<double>& lower_values,
                                                 const std::vector<double>& upper_values) {
  if (num_labels < 1 || static_cast<int>(lower_values.size()) != num_labels ||
      static_cast<int>(upper_values.size()) != num_labels) {
    throw ValidationError("bound vectors must have one entry per label");
  }
  if (k_prime < 1 || k_prime > num_labels) throw ValidationError("k_prime must lie in [1, c]");
  if (ground_truth.empty()) throw ValidationError("ground truth must be nonempty");

  ProbabilityBounds out;
  out.num_labels_ = num_labels;
  out.k_prime_ = k_prime;
  std::vector<bool> is_truth(static_cast<std::size_t>(num_labels), false);
  for (Label l : ground_truth) {
    if (l < 0 || l >= num_labels || is_truth[l]) throw ValidationError("invalid ground truth label " + std::to_string(l));
    is_truth[l] = true;
  }
  for (Label l = 0; l < num_labels; ++l) {
    check_probability(lower_values[l]);
    check_probability(upper_values[l]);
    if (is_truth[l]) {
      out.lower_.push_back({l, lower_values[l]});
      out.truth_upper_.push_back({l, upper_values[l]});
    } else {
      out.upper_.push_back({l, upper_values[l]});
    }
  }
  out.finalize();
  return out;
}

ProbabilityBounds ProbabilityBounds::exact(int k_prime, const LabelSet& ground_truth,
                                           const std::vector<double>& probabilities) {
  std::vector<double> clamped(probabilities);
  for (double& p : clamped) p = std::clamp(p, 0.0, 1.0);
  return from_values(static_cast<int>(clamped.size()), k_prime, ground_truth, clamped, clamped);
}

void ProbabilityBounds::finalize() {
  sort_descending(lower_);
  sort_descending(upper_);
  lower_total_ = 0.0;
  for (const auto& b : lower_) lower_total_ += b.value;
}

double ProbabilityBounds::lower(Label label) const { return find(lower_, label, "lower"); }
double ProbabilityBounds::upper(Label label) const { return find(upper_, label, "upper"); }
double ProbabilityBounds::truth_upper(Label label) const { return find(truth_upper_, label, "truth upper"); }

ProbabilityBounds ProbabilityBounds::restricted_to(Label label) const {
  ProbabilityBounds out;
  out.num_labels_ = num_labels_;
  out.k_prime_ = k_prime_;
  out.lower_.push_back({label, lower(label)});
  out.truth_upper_.push_back({label, truth_upper(label)});
  out.upper_ = upper_;
  for (const auto& b : truth_upper_) {
    if (b.label != label) out.upper_.push_back(b);
  }
  out.finalize();
  return out;
}

double clopper_pearson_lower(std::int64_t successes, std::int64_t trials, double level) {
  if (successes == 0) return 0.0;
  return beta_quantile(level, static_cast<double>(successes), static_cast<double>(trials - successes + 1));
}

double clopper_pearson_upper(std::int64_t successes, std::int64_t trials, double level, IntervalMethod method) {
  if (method == IntervalMethod::strict_paper) {
    // Beta(0, .) is a point mass at 0.
    if (successes == 0) return 0.0;
    return beta_quantile(1.0 - level, static_cast<double>(successes), static_cast<double>(trials - successes + 1));
  }
  if (successes == trials) return 1.0;
  return beta_quantile(1.0 - level, static_cast<double>(successes + 1), static_cast<double>(trials - successes));
}

ProbabilityBounds estimate_bounds(const CertificationInstance& instance, double alpha, IntervalMethod method) {
  instance.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  const double level = alpha / instance.num_labels;
  std::vector<double> lower(static_cast<std::size_t>(instance.num_labels), 0.0);
  std::vector<double> upper(static_cast<std::size_t>(instance.num_labels), 1.0);
  for (Label l = 0; l < instance.num_labels; ++l) {
    const std::int64_t count = instance.counts[static_cast<std::size_t>(l)];
    upper[l] = clopper_pearson_upper(count, instance.n, level, method);
    if (std::binary_search(instance.ground_truth.begin(), instance.ground_truth.end(), l)) {
      lower[l] = clopper_pearson_lower(count, instance.n, level);
    }
  }
  return ProbabilityBounds::from_values(instance.num_labels, instance.k_prime, instance.ground_truth, lower, upper);
}

double joint_lower_sum(const ProbabilityBounds& bounds, int e_prime, int u) {
  const int d = bounds.d();
  if (e_prime < 1 || e_prime > d || u < 1 || u > d - e_prime + 1) {
    throw ValidationError("joint_lower_sum: index out of range (e'=" + std::to_string(e_prime) +
                          ", u=" + std::to_string(u) + ", d=" + std::to_string(d) + ")");
  }
  const auto& sorted = bounds.lower_sorted();
  double sum = 0.0;
  for (int l = e_prime; l <= e_prime + u - 1; ++l) sum += sorted[static_cast<std::size_t>(l - 1)].value;
  return sum;
}

double joint_upper_sum(const ProbabilityBounds& bounds, int e_prime, int v, int k, int k_prime) {
  const int s = k - e_prime + 1;
  if (s < 1 || s > bounds.num_others()) {
    throw ValidationError("joint_upper_sum: s = k - e' + 1 = " + std::to_string(s) + " exceeds the " +
                          std::to_string(bounds.num_others()) + " non-ground-truth labels");
  }
  if (v < 1 || v > s) throw ValidationError("joint_upper_sum: v out of range");
  const auto& sorted = bounds.upper_sorted();
  double sum = 0.0;
  for (int l = s - v + 1; l <= s; ++l) sum += sorted[static_cast<std::size_t>(l - 1)].value;
  const double cap = static_cast<double>(k_prime) - bounds.lower_total();
  return std::max(0.0, std::min(sum, cap));
}

}  // namespace mlcert
