// SPDX-License-Identifier: Apache-2.0
#include "mlcert/attack_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mlcert/errors.hpp"
#include "mlcert/parallel.hpp"
#include "mlcert/rng.hpp"

namespace mlcert {
namespace {

LabelSet top_by_probability(const std::vector<double>& probs, int k) {
  std::vector<Label> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Label a, Label b) { return probs[a] > probs[b]; });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

int intersection_size(const LabelSet& a, const LabelSet& b) {
  int count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

void check_k(const SyntheticClassifier& classifier, int k) {
  if (k < 1 || k > classifier.num_labels()) throw ValidationError("k must lie in [1, c]");
}

}  // namespace

ProbabilityBounds exact_bounds(const SyntheticClassifier& classifier, double x, const LabelSet& truth, double sigma) {
  const auto e = exact_probability_enclosure(classifier, x, sigma);
  return ProbabilityBounds::from_values(classifier.num_labels(), classifier.k_prime(), truth, e.lower, e.upper);
}

LabelSet smoothed_topk_exact(const SyntheticClassifier& classifier, double center, double sigma, int k) {
  check_k(classifier, k);
  return top_by_probability(exact_label_probabilities(classifier, center, sigma), k);
}

AttackSweep exhaustive_attack(const SyntheticClassifier& classifier, double x, const LabelSet& truth,
                              const SmoothingConfig& config, double radius, double grid_step, unsigned threads) {
  if (classifier.dimension() != 1) throw ValidationError("exhaustive_attack requires a 1-D classifier");
  check_k(classifier, config.k);
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw ValidationError("radius must be finite and nonnegative");
  if (radius > 0.0 && !(grid_step > 0.0 && grid_step <= radius / 100.0 * (1.0 + 1e-12))) {
    throw ValidationError("grid_step must be positive and at most radius / 100");
  }

  std::vector<double> deltas{0.0};
  if (radius > 0.0) {
    const auto steps = static_cast<long>(std::floor(radius / grid_step));
    for (long m = 1; m <= steps; ++m) {
      const double delta = static_cast<double>(m) * grid_step;
      if (delta > radius) break;
      deltas.push_back(delta);
      deltas.push_back(-delta);
    }
    deltas.push_back(radius);
    deltas.push_back(-radius);
  }
  const IntervalPartition partition = partition_line(classifier);
  for (double b : partition.breakpoints) {
    const double delta = b - x;
    if (std::fabs(delta) <= radius) deltas.push_back(delta);
  }
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());

  std::vector<int> sizes(deltas.size());
  parallel_for(deltas.size(), threads, [&](std::size_t i) {
    const auto probs = exact_label_probabilities(partition, classifier.num_labels(), x + deltas[i], config.sigma);
    sizes[i] = intersection_size(truth, top_by_probability(probs, config.k));
  });

  // First minimum in ascending delta order.
  const auto worst = std::min_element(sizes.begin(), sizes.end());
  const auto idx = static_cast<std::size_t>(worst - sizes.begin());
  return {radius, grid_step, *worst, deltas[idx]};
}

AttackSweep random_attack(const SyntheticClassifier& classifier, const std::vector<double>& x, const LabelSet& truth,
                          const SmoothingConfig& config, double radius, int trials) {
  check_k(classifier, config.k);
  if (static_cast<int>(x.size()) != classifier.dimension()) throw ValidationError("point dimension mismatch");
  if (trials < 1) throw ValidationError("random_attack needs at least one trial");
  SequentialRng rng(config.seed, stream_id("random-attack"));
  const auto dim = x.size();
  AttackSweep out{radius, 0.0, std::numeric_limits<int>::max(), 0.0};
  for (int t = 0; t < trials; ++t) {
    std::vector<double> delta(dim);
    double norm = 0.0;
    for (double& v : delta) {
      v = rng.gaussian();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    // Alternate between the sphere and the interior of the ball.
    const double scale = (t % 2 == 0 ? radius : radius * rng.uniform()) / (norm > 0.0 ? norm : 1.0);
    SyntheticInput probe{"random-attack-" + std::to_string(t), x, truth};
    for (std::size_t j = 0; j < dim; ++j) {
      delta[j] *= scale;
      probe.point[j] += delta[j];
    }
    const auto inst = count_frequencies(classifier, probe, config);
    std::vector<double> freq(inst.counts.begin(), inst.counts.end());
    const int size = intersection_size(truth, top_by_probability(freq, config.k));
    if (size < out.worst_intersection) {
      out.worst_intersection = size;
      out.worst_delta = norm * scale;
    }
  }
  return out;
}

}  // namespace mlcert
