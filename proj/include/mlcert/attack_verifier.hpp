// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mlcert/bounds.hpp"
#include "mlcert/sampler.hpp"

namespace mlcert {

struct AttackSweep {
  double radius = 0.0;
  double grid_step = 0.0;
  int worst_intersection = 0;
  double worst_delta = 0.0;
};

/// Bounds from the outward-rounded exact probabilities of a 1-D classifier,
/// the sharpest bounds a certificate can soundly use.
ProbabilityBounds exact_bounds(const SyntheticClassifier& classifier, double x, const LabelSet& truth, double sigma);

/// Top-k labels of the exactly computed smoothed classifier at `center`
/// (1-D only), ties to the smaller label index.
LabelSet smoothed_topk_exact(const SyntheticClassifier& classifier, double center, double sigma, int k);

/// Minimum of |truth & g_k(x + delta)| over |delta| <= radius for a 1-D
/// classifier, evaluating the smoothed prediction exactly at every point of
/// the grid {m * grid_step : |m * grid_step| <= radius}, at +-radius, and at
/// every partition breakpoint that falls inside the ball. Requires
/// grid_step <= radius / 100 when radius > 0.
AttackSweep exhaustive_attack(const SyntheticClassifier& classifier, double x, const LabelSet& truth,
                              const SmoothingConfig& config, double radius, double grid_step, unsigned threads = 1);

/// Randomized (non-exhaustive) sweep for classifiers of any dimension:
/// `trials` perturbations on the sphere of the given radius and inside the
/// ball, smoothed prediction estimated by Monte Carlo with config.n samples.
/// Weaker than the exact 1-D sweep; an upper bound on the true minimum.
/// worst_delta reports the norm of the worst perturbation.
AttackSweep random_attack(const SyntheticClassifier& classifier, const std::vector<double>& x, const LabelSet& truth,
                          const SmoothingConfig& config, double radius, int trials);

}  // namespace mlcert
