// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mlcert/synthetic_model.hpp"

namespace mlcert {

/// Certification hyperparameters. Defaults are the standard experimental
/// setting (alpha = 0.001, n = 1000, sigma = 0.5, k' = 1, k = 3).
struct SmoothingConfig {
  double sigma = 0.5;
  std::int64_t n = 1000;
  double alpha = 0.001;
  int k_prime = 1;
  int k = 3;
  std::uint64_t seed = 0;

  // Throws ValidationError. `num_labels` <= 0 skips the checks against c.
  void validate(int num_labels = 0) const;
};

/// Label frequencies for one input: counts[i] is how many of the n noisy
/// copies had label i among the base classifier's k' predictions.
struct CertificationInstance {
  std::string id;
  int num_labels = 0;
  int k_prime = 0;
  std::int64_t n = 0;
  LabelSet ground_truth;
  std::vector<std::int64_t> counts;

  int d() const noexcept { return static_cast<int>(ground_truth.size()); }
  void validate() const;

  friend bool operator==(const CertificationInstance&, const CertificationInstance&) = default;
};

/// n copies of `point` with i.i.d. N(0, sigma^2 I) noise. Sample t is a pure
/// function of (config.seed, instance_id, t).
std::vector<std::vector<double>> random_sample(std::span<const double> point, const SmoothingConfig& config,
                                               const std::string& instance_id);

/// Monte Carlo label frequencies. Splits the samples over `threads` workers
/// (0 = hardware concurrency); the result does not depend on the split.
CertificationInstance count_frequencies(const SyntheticClassifier& classifier, const SyntheticInput& input,
                                        const SmoothingConfig& config, unsigned threads = 1);

// Counts file: first line "# mlcert-counts v1", then any number of "#"
// comment lines, then one JSON object per line with keys
// id, c, k_prime, n, ground_truth, counts.
inline constexpr const char* kCountsHeader = "# mlcert-counts v1";

std::vector<CertificationInstance> parse_counts(const std::string& text);
std::string format_counts(const std::vector<CertificationInstance>& instances,
                          const std::vector<std::string>& comments = {});

std::vector<CertificationInstance> read_counts_file(const std::filesystem::path& path);
void write_counts_file(const std::vector<CertificationInstance>& instances, const std::filesystem::path& path,
                       const std::vector<std::string>& comments = {});

}  // namespace mlcert
