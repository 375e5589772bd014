// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "../oracles.hpp"
#include "mlcert/attack_verifier.hpp"
#include "mlcert/bounds.hpp"
#include "mlcert/certifier.hpp"
#include "mlcert/evaluation.hpp"
#include "mlcert/numerics.hpp"
#include "mlcert/pipeline.hpp"

namespace fs = std::filesystem;
using namespace mlcert;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void run(int id, const char* name, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// P(X >= observed) for X ~ Binomial(trials, p).
double upper_tail(int observed, int trials, double p) {
  if (observed <= 0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::binomial(trials, p), observed - 1));
}

SmoothingConfig config_with(int k_prime, int k, double sigma = 0.5) {
  SmoothingConfig c;
  c.k_prime = k_prime;
  c.k = k;
  c.sigma = sigma;
  return c;
}

ClassifierSpec random_instance(std::uint64_t seed, int k) {
  RandomClassifierOptions opts;
  opts.min_labels = std::max(opts.min_labels, k + 1);
  return random_synthetic_instance(seed, opts);
}

// Random bounds for search and monotonicity checks.
struct RandomBounds {
  std::mt19937_64 gen;
  std::uniform_real_distribution<double> u{0.0, 1.0};

  explicit RandomBounds(std::uint64_t seed) : gen(seed) {}

  std::pair<ProbabilityBounds, SmoothingConfig> next() {
    const int c = std::uniform_int_distribution<int>(2, 12)(gen);
    const int kp = std::uniform_int_distribution<int>(1, std::max(1, c / 2))(gen);
    const int d = std::uniform_int_distribution<int>(1, c - 1)(gen);
    const int k = std::uniform_int_distribution<int>(1, c)(gen);
    std::vector<double> w(c);
    double total = 0.0;
    for (double& v : w) total += (v = std::pow(u(gen), 3.0));
    std::vector<double> lo(c), hi(c);
    for (int l = 0; l < c; ++l) {
      const double p = std::min(1.0, kp * w[l] / total);
      lo[l] = std::max(0.0, p - 0.1 * u(gen));
      hi[l] = std::min(1.0, p + 0.1 * u(gen));
    }
    LabelSet truth(d);
    for (int l = 0; l < d; ++l) truth[l] = l;
    std::shuffle(lo.begin(), lo.end(), gen);
    return {ProbabilityBounds::from_values(c, kp, truth, lo, hi), config_with(kp, k, 0.25 + 0.5 * u(gen))};
  }
};

Outcome cohen_reduction() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const boost::math::normal standard;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    // Upper bounds above 1 - lower are tightened to 1 - lower by the joint
    // terms, so draw hi < lo <= 1 - hi.
    const double hi = 0.5 * (0.001 + 0.998 * u(gen));
    const double lo = hi + (1.0 - 2.0 * hi) * (0.01 + 0.99 * u(gen));
    const double sigma = 0.05 + 2.0 * u(gen);
    const double want = sigma * (boost::math::quantile(standard, lo) - boost::math::quantile(standard, hi)) / 2;
    const auto b = ProbabilityBounds::from_values(2, 1, {0}, {lo, 0.0}, {1.0, hi});
    worst = std::max(worst, std::fabs(certified_radius(b, 1, config_with(1, 1, sigma)) - want));
  }
  const double secs = elapsed(t0);
  return {worst <= 1e-5 && secs < 1.0, fmt("200 cases, max |R - closed form| = %.2e, %.3f s", worst, secs)};
}

Outcome soundness_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto radii = parse_radius_grid(kDefaultRadiusGrid);
  long pairs = 0;
  long violations = 0;
  long nontrivial = 0;
  for (int i = 0; i < 1000; ++i) {
    const int k = 1 + i % 3;
    const auto spec = random_instance(900000 + i, k);
    const auto& in = spec.inputs[0];
    const auto c = config_with(spec.classifier.k_prime(), k);
    const auto b = exact_bounds(spec.classifier, in.point[0], in.ground_truth, c.sigma);
    for (double r : radii) {
      const int e = certified_intersection_size(b, r, c).certified_size;
      const int worst =
          exhaustive_attack(spec.classifier, in.point[0], in.ground_truth, c, r, r > 0 ? r / 100 : 1.0).worst_intersection;
      ++pairs;
      if (worst < e) ++violations;
      if (r > 0 && e > 0) ++nontrivial;
    }
  }
  const double secs = elapsed(t0);
  return {violations == 0 && nontrivial > 0 && secs < 120.0,
          fmt("1000 instances, %ld (instance, R) pairs, %ld violations, %ld nonzero certificates at R > 0", pairs,
              violations, nontrivial)};
}

Outcome statistical_soundness() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto radii = parse_radius_grid(kDefaultRadiusGrid);
  const int runs = 500;
  const double alpha = 0.05;
  int bad_runs = 0;
  long pairs = 0;
  long bad_pairs = 0;
  for (int i = 0; i < runs; ++i) {
    const int k = 1 + i % 3;
    const auto spec = random_instance(700000 + i, k);
    const auto& in = spec.inputs[0];
    SmoothingConfig c = config_with(spec.classifier.k_prime(), k);
    c.n = 1000;
    c.alpha = alpha;
    c.seed = 31 + i;
    const auto b = estimate_bounds(count_frequencies(spec.classifier, in, c), alpha);
    bool bad = false;
    for (double r : radii) {
      const int e = certified_intersection_size(b, r, c).certified_size;
      const int worst =
          exhaustive_attack(spec.classifier, in.point[0], in.ground_truth, c, r, r > 0 ? r / 100 : 1.0).worst_intersection;
      ++pairs;
      if (worst < e) {
        ++bad_pairs;
        bad = true;
      }
    }
    bad_runs += bad;
  }
  const double p_value = upper_tail(bad_runs, runs, alpha);
  const double pair_rate = static_cast<double>(bad_pairs) / pairs;
  const double secs = elapsed(t0);
  return {p_value >= 0.01 && pair_rate <= alpha && secs < 600.0,
          fmt("%d/%d runs with a violation, (instance, R) violation rate %.4f, one-sided p = %.3g", bad_runs, runs,
              pair_rate, p_value)};
}

Outcome coverage() {
  const auto spec = random_instance(4242, 3);
  const auto& in = spec.inputs[0];
  const int c_labels = spec.classifier.num_labels();
  const auto probs = exact_label_probabilities(spec.classifier, in.point[0], 0.5);
  const int runs = 500;
  const double alpha = 0.05;
  int misses = 0;
  for (int i = 0; i < runs; ++i) {
    SmoothingConfig c = config_with(spec.classifier.k_prime(), 3);
    c.n = 1000;
    c.alpha = alpha;
    c.seed = 5000 + i;
    const auto b = estimate_bounds(count_frequencies(spec.classifier, in, c), alpha);
    bool covered = true;
    for (const auto& x : b.lower_sorted()) covered = covered && x.value <= probs[x.label];
    for (const auto& x : b.upper_sorted()) covered = covered && probs[x.label] <= x.value;
    misses += !covered;
  }
  const double p_value = upper_tail(misses, runs, alpha);
  return {p_value >= 0.01, fmt("c = %d, %d/%d runs not simultaneously covered, empirical coverage %.3f, p = %.3g",
                               c_labels, misses, runs, 1.0 - static_cast<double>(misses) / runs, p_value)};
}

Outcome ablation_dominance() {
  const auto radii = parse_radius_grid(kDefaultRadiusGrid);
  long strict = 0;
  long violations = 0;
  for (int i = 0; i < 500; ++i) {
    const auto spec = random_instance(300000 + i, 3);
    SmoothingConfig c = config_with(spec.classifier.k_prime(), 3);
    c.seed = i;
    const auto b = estimate_bounds(count_frequencies(spec.classifier, spec.inputs[0], c), c.alpha);
    for (double r : radii) {
      const int joint = certified_intersection_size(b, r, c, true).certified_size;
      const int plain = certified_intersection_size(b, r, c, false).certified_size;
      if (joint < plain) ++violations;
      if (joint > plain) ++strict;
    }
  }
  return {violations == 0 && strict > 0,
          fmt("500 instances x %zu radii, %ld violations, %ld strict improvements", radii.size(), violations, strict)};
}

// Two true labels that split the region right of the origin: label 0 wins on
// (0, a), label 1 beyond a, label 2 left of 0. Each true label alone is close
// to its partner; together they almost surely keep one of them on top.
Outcome baseline_gap() {
  std::vector<CertificationInstance> insts;
  for (int i = 0; i < 40; ++i) {
    const double x = 0.6 + 0.01 * i;
    const double a = x + 0.05 * std::sin(i);
    const SyntheticClassifier cls(1, 1, {{{1.0}, 0.0}, {{2.0}, -a}, {{-1.0}, 0.0}});
    SmoothingConfig c = config_with(1, 1);
    c.seed = 100 + i;
    insts.push_back(count_frequencies(cls, {"pair-" + std::to_string(i), {x}, {0, 1}}, c));
  }
  SmoothingConfig c = config_with(1, 1);
  const auto radii = parse_radius_grid(kDefaultRadiusGrid);
  const auto rows = sweep(insts, c, radii, {CertifyMode::multiguard, CertifyMode::baseline_per_label});
  double best_gap = 0.0;
  double at = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double gap = rows[i].certified_recall - rows[radii.size() + i].certified_recall;
    if (radii[i] > 0 && gap > best_gap) {
      best_gap = gap;
      at = radii[i];
    }
  }
  return {best_gap > 0.0, fmt("40 instances, d = 2, k = 1; largest recall gap %.3f at R = %.2f", best_gap, at)};
}

Outcome search_agreement() {
  RandomBounds rb(77);
  std::mt19937_64 gen(78);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto [b, c] = rb.next();
    const double r = u(gen);
    for (bool joint : {true, false}) {
      mismatches += certified_size_binary_search(b, r, c, joint) != certified_size_linear_scan(b, r, c, joint);
    }
  }
  return {mismatches == 0, fmt("10000 bound vectors, both condition variants, %d mismatches", mismatches)};
}

Outcome monotonicity() {
  int radius_violations = 0;
  RandomBounds rb(91);
  for (int i = 0; i < 1000; ++i) {
    const auto [b, c] = rb.next();
    int prev = 1 << 30;
    for (double r = 0.0; r <= 2.0 + 1e-9; r += 0.05) {
      const int e = certified_intersection_size(b, r, c).certified_size;
      radius_violations += e > prev;
      prev = e;
    }
  }

  int curve_violations = 0;
  const auto radii = parse_radius_grid(kDefaultRadiusGrid);
  for (int i = 0; i < 1000; ++i) {
    std::vector<CertificationInstance> insts;
    SmoothingConfig c = config_with(1, 1 + i % 3);
    c.n = 200;
    c.seed = i;
    RandomClassifierOptions opts;
    opts.min_labels = c.k + 1;
    opts.max_k_prime = 1;
    for (int j = 0; j < 3; ++j) {
      const auto spec = random_synthetic_instance(100000 + 3 * i + j, opts);
      insts.push_back(count_frequencies(spec.classifier, spec.inputs[0], c));
    }
    const auto rows = sweep(insts, c, radii, {CertifyMode::multiguard, CertifyMode::baseline_per_label});
    for (std::size_t j = 1; j < rows.size(); ++j) {
      if (rows[j].mode != rows[j - 1].mode) continue;
      curve_violations += rows[j].certified_precision > rows[j - 1].certified_precision ||
                          rows[j].certified_recall > rows[j - 1].certified_recall ||
                          rows[j].certified_f1 > rows[j - 1].certified_f1;
    }
  }

  int bound_violations = 0;
  std::mt19937_64 gen(5);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t n = std::uniform_int_distribution<std::int64_t>(1, 100000)(gen);
    std::int64_t a = std::uniform_int_distribution<std::int64_t>(0, n)(gen);
    std::int64_t b = std::uniform_int_distribution<std::int64_t>(0, n)(gen);
    if (a > b) std::swap(a, b);
    const double level = std::pow(10.0, -std::uniform_real_distribution<double>(1.0, 5.0)(gen));
    bound_violations += clopper_pearson_lower(a, n, level) > clopper_pearson_lower(b, n, level);
    bound_violations += clopper_pearson_upper(a, n, level) > clopper_pearson_upper(b, n, level);
  }
  return {radius_violations + curve_violations + bound_violations == 0,
          fmt("violations: e vs R %d/1000 cases, metric curves %d/1000 datasets, bounds vs counts %d/1000 pairs",
              radius_violations, curve_violations, bound_violations)};
}

Outcome numerics() {
  double round_trip = 0.0;
  for (int i = 1; i < 100000; ++i) {
    const double p = i / 100000.0;
    round_trip = std::max(round_trip, std::fabs(gaussian_cdf(gaussian_quantile(p)) - p));
  }
  double duality = 0.0;
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = 1.0 + 1000.0 * u(gen);
    const double b = 1.0 + 1000.0 * u(gen);
    const double q = 1e-6 + (1 - 2e-6) * u(gen);
    duality = std::max(duality, std::fabs(regularized_incomplete_beta(beta_quantile(q, a, b), a, b) - q));
  }
  const double z975 = gaussian_quantile(0.975);
  const double ref = std::max({std::fabs(z975 - 1.959964), std::fabs(z975 - oracle::phi_inverse(0.975)),
                               std::fabs(gaussian_cdf(1.959964) - oracle::phi(1.959964)),
                               std::fabs(regularized_incomplete_beta(0.2, 3, 8) -
                                         oracle::incomplete_beta(0.2, 3.0, 8.0))});
  return {round_trip <= 1e-9 && duality <= 1e-8 && ref <= 1e-6,
          fmt("round trip %.2e, beta duality %.2e, reference values %.2e (Phi^-1(0.975) = %.9f)", round_trip, duality,
              ref, z975)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "mlcert-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream err;
  RunConfig sample;
  sample.classifier = fs::path(MLCERT_TEST_DATA) / "classifier.json";
  sample.smoothing.n = 5000;
  sample.smoothing.seed = 99;
  std::vector<std::string> counts_files;
  for (unsigned threads : {1u, 1u, 4u}) {
    sample.threads = threads;
    sample.out = dir / ("counts-" + std::to_string(counts_files.size()) + ".jsonl");
    if (cmd_sample(sample, err) != ExitCode::ok) return {false, "sample failed: " + err.str()};
    counts_files.push_back(slurp(sample.out));
  }
  RunConfig certify;
  certify.counts = dir / "counts-0.jsonl";
  certify.mode = ModeSelection::all;
  certify.smoothing.seed = 99;
  std::vector<std::string> results_files;
  for (unsigned threads : {1u, 1u, 4u}) {
    certify.threads = threads;
    certify.out = dir / ("results-" + std::to_string(results_files.size()) + ".csv");
    if (cmd_certify(certify, err) != ExitCode::ok) return {false, "certify failed: " + err.str()};
    results_files.push_back(slurp(certify.out));
  }
  fs::remove_all(dir);
  const bool same_counts = counts_files[0] == counts_files[1] && counts_files[0] == counts_files[2];
  const bool same_results = results_files[0] == results_files[1] && results_files[0] == results_files[2];
  return {same_counts && same_results && !counts_files[0].empty() && !results_files[0].empty(),
          fmt("sample %s, certify %s (two runs at 1 thread, one at 4)", same_counts ? "identical" : "DIFFERENT",
              same_results ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  run(1, "Cohen reduction", cohen_reduction);
  run(2, "soundness oracle", soundness_oracle);
  run(3, "statistical soundness", statistical_soundness);
  run(4, "Clopper-Pearson simultaneous coverage", coverage);
  run(5, "ablation dominance", ablation_dominance);
  run(6, "baseline gap", baseline_gap);
  run(7, "binary search vs linear scan", search_agreement);
  run(8, "monotonicity", monotonicity);
  run(9, "numerics", numerics);
  run(10, "determinism", determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
