// SPDX-License-Identifier: Apache-2.0
#include "mlcert/certifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mlcert/errors.hpp"
#include "mlcert/numerics.hpp"

namespace mlcert {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Phi(Phi^-1(p) + shift) with p clamped into [0, 1].
double shifted(double p, double shift) {
  return gaussian_cdf(gaussian_quantile(std::clamp(p, 0.0, 1.0)) + shift);
}

void check_request(const ProbabilityBounds& bounds, int e_prime, double radius, const SmoothingConfig& config) {
  config.validate();
  if (config.k_prime != bounds.k_prime()) throw ValidationError("config k_prime does not match the bounds");
  if (e_prime < 1 || e_prime > std::min(bounds.d(), config.k)) {
    throw ValidationError("e' = " + std::to_string(e_prime) + " outside 1..min(d, k)");
  }
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw ValidationError("radius must be finite and nonnegative");
}

}  // namespace

std::string_view mode_name(CertifyMode mode) {
  switch (mode) {
    case CertifyMode::multiguard: return "multiguard";
    case CertifyMode::multiguard_no_joint: return "multiguard_no_joint";
    case CertifyMode::baseline_per_label: return "baseline_per_label";
  }
  return "unknown";
}

std::optional<CertifyMode> parse_mode(std::string_view name) {
  for (auto m : {CertifyMode::multiguard, CertifyMode::multiguard_no_joint, CertifyMode::baseline_per_label}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

ConditionSides condition_sides(const ProbabilityBounds& bounds, int e_prime, double radius,
                               const SmoothingConfig& config, bool use_joint_terms) {
  check_request(bounds, e_prime, radius, config);
  const double r = radius / config.sigma;
  const double kp = static_cast<double>(config.k_prime);
  const int d = bounds.d();
  const int s = config.k - e_prime + 1;

  double lhs = shifted(bounds.lower_sorted()[static_cast<std::size_t>(e_prime - 1)].value, -r);
  if (use_joint_terms) {
    for (int u = 1; u <= d - e_prime + 1; ++u) {
      lhs = std::max(lhs, kp / u * shifted(joint_lower_sum(bounds, e_prime, u) / kp, -r));
    }
  }

  if (s > bounds.num_others()) return {lhs, 0.0};
  double rhs = shifted(bounds.upper_sorted()[static_cast<std::size_t>(s - 1)].value, r);
  if (use_joint_terms) {
    for (int v = 1; v <= s; ++v) {
      rhs = std::min(rhs, kp / v * shifted(joint_upper_sum(bounds, e_prime, v, config.k, config.k_prime) / kp, r));
    }
  }
  return {lhs, rhs};
}

bool condition_holds(const ProbabilityBounds& bounds, int e_prime, double radius, const SmoothingConfig& config,
                     bool use_joint_terms) {
  const auto sides = condition_sides(bounds, e_prime, radius, config, use_joint_terms);
  return sides.lhs > sides.rhs;
}

int certified_size_binary_search(const ProbabilityBounds& bounds, double radius, const SmoothingConfig& config,
                                 bool use_joint_terms) {
  // Largest e' with the condition true, assuming true..true false..false.
  int lo = 0;
  int hi = std::min(bounds.d(), config.k);
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    if (condition_holds(bounds, mid, radius, config, use_joint_terms)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

int certified_size_linear_scan(const ProbabilityBounds& bounds, double radius, const SmoothingConfig& config,
                               bool use_joint_terms) {
  for (int e = std::min(bounds.d(), config.k); e >= 1; --e) {
    if (condition_holds(bounds, e, radius, config, use_joint_terms)) return e;
  }
  return 0;
}

CertifiedResult certified_intersection_size(const ProbabilityBounds& bounds, double radius,
                                            const SmoothingConfig& config, bool use_joint_terms) {
  CertifiedResult result;
  result.radius = radius;
  result.mode = use_joint_terms ? CertifyMode::multiguard : CertifyMode::multiguard_no_joint;
  result.d = bounds.d();
  result.k = config.k;
  const int binary = certified_size_binary_search(bounds, radius, config, use_joint_terms);
  const int linear = certified_size_linear_scan(bounds, radius, config, use_joint_terms);
  result.certified_size = linear;
  result.search_mismatch = binary != linear;
  return result;
}

double certified_radius(const ProbabilityBounds& bounds, int e_target, const SmoothingConfig& config,
                        bool use_joint_terms) {
  if (!condition_holds(bounds, e_target, 0.0, config, use_joint_terms)) return 0.0;
  const double cap = kRadiusCapSigmas * config.sigma;
  if (condition_holds(bounds, e_target, cap, config, use_joint_terms)) return kInf;
  // Condition is monotone in R: holds at lo, fails at hi.
  double lo = 0.0;
  double hi = cap;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (condition_holds(bounds, e_target, mid, config, use_joint_terms)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

CertifiedResult baseline_per_label(const ProbabilityBounds& bounds, double radius, const SmoothingConfig& config) {
  CertifiedResult result;
  result.radius = radius;
  result.mode = CertifyMode::baseline_per_label;
  result.d = bounds.d();
  result.k = config.k;
  int certified = 0;
  for (const auto& b : bounds.lower_sorted()) {
    const ProbabilityBounds single = bounds.restricted_to(b.label);
    if (condition_holds(single, 1, radius, config, true)) ++certified;
  }
  result.certified_size = std::min({certified, bounds.d(), config.k});
  return result;
}

CertifiedResult certify(const ProbabilityBounds& bounds, double radius, const SmoothingConfig& config,
                        CertifyMode mode) {
  switch (mode) {
    case CertifyMode::multiguard: return certified_intersection_size(bounds, radius, config, true);
    case CertifyMode::multiguard_no_joint: return certified_intersection_size(bounds, radius, config, false);
    case CertifyMode::baseline_per_label: return baseline_per_label(bounds, radius, config);
  }
  throw ValidationError("unknown certification mode");
}

}  // namespace mlcert
