// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mlcert/bounds.hpp"

namespace mlcert {

enum class CertifyMode {
  multiguard,           // both terms on each side of the condition
  multiguard_no_joint,  // ablation: single-label terms only
  baseline_per_label,   // each true label certified on its own
};

std::string_view mode_name(CertifyMode mode);
std::optional<CertifyMode> parse_mode(std::string_view name);

/// Guaranteed lower bound e on |L(x) & g_k(x + delta)| for every ||delta||_2 <= radius.
struct CertifiedResult {
  std::string instance_id;
  double radius = 0.0;
  int certified_size = 0;
  CertifyMode mode = CertifyMode::multiguard;
  int d = 0;
  int k = 0;
  // Binary search and the linear scan disagreed; the scan's answer is kept.
  bool search_mismatch = false;
};

/// Certification condition for intersection size e' at radius R:
///
///   max{ F(p_lo[a_e'], -r), max_u (k'/u) F(p_lo[A_u] / k', -r) }
///     > min{ F(p_hi[b_s], +r), min_v (k'/v) F(p_hi[B_v] / k', +r) }
///
/// with F(p, t) = Phi(Phi^-1(p) + t), r = R / sigma, s = k - e' + 1. The
/// comparison is strict. Without joint terms only the first entry of each
/// side is used. When fewer than s competitor labels exist the right side is 0.
bool condition_holds(const ProbabilityBounds& bounds, int e_prime, double radius, const SmoothingConfig& config,
                     bool use_joint_terms = true);

// Both sides of the condition, for diagnostics and tests.
struct ConditionSides {
  double lhs;
  double rhs;
};
ConditionSides condition_sides(const ProbabilityBounds& bounds, int e_prime, double radius,
                               const SmoothingConfig& config, bool use_joint_terms = true);

int certified_size_binary_search(const ProbabilityBounds& bounds, double radius, const SmoothingConfig& config,
                                 bool use_joint_terms = true);
int certified_size_linear_scan(const ProbabilityBounds& bounds, double radius, const SmoothingConfig& config,
                               bool use_joint_terms = true);

/// Largest e' in 1..min(d, k) satisfying the condition, else 0. Runs the
/// binary search and the linear scan; on disagreement the scan wins and the
/// result is flagged.
CertifiedResult certified_intersection_size(const ProbabilityBounds& bounds, double radius,
                                            const SmoothingConfig& config, bool use_joint_terms = true);

inline constexpr double kRadiusCapSigmas = 50.0;

/// Supremum R* such that the condition for `e_target` holds for all R < R*.
/// 0 if it fails at R = 0; +infinity if it still holds at 50 sigma.
double certified_radius(const ProbabilityBounds& bounds, int e_target, const SmoothingConfig& config,
                        bool use_joint_terms = true);

/// Per-label comparison method: each true label is certified alone (d = 1,
/// e' = 1) against every other label; e counts the labels that pass.
CertifiedResult baseline_per_label(const ProbabilityBounds& bounds, double radius, const SmoothingConfig& config);

/// Dispatch on mode.
CertifiedResult certify(const ProbabilityBounds& bounds, double radius, const SmoothingConfig& config,
                        CertifyMode mode);

}  // namespace mlcert
