// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mlcert/certifier.hpp"

namespace mlcert {

struct InstanceMetrics {
  double precision;  // e / k
  double recall;     // e / d
  double f1;         // 2e / (d + k)
};

InstanceMetrics instance_metrics(int e, int d, int k);

struct MetricsRow {
  CertifyMode mode;
  double radius;
  double certified_precision;
  double certified_recall;
  double certified_f1;
  int num_instances;
};

/// Evenly spaced radii start, start + step, ..., up to stop (inclusive within
/// rounding), each rounded to 1e-9 so values survive a decimal round trip.
std::vector<double> radius_grid(double start, double stop, double step);

/// Parses "start:stop:step".
std::vector<double> parse_radius_grid(const std::string& spec);

inline constexpr const char* kDefaultRadiusGrid = "0:2:0.05";

struct CertifyOptions {
  IntervalMethod interval = IntervalMethod::clopper_pearson;
  unsigned threads = 1;
};

/// Certified results for every instance, mode, and radius, ordered by
/// (instance, mode, radius). Bounds are estimated once per instance.
std::vector<CertifiedResult> certify_instances(const std::vector<CertificationInstance>& instances,
                                               const SmoothingConfig& config, const std::vector<double>& radii,
                                               const std::vector<CertifyMode>& modes, const CertifyOptions& options = {});

/// Per-(mode, radius) averages, sorted by mode then radius. Throws on empty input.
std::vector<MetricsRow> aggregate(const std::vector<CertifiedResult>& results);

/// certify_instances followed by aggregate.
std::vector<MetricsRow> sweep(const std::vector<CertificationInstance>& instances, const SmoothingConfig& config,
                              const std::vector<double>& radii, const std::vector<CertifyMode>& modes,
                              const CertifyOptions& options = {});

// Results file: "#" comment lines, then the header
// "instance_id,mode,R,e,d,k" and one row per result.
std::string format_results(const std::vector<CertifiedResult>& results, const std::vector<std::string>& comments = {});
std::vector<CertifiedResult> parse_results(const std::string& text);

// Metrics file: "#" comment lines, header "mode,R,precision,recall,f1,n".
std::string format_metrics(const std::vector<MetricsRow>& rows, const std::vector<std::string>& comments = {});

std::string format_radius(double radius);

}  // namespace mlcert
