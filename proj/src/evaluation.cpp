// SPDX-License-Identifier: Apache-2.0
#include "mlcert/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "mlcert/errors.hpp"
#include "mlcert/parallel.hpp"

namespace mlcert {
namespace {

constexpr const char* kResultsHeader = "instance_id,mode,R,e,d,k";
constexpr const char* kMetricsHeader = "mode,R,precision,recall,f1,n";

double parse_double(const std::string& text, std::size_t line, const char* field) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw FormatError(line, std::string("bad ") + field + " '" + text + "'");
  return value;
}

int parse_int(const std::string& text, std::size_t line, const char* field) {
  int value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw FormatError(line, std::string("bad ") + field + " '" + text + "'");
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

InstanceMetrics instance_metrics(int e, int d, int k) {
  if (d < 1 || k < 1) throw ValidationError("d and k must be positive");
  if (e < 0 || e > std::min(d, k)) {
    throw ValidationError("certified size " + std::to_string(e) + " outside [0, min(d, k)]");
  }
  return {static_cast<double>(e) / k, static_cast<double>(e) / d, 2.0 * e / (d + k)};
}

std::vector<double> radius_grid(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || start < 0.0 || stop < start ||
      !(step > 0.0)) {
    throw ValidationError("radius grid needs 0 <= start <= stop and step > 0");
  }
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double r = std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9;
    if (r > stop + 1e-9) break;
    out.push_back(r);
  }
  return out;
}

std::vector<double> parse_radius_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(spec);
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw ValidationError("radius grid must be 'start:stop:step', got '" + spec + "'");
  try {
    return radius_grid(parse_double(parts[0], 0, "start"), parse_double(parts[1], 0, "stop"),
                       parse_double(parts[2], 0, "step"));
  } catch (const FormatError&) {
    throw ValidationError("radius grid must be 'start:stop:step', got '" + spec + "'");
  }
}

std::vector<CertifiedResult> certify_instances(const std::vector<CertificationInstance>& instances,
                                               const SmoothingConfig& config, const std::vector<double>& radii,
                                               const std::vector<CertifyMode>& modes, const CertifyOptions& options) {
  config.validate();
  if (!std::is_sorted(radii.begin(), radii.end())) throw ValidationError("radius grid must be ascending");
  std::vector<std::vector<CertifiedResult>> per_instance(instances.size());
  parallel_for(instances.size(), options.threads, [&](std::size_t i) {
    const auto& inst = instances[i];
    if (inst.k_prime != config.k_prime) {
      throw ValidationError("instance '" + inst.id + "' has k_prime=" + std::to_string(inst.k_prime) +
                            " but config has k_prime=" + std::to_string(config.k_prime));
    }
    if (config.k > inst.num_labels) throw ValidationError("instance '" + inst.id + "': k exceeds c");
    const ProbabilityBounds bounds = estimate_bounds(inst, config.alpha, options.interval);
    auto& out = per_instance[i];
    for (CertifyMode mode : modes) {
      for (double r : radii) {
        CertifiedResult res = certify(bounds, r, config, mode);
        res.instance_id = inst.id;
        out.push_back(std::move(res));
      }
    }
  });
  std::vector<CertifiedResult> all;
  for (auto& v : per_instance) std::move(v.begin(), v.end(), std::back_inserter(all));
  return all;
}

std::vector<MetricsRow> aggregate(const std::vector<CertifiedResult>& results) {
  if (results.empty()) throw ValidationError("no certified results to evaluate");
  struct Sum {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    int count = 0;
  };
  std::map<std::pair<int, double>, Sum> groups;
  for (const auto& r : results) {
    const InstanceMetrics m = instance_metrics(r.certified_size, r.d, r.k);
    auto& g = groups[{static_cast<int>(r.mode), r.radius}];
    g.precision += m.precision;
    g.recall += m.recall;
    g.f1 += m.f1;
    ++g.count;
  }
  std::vector<MetricsRow> rows;
  for (const auto& [key, g] : groups) {
    rows.push_back({static_cast<CertifyMode>(key.first), key.second, g.precision / g.count, g.recall / g.count,
                    g.f1 / g.count, g.count});
  }
  return rows;
}

std::vector<MetricsRow> sweep(const std::vector<CertificationInstance>& instances, const SmoothingConfig& config,
                              const std::vector<double>& radii, const std::vector<CertifyMode>& modes,
                              const CertifyOptions& options) {
  if (instances.empty()) throw ValidationError("sweep needs at least one instance");
  return aggregate(certify_instances(instances, config, radii, modes, options));
}

std::string format_radius(double radius) { return fixed6(radius); }

std::string format_results(const std::vector<CertifiedResult>& results, const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << "# " << c << '\n';
  out << kResultsHeader << '\n';
  for (const auto& r : results) {
    if (r.instance_id.find_first_of(",\n\r\"") != std::string::npos || r.instance_id.empty()) {
      throw ValidationError("instance id '" + r.instance_id + "' cannot be written to a results file");
    }
    out << r.instance_id << ',' << mode_name(r.mode) << ',' << format_radius(r.radius) << ',' << r.certified_size
        << ',' << r.d << ',' << r.k << '\n';
  }
  return out.str();
}

std::vector<CertifiedResult> parse_results(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<CertifiedResult> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kResultsHeader) throw FormatError(line_no, std::string("expected header '") + kResultsHeader + "'");
      header_seen = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 6) throw FormatError(line_no, "expected 6 fields");
    CertifiedResult r;
    r.instance_id = f[0];
    const auto mode = parse_mode(f[1]);
    if (!mode) throw FormatError(line_no, "unknown mode '" + f[1] + "'");
    r.mode = *mode;
    r.radius = parse_double(f[2], line_no, "R");
    r.certified_size = parse_int(f[3], line_no, "e");
    r.d = parse_int(f[4], line_no, "d");
    r.k = parse_int(f[5], line_no, "k");
    if (r.instance_id.empty()) throw FormatError(line_no, "empty instance id");
    if (!(r.radius >= 0.0)) throw FormatError(line_no, "negative radius");
    if (r.d < 1 || r.k < 1 || r.certified_size < 0 || r.certified_size > std::min(r.d, r.k)) {
      throw FormatError(line_no, "record '" + r.instance_id + "' violates 0 <= e <= min(d, k)");
    }
    out.push_back(std::move(r));
  }
  if (!header_seen) throw FormatError(line_no, "results file has no header row");
  return out;
}

std::string format_metrics(const std::vector<MetricsRow>& rows, const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << "# " << c << '\n';
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << mode_name(r.mode) << ',' << format_radius(r.radius) << ',' << fixed6(r.certified_precision) << ','
        << fixed6(r.certified_recall) << ',' << fixed6(r.certified_f1) << ',' << r.num_instances << '\n';
  }
  return out.str();
}

}  // namespace mlcert
