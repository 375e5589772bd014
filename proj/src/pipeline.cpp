// SPDX-License-Identifier: Apache-2.0
#include "mlcert/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mlcert/attack_verifier.hpp"
#include "mlcert/errors.hpp"
#include "mlcert/parallel.hpp"
#include "mlcert/rng.hpp"

namespace mlcert {
namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void require_path(const std::filesystem::path& path, const char* flag) {
  if (path.empty()) throw ValidationError(std::string("missing required ") + flag);
  if (!std::filesystem::exists(path)) throw IoError(std::string(flag) + " " + path.string() + " does not exist");
}

void check_writable(const std::filesystem::path& path) {
  const auto parent = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  if (!std::filesystem::is_directory(parent)) throw IoError("output directory " + parent.string() + " does not exist");
}

const char* selection_name(ModeSelection m) {
  switch (m) {
    case ModeSelection::multiguard: return "multiguard";
    case ModeSelection::baseline: return "baseline";
    case ModeSelection::all: return "all";
  }
  return "?";
}

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Fn>
ExitCode guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::io;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::validation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::validation;
  }
}

}  // namespace

std::vector<CertifyMode> selected_modes(const RunConfig& config) {
  const CertifyMode mg = config.use_joint_terms ? CertifyMode::multiguard : CertifyMode::multiguard_no_joint;
  switch (config.mode) {
    case ModeSelection::multiguard: return {mg};
    case ModeSelection::baseline: return {CertifyMode::baseline_per_label};
    case ModeSelection::all:
      return {CertifyMode::multiguard, CertifyMode::multiguard_no_joint, CertifyMode::baseline_per_label};
  }
  return {mg};
}

std::vector<std::string> provenance(const RunConfig& config, const std::string& command) {
  const auto& s = config.smoothing;
  std::vector<std::string> lines;
  lines.push_back(std::string("mlcert ") + kVersion + " " + command);
  lines.push_back("config sigma=" + real(s.sigma) + " n=" + std::to_string(s.n) + " alpha=" + real(s.alpha) +
                  " k_prime=" + std::to_string(s.k_prime) + " k=" + std::to_string(s.k) +
                  " seed=" + std::to_string(s.seed));
  lines.push_back("config r_grid=" + config.radius_grid + " mode=" + selection_name(config.mode) +
                  " joint_terms=" + (config.use_joint_terms ? "on" : "off") +
                  " interval=" + (config.strict_paper_cp ? "strict_paper" : "clopper_pearson"));
  std::string inputs = "inputs";
  if (!config.classifier.empty()) inputs += " classifier=" + config.classifier.filename().string();
  if (!config.counts.empty()) inputs += " counts=" + config.counts.filename().string();
  if (!config.results.empty()) inputs += " results=" + config.results.filename().string();
  if (command == "verify" && config.classifier.empty()) inputs += " random_instances=" + std::to_string(config.instances);
  lines.push_back(inputs);
  return lines;
}

std::filesystem::path default_output(const RunConfig& config, const std::string& command, const std::string& ext) {
  std::string canonical;
  for (const auto& line : provenance(config, command)) canonical += line + "\n";
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(stream_id(canonical)));
  return std::filesystem::path(command + "-" + hex + "." + ext);
}

ExitCode cmd_sample(const RunConfig& config, std::ostream& err) {
  return guarded(err, [&] {
    require_path(config.classifier, "--classifier");
    const auto out_path = config.out.empty() ? default_output(config, "sample", "jsonl") : config.out;
    check_writable(out_path);
    const ClassifierSpec spec = read_classifier_spec(config.classifier);
    if (spec.inputs.empty()) throw ValidationError("classifier spec lists no inputs to sample");
    config.smoothing.validate(spec.classifier.num_labels());

    std::vector<CertificationInstance> instances;
    instances.reserve(spec.inputs.size());
    for (const auto& input : spec.inputs) {
      instances.push_back(count_frequencies(spec.classifier, input, config.smoothing, config.threads));
    }
    write_counts_file(instances, out_path, provenance(config, "sample"));
    return ExitCode::ok;
  });
}

ExitCode cmd_certify(const RunConfig& config, std::ostream& err) {
  return guarded(err, [&] {
    require_path(config.counts, "--counts");
    const auto out_path = config.out.empty() ? default_output(config, "certify", "csv") : config.out;
    check_writable(out_path);
    config.smoothing.validate();
    const auto radii = parse_radius_grid(config.radius_grid);
    const auto instances = read_counts_file(config.counts);
    CertifyOptions options;
    options.interval = config.strict_paper_cp ? IntervalMethod::strict_paper : IntervalMethod::clopper_pearson;
    options.threads = config.threads;
    const auto results = certify_instances(instances, config.smoothing, radii, selected_modes(config), options);
    for (const auto& r : results) {
      if (r.search_mismatch) {
        err << "warning: instance '" << r.instance_id << "' R=" << format_radius(r.radius)
            << ": binary search disagreed with the linear scan; using the scan\n";
      }
    }
    write_text(out_path, format_results(results, provenance(config, "certify")));
    return ExitCode::ok;
  });
}

ExitCode cmd_evaluate(const RunConfig& config, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<MetricsRow> rows;
    if (!config.results.empty()) {
      require_path(config.results, "--results");
      check_writable(config.out.empty() ? default_output(config, "evaluate", "csv") : config.out);
      rows = aggregate(parse_results(read_text(config.results)));
    } else {
      require_path(config.counts, "--results or --counts");
      check_writable(config.out.empty() ? default_output(config, "evaluate", "csv") : config.out);
      CertifyOptions options;
      options.interval = config.strict_paper_cp ? IntervalMethod::strict_paper : IntervalMethod::clopper_pearson;
      options.threads = config.threads;
      rows = sweep(read_counts_file(config.counts), config.smoothing, parse_radius_grid(config.radius_grid),
                   selected_modes(config), options);
    }
    const auto out_path = config.out.empty() ? default_output(config, "evaluate", "csv") : config.out;
    write_text(out_path, format_metrics(rows, provenance(config, "evaluate")));
    return ExitCode::ok;
  });
}

ExitCode cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  bool sound = true;
  const ExitCode code = guarded(err, [&] {
    config.smoothing.validate();
    const auto radii = parse_radius_grid(config.radius_grid);

    std::vector<ClassifierSpec> specs;
    if (!config.classifier.empty()) {
      require_path(config.classifier, "--classifier");
      specs.push_back(read_classifier_spec(config.classifier));
      if (specs.back().classifier.dimension() != 1) throw ValidationError("verify needs a 1-D classifier");
      if (specs.back().inputs.empty()) throw ValidationError("classifier spec lists no inputs to verify");
    } else {
      if (config.instances < 1) throw ValidationError("--instances must be positive");
      RandomClassifierOptions opts;
      opts.sigma = config.smoothing.sigma;
      opts.min_labels = std::max(opts.min_labels, config.smoothing.k + 1);
      opts.max_labels = std::max(opts.max_labels, opts.min_labels);
      for (int i = 0; i < config.instances; ++i) {
        specs.push_back(random_synthetic_instance(config.smoothing.seed * 1000003ull + static_cast<std::uint64_t>(i), opts));
      }
    }

    struct Row {
      std::string id;
      double radius;
      int certified;
      int worst;
      double delta;
    };
    std::vector<std::vector<Row>> rows(specs.size());
    const bool joint = config.use_joint_terms;
    parallel_for(specs.size(), config.threads, [&](std::size_t i) {
      const auto& spec = specs[i];
      const auto partition = partition_line(spec.classifier);
      SmoothingConfig sc = config.smoothing;
      sc.k_prime = spec.classifier.k_prime();
      sc.validate(spec.classifier.num_labels());
      for (const auto& input : spec.inputs) {
        const auto enc = exact_probability_enclosure(partition, spec.classifier.num_labels(), input.point[0], sc.sigma);
        const auto bounds = ProbabilityBounds::from_values(spec.classifier.num_labels(), sc.k_prime, input.ground_truth,
                                                           enc.lower, enc.upper);
        for (double r : radii) {
          const int e = certified_intersection_size(bounds, r, sc, joint).certified_size;
          const auto sweep = exhaustive_attack(spec.classifier, input.point[0], input.ground_truth, sc, r,
                                               r > 0.0 ? r / 100.0 : 1.0);
          rows[i].push_back({input.id, r, e, sweep.worst_intersection, sweep.worst_delta});
        }
      }
    });

    std::ostringstream report;
    for (const auto& line : provenance(config, "verify")) report << "# " << line << '\n';
    report << "instance_id,R,certified_e,worst_intersection,worst_delta,status\n";
    std::size_t total = 0;
    std::size_t failures = 0;
    for (const auto& group : rows) {
      for (const auto& row : group) {
        const bool ok = row.worst >= row.certified;
        ++total;
        if (!ok) ++failures;
        char delta[64];
        std::snprintf(delta, sizeof delta, "%.9f", row.delta);
        report << row.id << ',' << format_radius(row.radius) << ',' << row.certified << ',' << row.worst << ','
               << delta << ',' << (ok ? "pass" : "FAIL") << '\n';
      }
    }
    if (config.out.empty()) {
      out << report.str();
    } else {
      check_writable(config.out);
      write_text(config.out, report.str());
    }
    err << "verify: " << (total - failures) << "/" << total << " (instance, R) checks sound\n";
    sound = failures == 0;
    return ExitCode::ok;
  });
  if (code != ExitCode::ok) return code;
  return sound ? ExitCode::ok : ExitCode::soundness;
}

}  // namespace mlcert
