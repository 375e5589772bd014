// SPDX-License-Identifier: Apache-2.0
#pragma once

// End-to-end subcommands behind the mlcert executable. Each stage reads its
// inputs from files only and writes one self-describing output file whose
// leading "#" lines record the version and full configuration.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mlcert/evaluation.hpp"

namespace mlcert {

inline constexpr const char* kVersion = "0.1.0";

enum class ExitCode : int {
  ok = 0,
  usage = 1,
  validation = 2,
  soundness = 3,
  io = 4,
};

enum class ModeSelection { multiguard, baseline, all };

struct RunConfig {
  SmoothingConfig smoothing;
  std::string radius_grid = kDefaultRadiusGrid;
  ModeSelection mode = ModeSelection::multiguard;
  bool use_joint_terms = true;
  bool strict_paper_cp = false;
  std::filesystem::path classifier;
  std::filesystem::path counts;
  std::filesystem::path results;
  std::filesystem::path out;
  unsigned threads = 1;
  // verify without --classifier: number of random 1-D instances.
  int instances = 100;
};

std::vector<CertifyMode> selected_modes(const RunConfig& config);

/// Provenance lines written as comments at the top of every output file.
std::vector<std::string> provenance(const RunConfig& config, const std::string& command);

/// Default output name "<prefix>-<16 hex digits of the config hash>.<ext>".
std::filesystem::path default_output(const RunConfig& config, const std::string& command, const std::string& ext);

// Each returns the process exit code and reports problems on `err`.
ExitCode cmd_sample(const RunConfig& config, std::ostream& err);
ExitCode cmd_certify(const RunConfig& config, std::ostream& err);
ExitCode cmd_evaluate(const RunConfig& config, std::ostream& err);
ExitCode cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mlcert
