// SPDX-License-Identifier: Apache-2.0
// mlcert: sample / certify / evaluate / verify.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mlcert/pipeline.hpp"

namespace {

void add_smoothing_flags(CLI::App* cmd, mlcert::RunConfig& cfg) {
  auto& s = cfg.smoothing;
  cmd->add_option("--sigma", s.sigma, "Gaussian noise standard deviation")->capture_default_str();
  cmd->add_option("--n", s.n, "Number of noisy samples")->capture_default_str();
  cmd->add_option("--alpha", s.alpha, "Overall failure probability of the bounds")->capture_default_str();
  cmd->add_option("--k-prime", s.k_prime, "Labels predicted by the base classifier")->capture_default_str();
  cmd->add_option("--k", s.k, "Labels predicted by the smoothed classifier")->capture_default_str();
  cmd->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores); output does not depend on it")
      ->capture_default_str();
}

void add_certify_flags(CLI::App* cmd, mlcert::RunConfig& cfg) {
  const std::map<std::string, mlcert::ModeSelection> modes{{"multiguard", mlcert::ModeSelection::multiguard},
                                                           {"baseline", mlcert::ModeSelection::baseline},
                                                           {"all", mlcert::ModeSelection::all}};
  cmd->add_option("--r-grid", cfg.radius_grid, "Radius grid start:stop:step")->capture_default_str();
  cmd->add_option("--mode", cfg.mode, "multiguard, baseline or all")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  cmd->add_flag("--no-joint-terms{false}", cfg.use_joint_terms, "Drop the joint (second) terms of the condition");
  cmd->add_flag("--strict-paper-cp", cfg.strict_paper_cp,
                "Upper bounds with Beta(1-a; n_j, n-n_j+1) instead of Clopper-Pearson");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified top-k robustness for Gaussian-smoothed multi-label classifiers"};
  app.set_version_flag("--version", mlcert::kVersion);
  app.require_subcommand(1);

  mlcert::RunConfig cfg;

  auto* sample = app.add_subcommand("sample", "Monte Carlo label counts for every input of a classifier spec");
  add_smoothing_flags(sample, cfg);
  sample->add_option("--classifier", cfg.classifier, "Classifier spec (JSON)")->required();
  sample->add_option("--out", cfg.out, "Counts file to write");

  auto* certify = app.add_subcommand("certify", "Certified intersection sizes over a radius grid");
  add_smoothing_flags(certify, cfg);
  add_certify_flags(certify, cfg);
  certify->add_option("--counts", cfg.counts, "Counts file")->required();
  certify->add_option("--out", cfg.out, "Results file to write");

  auto* evaluate = app.add_subcommand("evaluate", "Certified top-k precision/recall/f1 per radius");
  add_smoothing_flags(evaluate, cfg);
  add_certify_flags(evaluate, cfg);
  auto* results_opt = evaluate->add_option("--results", cfg.results, "Results file from certify");
  evaluate->add_option("--counts", cfg.counts, "Counts file (certify and evaluate in one step)")
      ->excludes(results_opt);
  evaluate->add_option("--out", cfg.out, "Metrics file to write");

  auto* verify = app.add_subcommand("verify", "Check certificates against an exhaustive 1-D attack");
  add_smoothing_flags(verify, cfg);
  add_certify_flags(verify, cfg);
  verify->add_option("--classifier", cfg.classifier, "1-D classifier spec; random instances when omitted");
  verify->add_option("--instances", cfg.instances, "Random instances when no classifier is given")
      ->capture_default_str();
  verify->add_option("--out", cfg.out, "Report file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : static_cast<int>(mlcert::ExitCode::usage);
  }

  mlcert::ExitCode code = mlcert::ExitCode::usage;
  if (*sample) code = mlcert::cmd_sample(cfg, std::cerr);
  if (*certify) code = mlcert::cmd_certify(cfg, std::cerr);
  if (*evaluate) code = mlcert::cmd_evaluate(cfg, std::cerr);
  if (*verify) code = mlcert::cmd_verify(cfg, std::cout, std::cerr);
  return static_cast<int>(code);
}
