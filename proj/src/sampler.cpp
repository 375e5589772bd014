// SPDX-License-Identifier: Apache-2.0
#include "mlcert/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mlcert/errors.hpp"
#include "mlcert/parallel.hpp"
#include "mlcert/rng.hpp"

namespace mlcert {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

// Fills `out` (dimension entries) with the noise vector of sample `index`.
void noise_vector(const GaussianStream& stream, std::uint64_t index, std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); j += 2) {
    const auto z = stream.pair(index, static_cast<std::uint32_t>(j / 2));
    out[j] = z[0];
    if (j + 1 < out.size()) out[j + 1] = z[1];
  }
}

CertificationInstance instance_from_json(const nlohmann::json& j) {
  CertificationInstance inst;
  inst.id = j.at("id").get<std::string>();
  inst.num_labels = j.at("c").get<int>();
  inst.k_prime = j.at("k_prime").get<int>();
  inst.n = j.at("n").get<std::int64_t>();
  inst.ground_truth = j.at("ground_truth").get<LabelSet>();
  inst.counts = j.at("counts").get<std::vector<std::int64_t>>();
  return inst;
}

}  // namespace

void SmoothingConfig::validate(int num_labels) const {
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be positive");
  require(n >= 1, "n must be at least 1");
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require(k_prime >= 1, "k_prime must be at least 1");
  require(k >= 1, "k must be at least 1");
  if (num_labels > 0) {
    require(k_prime <= num_labels, "k_prime exceeds the number of labels");
    require(k <= num_labels, "k exceeds the number of labels");
  }
}

void CertificationInstance::validate() const {
  const std::string where = "instance '" + id + "': ";
  require(!id.empty(), "instance id must be nonempty");
  require(num_labels >= 1, where + "c must be positive");
  require(k_prime >= 1 && k_prime <= num_labels, where + "k_prime must lie in [1, c]");
  require(n >= 1, where + "n must be positive");
  require(!ground_truth.empty(), where + "ground truth must be nonempty");
  require(std::is_sorted(ground_truth.begin(), ground_truth.end()) &&
              std::adjacent_find(ground_truth.begin(), ground_truth.end()) == ground_truth.end(),
          where + "ground truth must be sorted and duplicate-free");
  require(ground_truth.front() >= 0 && ground_truth.back() < num_labels, where + "ground truth label out of range");
  require(static_cast<int>(counts.size()) == num_labels, where + "counts must have c entries");
  std::int64_t total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    require(counts[i] >= 0 && counts[i] <= n,
            where + "count for label " + std::to_string(i) + " outside [0, n]: " + std::to_string(counts[i]));
    total += counts[i];
  }
  require(total == n * k_prime, where + "counts sum to " + std::to_string(total) + ", expected n*k_prime = " +
                                    std::to_string(n * k_prime));
}

std::vector<std::vector<double>> random_sample(std::span<const double> point, const SmoothingConfig& config,
                                               const std::string& instance_id) {
  config.validate();
  const GaussianStream stream(config.seed, stream_id(instance_id));
  std::vector<std::vector<double>> out(static_cast<std::size_t>(config.n), std::vector<double>(point.size()));
  for (std::int64_t t = 0; t < config.n; ++t) {
    auto& x = out[static_cast<std::size_t>(t)];
    noise_vector(stream, static_cast<std::uint64_t>(t), x);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = point[j] + config.sigma * x[j];
  }
  return out;
}

CertificationInstance count_frequencies(const SyntheticClassifier& classifier, const SyntheticInput& input,
                                        const SmoothingConfig& config, unsigned threads) {
  config.validate(classifier.num_labels());
  if (classifier.k_prime() != config.k_prime) {
    throw ValidationError("classifier predicts " + std::to_string(classifier.k_prime()) + " labels but config has k_prime=" +
                          std::to_string(config.k_prime));
  }
  if (static_cast<int>(input.point.size()) != classifier.dimension()) {
    throw ValidationError("input '" + input.id + "': point dimension does not match classifier");
  }

  const auto c = static_cast<std::size_t>(classifier.num_labels());
  const auto dim = static_cast<std::size_t>(classifier.dimension());
  const GaussianStream stream(config.seed, stream_id(input.id));

  // Integer counts per chunk, summed afterwards: addition order cannot change the result.
  const auto partial = parallel_chunks(static_cast<std::size_t>(config.n), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::int64_t> local(c, 0);
    std::vector<double> x(dim);
    for (std::size_t t = begin; t < end; ++t) {
      noise_vector(stream, t, x);
      for (std::size_t j = 0; j < dim; ++j) x[j] = input.point[j] + config.sigma * x[j];
      for (Label l : predict_topk(classifier, x)) ++local[static_cast<std::size_t>(l)];
    }
    return local;
  });

  CertificationInstance inst{input.id, classifier.num_labels(), classifier.k_prime(), config.n, input.ground_truth,
                             std::vector<std::int64_t>(c, 0)};
  for (const auto& local : partial) {
    for (std::size_t i = 0; i < c; ++i) inst.counts[i] += local[i];
  }
  inst.validate();
  return inst;
}

std::vector<CertificationInstance> parse_counts(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line != kCountsHeader) {
    throw FormatError(1, std::string("missing counts header '") + kCountsHeader + "'");
  }
  ++line_no;

  std::vector<CertificationInstance> out;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    CertificationInstance inst;
    try {
      inst = instance_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(line_no, std::string("malformed record: ") + e.what());
    }
    try {
      inst.validate();
    } catch (const ValidationError& e) {
      throw FormatError(line_no, e.what());
    }
    if (!seen.insert(inst.id).second) throw FormatError(line_no, "duplicate id '" + inst.id + "'");
    out.push_back(std::move(inst));
  }
  return out;
}

std::string format_counts(const std::vector<CertificationInstance>& instances, const std::vector<std::string>& comments) {
  std::ostringstream out;
  out << kCountsHeader << '\n';
  for (const auto& c : comments) out << "# " << c << '\n';
  for (const auto& inst : instances) {
    inst.validate();
    nlohmann::ordered_json j;
    j["id"] = inst.id;
    j["c"] = inst.num_labels;
    j["k_prime"] = inst.k_prime;
    j["n"] = inst.n;
    j["ground_truth"] = inst.ground_truth;
    j["counts"] = inst.counts;
    out << j.dump() << '\n';
  }
  return out.str();
}

std::vector<CertificationInstance> read_counts_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open counts file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_counts(buf.str());
}

void write_counts_file(const std::vector<CertificationInstance>& instances, const std::filesystem::path& path,
                       const std::vector<std::string>& comments) {
  const std::string text = format_counts(instances, comments);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write counts file " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mlcert
