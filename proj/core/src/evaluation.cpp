// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/evaluation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "btf/cell_split.hpp"

namespace btf {

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

RepeatResult evaluate_once(const SparseTensor& tensor, const EvalConfig& config,
                           std::uint64_t seed) {
  const auto split = split_cells(tensor, config.outcome_layer, config.heldout_fraction, seed);
  const FiberIndex train(remove_cells(tensor, split.heldout));
  const auto prior = config.hyperprior.value_or(Hyperprior::defaults(config.latent_dim));
  auto state = init_model(tensor.dims(), config.latent_dim, prior, config.alpha, seed);
  RunOptions options;
  options.threads = config.threads;
  const auto result = run(state, train, config.schedule, split.heldout, options);

  std::vector<int> labels;
  labels.reserve(split.heldout.size());
  for (const auto& c : split.heldout) labels.push_back(*tensor.lookup(c) >= 0.5 ? 1 : 0);

  RepeatResult repeat;
  repeat.seed = seed;
  repeat.auroc = auroc(result.predictions, labels);
  repeat.f1 = f1_score(result.predictions, labels, config.threshold);
  repeat.heldout = split.heldout.size();
  return repeat;
}

EvalReport repeated_eval(const SparseTensor& tensor, const EvalConfig& config, int n_repeats,
                         std::span<const std::uint64_t> seeds) {
  if (n_repeats < 2) throw std::invalid_argument("repeated_eval: n_repeats must be >= 2");
  if (seeds.size() != static_cast<std::size_t>(n_repeats)) {
    throw std::invalid_argument("repeated_eval: need one seed per repeat");
  }

  EvalReport report;
  report.model_name = config.model_name;
  report.n_repeats = n_repeats;
  report.threshold = config.threshold;

  std::vector<int> labels;
  for (const auto& e : tensor.layer_entries(config.outcome_layer)) {
    labels.push_back(e.value >= 0.5 ? 1 : 0);
  }
  report.imbalance = class_imbalance(labels);

  std::vector<double> aurocs, f1s;
  for (auto seed : seeds) {
    report.repeats.push_back(evaluate_once(tensor, config, seed));
    aurocs.push_back(report.repeats.back().auroc);
    f1s.push_back(report.repeats.back().f1);
  }
  report.auroc_mean = std::accumulate(aurocs.begin(), aurocs.end(), 0.0) / n_repeats;
  report.f1_mean = std::accumulate(f1s.begin(), f1s.end(), 0.0) / n_repeats;
  report.auroc_sd = sample_sd(aurocs);
  report.f1_sd = sample_sd(f1s);
  return report;
}

nlohmann::json to_json(const EvalReport& report) {
  return {
      {"model", report.model_name},
      {"auroc", {{"mean", report.auroc_mean}, {"sd", report.auroc_sd}}},
      {"f1", {{"mean", report.f1_mean}, {"sd", report.f1_sd}}},
      {"imbalance", report.imbalance},
      {"n_repeats", report.n_repeats},
      {"threshold", report.threshold},
  };
}

nlohmann::json to_json(const PhaseAnalysis& analysis) {
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& [phase, scores] : analysis.groups) {
    groups[std::to_string(phase)] = {{"n", scores.size()}, {"scores", scores}};
  }
  nlohmann::json pairwise = nlohmann::json::array();
  for (const auto& c : analysis.pairwise) {
    pairwise.push_back({{"phase_a", c.phase_a},
                        {"phase_b", c.phase_b},
                        {"U", c.u},
                        {"p_raw", c.p_raw},
                        {"p_corrected", c.p_corrected}});
  }
  nlohmann::json excluded = nlohmann::json::array();
  for (const auto& [phase, n] : analysis.excluded) {
    excluded.push_back({{"phase", phase}, {"n", n}, {"reason", "fewer than 2 members"}});
  }
  return {{"groups", groups},
          {"pairwise", pairwise},
          {"comparisons", analysis.pairwise.size()},
          {"excluded", excluded}};
}

}  // namespace btf
