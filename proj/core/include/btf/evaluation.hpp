// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "btf/gibbs.hpp"
#include "btf/metrics.hpp"

namespace btf {

struct EvalConfig {
  std::string model_name = "combined";
  int latent_dim = 32;
  double alpha = 5.0;
  SamplerSchedule schedule;
  std::optional<Hyperprior> hyperprior;  // defaults for latent_dim when empty
  double heldout_fraction = 0.2;
  double threshold = 0.5;
  std::uint32_t outcome_layer = 0;
  int threads = 1;
};

struct RepeatResult {
  std::uint64_t seed = 0;
  double auroc = 0.0;
  double f1 = 0.0;
  std::size_t heldout = 0;
};

struct EvalReport {
  std::string model_name;
  double auroc_mean = 0.0;
  double auroc_sd = 0.0;
  double f1_mean = 0.0;
  double f1_sd = 0.0;
  double imbalance = 0.0;  // positives / labels over the whole outcome layer
  int n_repeats = 0;
  double threshold = 0.5;
  std::vector<RepeatResult> repeats;
};

/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_sd(std::span<const double> values);

/// For each seed: stratified split of the outcome layer, Gibbs run on the
/// remaining cells (train outcomes + all evidence), predictions for the
/// held-out cells, AUROC and F1 against their labels. Reports mean and
/// sample SD across repeats. Requires seeds.size() == n_repeats >= 2.
EvalReport repeated_eval(const SparseTensor& tensor, const EvalConfig& config, int n_repeats,
                         std::span<const std::uint64_t> seeds);

/// One repeat of the protocol above.
RepeatResult evaluate_once(const SparseTensor& tensor, const EvalConfig& config,
                           std::uint64_t seed);

/// {"model", "auroc": {"mean","sd"}, "f1": {"mean","sd"}, "imbalance",
///  "n_repeats", "threshold"}.
nlohmann::json to_json(const EvalReport& report);

nlohmann::json to_json(const PhaseAnalysis& analysis);

}  // namespace btf
