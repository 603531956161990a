// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace btf::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kDataError = 2, kNumericalError = 3 };

struct IngestOptions {
  std::filesystem::path rare_disease, gene_burden, gwas, outcomes, xref;
  std::vector<std::string> layers{"all"};
  double l2g_threshold = 0.5;
  std::vector<std::string> confidence{"definitive", "strong"};
  std::filesystem::path out_dir;
};

struct ModelOptions {
  int latent_dim = 32;
  double alpha = 5.0;
  int burnin = 500;
  int samples = 3500;
  int thin = 350;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct TrainOptions {
  std::filesystem::path tensor, meta, out_dir;
  std::vector<std::string> layers{"all"};
  std::string query = "all";  // all | observed | unobserved (outcome layer)
  bool holdout = false;
  double heldout_fraction = 0.2;
  ModelOptions model;
};

struct EvaluateOptions {
  std::filesystem::path tensor, meta, out;
  std::vector<std::string> models;  // empty: each evidence layer alone, then combined
  int n_repeats = 10;
  std::vector<std::uint64_t> seeds;  // empty: seed, seed+1, ...
  double heldout_fraction = 0.2;
  double threshold = 0.5;
  ModelOptions model;
};

struct PhaseOptions {
  std::filesystem::path predictions, pairs, out_dir;
};

struct SimulateOptions {
  std::size_t targets = 50, indications = 40, layers = 4;
  int rank = 8;
  double noise_sd = 0.1;
  double observed_fraction = 0.2;
  double coupling = 0.5;
  bool binarize_outcome = false;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
};

void cmd_ingest(const IngestOptions& options, std::ostream& log);
void cmd_train(const TrainOptions& options, std::ostream& log);
void cmd_evaluate(const EvaluateOptions& options, std::ostream& log);
void cmd_phase(const PhaseOptions& options, std::ostream& log);
void cmd_simulate(const SimulateOptions& options, std::ostream& log);

/// Parses argv, dispatches, and maps failures onto exit codes: usage
/// errors 1, data errors 2, numerical errors 3.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace btf::cli
