// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "btf/model.hpp"

namespace btf {

/// Gaussian-Wishart conditional for one mode's (mean, precision) given its
/// latent rows. With x̄ the row mean and S the row covariance (1/n scatter):
///   beta* = beta0 + n, nu* = nu0 + n, mu* = (beta0 mu0 + n x̄) / beta*,
///   W*^-1 = W0^-1 + n S + (beta0 n / beta*) (x̄ - mu0)(x̄ - mu0)^T,
///   precision ~ Wishart(W*, nu*), mean ~ N(mu*, (beta* precision)^-1).
/// Throws std::invalid_argument when `latents` has no rows.
ModeParams sample_mode_hyperparams(const LatentMatrix& latents, const Hyperprior& hyperprior,
                                   CounterRng& rng);

/// Posterior (precision, mean) of one entity's latent row given the other
/// two modes. Each observed cell contributes q = elementwise product of the
/// other modes' rows: precision = Lambda + alpha sum q q^T and
/// mean = precision^-1 (Lambda mu + alpha sum value q).
struct EntityConditional {
  Matrix precision;
  Vector mean;
  Cholesky factor;  // of `precision`, after any jitter
};
EntityConditional entity_conditional(const ModelState& state, const FiberIndex& index, Mode mode,
                                     std::size_t entity);

/// Redraws every latent row of `mode` from its conditional. Entity e draws
/// from stream (seed, sweep, Latents, mode, e), so any thread count gives
/// identical results.
void sample_mode_latents(ModelState& state, const FiberIndex& index, Mode mode, int threads = 1);

/// One sweep: for Target, Indication, Layer in that order, hyperparameters
/// then latent rows. Increments state.sweep first; all draws in the sweep
/// are keyed by the new value.
void gibbs_step(ModelState& state, const FiberIndex& index, int threads = 1);

/// Running mean of per-sample predictions over a fixed list of cells.
class PredictionAccumulator {
 public:
  explicit PredictionAccumulator(std::vector<Coord> cells);

  void add(const ModelState& state);
  int count() const { return count_; }
  const std::vector<Coord>& cells() const { return cells_; }
  /// Throws std::logic_error if no sample has been added.
  std::vector<double> means() const;

 private:
  std::vector<Coord> cells_;
  std::vector<double> sums_;
  int count_ = 0;
};

struct RunOptions {
  int threads = 1;
  /// Called after every sweep with (completed sweeps, total sweeps).
  std::function<void(int, int)> progress;
};

struct RunResult {
  std::vector<Coord> cells;
  std::vector<double> predictions;  // aligned with `cells`
  int retained = 0;
};

/// `burnin` discarded sweeps, then `samples` sweeps of which sweeps thin,
/// 2 thin, ... (1-based, counted after burn-in) are retained. Each query
/// cell's prediction is the mean of predict_cell over retained states.
/// Throws std::out_of_range for a query cell outside dims.
RunResult run(ModelState& state, const FiberIndex& index, const SamplerSchedule& schedule,
              std::span<const Coord> query_cells, const RunOptions& options = {});

}  // namespace btf
