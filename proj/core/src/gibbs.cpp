// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/gibbs.hpp"

#include <exception>
#include <mutex>
#include <stdexcept>

namespace btf {

ModeParams sample_mode_hyperparams(const LatentMatrix& latents, const Hyperprior& hyperprior,
                                   CounterRng& rng) {
  const auto n = latents.rows();
  if (n < 1) throw std::invalid_argument("sample_mode_hyperparams: mode has no entities");
  const auto d = latents.cols();
  if (hyperprior.mean.size() != d) throw std::invalid_argument("hyperprior dimension mismatch");

  const double count = static_cast<double>(n);
  const Vector row_mean = latents.colwise().mean().transpose();
  const Matrix centered = latents.rowwise() - row_mean.transpose();
  const Matrix scatter = centered.transpose() * centered;  // n * S

  const double beta_post = hyperprior.beta + count;
  const double dof_post = hyperprior.dof + count;
  const Vector mean_post = (hyperprior.beta * hyperprior.mean + count * row_mean) / beta_post;

  const Matrix identity = Matrix::Identity(d, d);
  const Matrix scale_inv = cholesky_spd(hyperprior.scale, "scale matrix not SPD").solve(identity);
  const Vector shift = row_mean - hyperprior.mean;
  Matrix scale_post_inv =
      scale_inv + scatter + (hyperprior.beta * count / beta_post) * (shift * shift.transpose());
  scale_post_inv = 0.5 * (scale_post_inv + scale_post_inv.transpose());
  Matrix scale_post = cholesky_spd(scale_post_inv, "scale matrix not SPD").solve(identity);
  scale_post = 0.5 * (scale_post + scale_post.transpose());

  ModeParams params;
  params.precision = sample_wishart(scale_post, dof_post, rng);
  params.mean = sample_mvn(mean_post, Matrix(beta_post * params.precision), rng);
  return params;
}

namespace {

// The two modes other than `mode`, in index order.
std::pair<Mode, Mode> other_modes(Mode mode) {
  switch (mode) {
    case Mode::Target: return {Mode::Indication, Mode::Layer};
    case Mode::Indication: return {Mode::Target, Mode::Layer};
    case Mode::Layer: return {Mode::Target, Mode::Indication};
  }
  throw std::logic_error("bad mode");
}

}  // namespace

EntityConditional entity_conditional(const ModelState& state, const FiberIndex& index, Mode mode,
                                     std::size_t entity) {
  const auto& params = state.params[static_cast<std::size_t>(mode)];
  const auto [mode_a, mode_b] = other_modes(mode);
  const auto& factor_a = state.factor(mode_a);
  const auto& factor_b = state.factor(mode_b);
  const auto fiber = index.fiber(mode, entity);
  const auto entries = index.entries();
  const auto d = static_cast<Eigen::Index>(state.latent_dim);

  EntityConditional cond;
  cond.precision = params.precision;
  Vector rhs = params.precision * params.mean;
  if (!fiber.empty()) {
    Matrix q(static_cast<Eigen::Index>(fiber.size()), d);
    Vector values(static_cast<Eigen::Index>(fiber.size()));
    for (std::size_t r = 0; r < fiber.size(); ++r) {
      const auto& e = entries[fiber[r]];
      q.row(static_cast<Eigen::Index>(r)) =
          factor_a.row(e.at[mode_a]).cwiseProduct(factor_b.row(e.at[mode_b]));
      values(static_cast<Eigen::Index>(r)) = e.value;
    }
    cond.precision.selfadjointView<Eigen::Lower>().rankUpdate(q.transpose(), state.alpha);
    cond.precision.triangularView<Eigen::StrictlyUpper>() = cond.precision.transpose();
    rhs.noalias() += state.alpha * (q.transpose() * values);
  }
  cond.factor = cholesky_spd(cond.precision, "precision not SPD");
  cond.mean = cond.factor.solve(rhs);
  return cond;
}

void sample_mode_latents(ModelState& state, const FiberIndex& index, Mode mode, int threads) {
  if (!(index.dims() == state.dims())) throw std::invalid_argument("tensor dims do not match model");
  auto& factor = state.factor(mode);
  const auto n = static_cast<long>(factor.rows());
  const auto m = static_cast<std::uint32_t>(mode);

  std::exception_ptr failure;
  std::mutex failure_lock;
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads > 0 ? threads : 1)
  for (long e = 0; e < n; ++e) {
    try {
      const auto cond = entity_conditional(state, index, mode, static_cast<std::size_t>(e));
      CounterRng rng(state.seed, state.sweep, StreamPurpose::Latents, m,
                     static_cast<std::uint32_t>(e));
      factor.row(e) = sample_mvn(cond.mean, cond.factor, rng).transpose();
    } catch (...) {
      std::lock_guard lock(failure_lock);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void gibbs_step(ModelState& state, const FiberIndex& index, int threads) {
  ++state.sweep;
  for (std::size_t m = 0; m < kNumModes; ++m) {
    const auto mode = static_cast<Mode>(m);
    CounterRng rng(state.seed, state.sweep, StreamPurpose::Hyperparams,
                   static_cast<std::uint32_t>(m), 0);
    state.params[m] = sample_mode_hyperparams(state.latents[m], state.hyperprior, rng);
    sample_mode_latents(state, index, mode, threads);
  }
}

PredictionAccumulator::PredictionAccumulator(std::vector<Coord> cells)
    : cells_(std::move(cells)), sums_(cells_.size(), 0.0) {}

void PredictionAccumulator::add(const ModelState& state) {
  for (std::size_t c = 0; c < cells_.size(); ++c) sums_[c] += predict_cell(state, cells_[c]);
  ++count_;
}

std::vector<double> PredictionAccumulator::means() const {
  if (count_ == 0) throw std::logic_error("no retained samples");
  std::vector<double> out(sums_.size());
  for (std::size_t c = 0; c < sums_.size(); ++c) out[c] = sums_[c] / count_;
  return out;
}

RunResult run(ModelState& state, const FiberIndex& index, const SamplerSchedule& schedule,
              std::span<const Coord> query_cells, const RunOptions& options) {
  schedule.validate();
  const auto dims = state.dims();
  if (!(index.dims() == dims)) throw std::invalid_argument("tensor dims do not match model");
  for (const auto& c : query_cells) {
    if (!dims.contains(c)) throw std::out_of_range("query cell out of range");
  }

  PredictionAccumulator acc(std::vector<Coord>(query_cells.begin(), query_cells.end()));
  const int total = schedule.burnin + schedule.samples;
  for (int sweep = 1; sweep <= total; ++sweep) {
    gibbs_step(state, index, options.threads);
    const int kept_sweep = sweep - schedule.burnin;
    if (kept_sweep > 0 && kept_sweep % schedule.thin == 0) acc.add(state);
    if (options.progress) options.progress(sweep, total);
  }

  RunResult result;
  result.retained = acc.count();
  result.predictions = acc.means();
  result.cells = acc.cells();
  return result;
}

}  // namespace btf
