// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/model.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace btf {

Hyperprior Hyperprior::defaults(int latent_dim) {
  if (latent_dim < 1) throw std::invalid_argument("latent dimension must be >= 1");
  Hyperprior prior;
  prior.mean = Vector::Zero(latent_dim);
  prior.beta = 2.0;
  prior.scale = Matrix::Identity(latent_dim, latent_dim);
  prior.dof = latent_dim;
  return prior;
}

void Hyperprior::validate() const {
  const auto d = mean.size();
  if (d < 1) throw std::invalid_argument("hyperprior: empty mean");
  if (scale.rows() != d || scale.cols() != d) throw std::invalid_argument("hyperprior: scale shape");
  if (!(beta > 0.0)) throw std::invalid_argument("hyperprior: beta must be > 0");
  if (dof < static_cast<double>(d)) throw std::invalid_argument("hyperprior: dof must be >= D");
  if (!is_spd(scale)) throw std::invalid_argument("hyperprior: scale matrix not SPD");
}

void SamplerSchedule::validate() const {
  if (burnin < 0) throw std::invalid_argument("schedule: burnin must be >= 0");
  if (thin < 1) throw std::invalid_argument("schedule: thin must be >= 1");
  if (samples < thin) throw std::invalid_argument("schedule: samples must be >= thin");
}

ModelState init_model(const Dims& dims, int latent_dim, const Hyperprior& hyperprior,
                      double alpha, std::uint64_t seed) {
  if (latent_dim < 1) throw std::invalid_argument("latent dimension must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (dims.targets == 0 || dims.indications == 0 || dims.layers == 0) {
    throw std::invalid_argument("init_model: dims must be positive");
  }
  if (hyperprior.mean.size() != latent_dim) {
    throw std::invalid_argument("hyperprior dimension does not match latent dimension");
  }
  hyperprior.validate();

  ModelState state;
  state.hyperprior = hyperprior;
  state.alpha = alpha;
  state.latent_dim = latent_dim;
  state.seed = seed;
  for (std::size_t m = 0; m < kNumModes; ++m) {
    const auto n = static_cast<Eigen::Index>(dims[static_cast<Mode>(m)]);
    auto& factor = state.latents[m];
    factor.resize(n, latent_dim);
    for (Eigen::Index e = 0; e < n; ++e) {
      CounterRng rng(seed, 0, StreamPurpose::Init, static_cast<std::uint32_t>(m),
                     static_cast<std::uint32_t>(e));
      std::normal_distribution<double> normal;
      for (int d = 0; d < latent_dim; ++d) factor(e, d) = normal(rng);
    }
    state.params[m] = {hyperprior.mean, Matrix::Identity(latent_dim, latent_dim)};
  }
  return state;
}

double raw_score(const ModelState& state, const Coord& at) {
  const auto& u = state.latents[0];
  const auto& v = state.latents[1];
  const auto& w = state.latents[2];
  double sum = 0.0;
  for (int d = 0; d < state.latent_dim; ++d) sum += u(at.i, d) * v(at.j, d) * w(at.k, d);
  return sum;
}

double predict_cell(const ModelState& state, const Coord& at) {
  if (!state.dims().contains(at)) throw std::out_of_range("predict_cell: coordinate out of range");
  return std::clamp(raw_score(state, at), 0.0, 1.0);
}

}  // namespace btf
