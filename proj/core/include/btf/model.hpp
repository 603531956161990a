// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

#include "btf/distributions.hpp"
#include "btf/sparse_tensor.hpp"

namespace btf {

/// Latent rows are entities; row-major so each entity's vector is contiguous.
using LatentMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Gaussian-Wishart hyperprior shared by the three modes.
struct Hyperprior {
  Vector mean;        // mu0
  double beta = 2.0;  // beta0, confidence in `mean`
  Matrix scale;       // W0, SPD
  double dof = 0.0;   // nu0 >= D

  /// mu0 = 0, beta0 = 2, W0 = I, nu0 = D.
  static Hyperprior defaults(int latent_dim);

  /// Throws std::invalid_argument unless shapes agree, beta > 0, dof >= D
  /// and scale is SPD.
  void validate() const;
};

/// Per-mode Gaussian prior on latent rows.
struct ModeParams {
  Vector mean;
  Matrix precision;
};

struct ModelState {
  std::array<LatentMatrix, kNumModes> latents;
  std::array<ModeParams, kNumModes> params;
  Hyperprior hyperprior;
  double alpha = 5.0;  // observation precision
  int latent_dim = 32;
  std::uint64_t seed = 0;
  std::uint32_t sweep = 0;  // completed Gibbs sweeps

  const LatentMatrix& factor(Mode m) const { return latents[static_cast<std::size_t>(m)]; }
  LatentMatrix& factor(Mode m) { return latents[static_cast<std::size_t>(m)]; }
  Dims dims() const {
    return {static_cast<std::size_t>(latents[0].rows()), static_cast<std::size_t>(latents[1].rows()),
            static_cast<std::size_t>(latents[2].rows())};
  }
};

/// Latents i.i.d. N(0,1), one counter stream per (mode, entity); mode means
/// set to the hyperprior mean and precisions to the identity.
ModelState init_model(const Dims& dims, int latent_dim, const Hyperprior& hyperprior,
                      double alpha, std::uint64_t seed);

/// sum_d U[i,d] V[j,d] W[k,d], unclamped.
double raw_score(const ModelState& state, const Coord& at);

/// raw_score clamped into [0,1]. Throws std::out_of_range outside dims.
double predict_cell(const ModelState& state, const Coord& at);

struct SamplerSchedule {
  int burnin = 500;
  int samples = 3500;
  int thin = 350;

  /// floor(samples / thin).
  int retained() const { return thin > 0 ? samples / thin : 0; }
  /// Throws std::invalid_argument unless burnin >= 0 and 1 <= thin <= samples.
  void validate() const;
};

}  // namespace btf
