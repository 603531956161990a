// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "btf/model.hpp"
#include "btf/sparse_tensor.hpp"

namespace btf {

struct SynthConfig {
  Dims dims{50, 40, 4};
  int rank = 8;
  double noise_sd = 0.1;
  double observed_fraction = 0.2;
  std::uint64_t seed = 0;
  /// 0 = evidence-layer vectors independent of the outcome layer's,
  /// 1 = identical to it.
  double coupling = 0.5;
  /// Threshold observed outcome-layer (k = 0) values at 0.5 into 0/1 labels.
  bool binarize_outcome = false;

  /// Throws std::invalid_argument unless rank >= 1, noise_sd >= 0,
  /// 0 < observed_fraction <= 1 and 0 <= coupling <= 1.
  void validate() const;
};

struct SynthData {
  TensorBundle bundle;             // layer names: outcome, evidence1, ...
  std::vector<double> truth;       // dense, index (i * n_j + j) * n_k + k, clipped to [0,1]
  std::vector<char> observed;      // same indexing
  std::array<LatentMatrix, kNumModes> latents;

  double truth_at(const Coord& c) const;
  bool is_observed(const Coord& c) const;
  std::size_t flat(const Coord& c) const;
};

/// Latent rows ~ N(0, variance 1/sqrt(R)). Layer 0 gets an independent
/// draw z0; evidence layer k gets coupling * z0 + (1 - coupling) * zk.
/// Ground truth = clip(sum_r u v w, 0, 1); an observed cell's value is
/// clip(truth_raw + N(0, noise_sd), 0, 1). Each cell is observed
/// independently with probability observed_fraction.
SynthData generate(const SynthConfig& config);

}  // namespace btf
