// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace btf {
namespace {

// Sub-stream tags under StreamPurpose::Simulate.
enum : std::uint32_t { kLatentStream = 0, kNoiseStream = 4, kMaskStream = 5 };

// Zero-padded so lexicographic index order equals generation order.
std::string padded_id(const char* prefix, std::size_t n, std::size_t count) {
  const auto width = std::to_string(count > 0 ? count - 1 : 0).size();
  auto digits = std::to_string(n);
  return prefix + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

void SynthConfig::validate() const {
  if (dims.targets == 0 || dims.indications == 0 || dims.layers == 0) {
    throw std::invalid_argument("synth: dims must be positive");
  }
  if (rank < 1) throw std::invalid_argument("synth: rank must be >= 1");
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("synth: noise_sd must be >= 0");
  if (!(observed_fraction > 0.0 && observed_fraction <= 1.0)) {
    throw std::invalid_argument("synth: observed_fraction must lie in (0,1]");
  }
  if (!(coupling >= 0.0 && coupling <= 1.0)) throw std::invalid_argument("synth: coupling must lie in [0,1]");
}

std::size_t SynthData::flat(const Coord& c) const {
  const auto& d = bundle.tensor.dims();
  return (static_cast<std::size_t>(c.i) * d.indications + c.j) * d.layers + c.k;
}
double SynthData::truth_at(const Coord& c) const { return truth.at(flat(c)); }
bool SynthData::is_observed(const Coord& c) const { return observed.at(flat(c)) != 0; }

SynthData generate(const SynthConfig& config) {
  config.validate();
  const auto& dims = config.dims;
  const int rank = config.rank;
  const double sd = std::pow(static_cast<double>(rank), -0.25);

  SynthData data;
  auto draw_rows = [&](std::uint32_t mode, std::size_t n) {
    LatentMatrix rows(static_cast<Eigen::Index>(n), rank);
    for (std::size_t e = 0; e < n; ++e) {
      CounterRng rng(config.seed, 0, StreamPurpose::Simulate, kLatentStream + mode,
                     static_cast<std::uint32_t>(e));
      std::normal_distribution<double> normal(0.0, sd);
      for (int r = 0; r < rank; ++r) rows(static_cast<Eigen::Index>(e), r) = normal(rng);
    }
    return rows;
  };
  data.latents[0] = draw_rows(0, dims.targets);
  data.latents[1] = draw_rows(1, dims.indications);
  const LatentMatrix independent = draw_rows(2, dims.layers);
  auto& layer_rows = data.latents[2];
  layer_rows = independent;
  for (Eigen::Index k = 1; k < layer_rows.rows(); ++k) {
    layer_rows.row(k) = config.coupling * independent.row(0) +
                        (1.0 - config.coupling) * independent.row(k);
  }

  std::vector<std::string> targets, indications, layers;
  for (std::size_t i = 0; i < dims.targets; ++i) targets.push_back(padded_id("T", i, dims.targets));
  for (std::size_t j = 0; j < dims.indications; ++j) {
    indications.push_back(padded_id("I", j, dims.indications));
  }
  layers.push_back("outcome");
  for (std::size_t k = 1; k < dims.layers; ++k) layers.push_back("evidence" + std::to_string(k));
  data.bundle.modes[0] = ModeIndex::build(Mode::Target, targets);
  data.bundle.modes[1] = ModeIndex::build(Mode::Indication, indications);
  data.bundle.modes[2] = ModeIndex::ordered(Mode::Layer, layers);

  data.bundle.tensor = SparseTensor(dims);
  data.truth.assign(dims.cells(), 0.0);
  data.observed.assign(dims.cells(), 0);
  const auto& u = data.latents[0];
  const auto& v = data.latents[1];

  for (std::uint32_t i = 0; i < dims.targets; ++i) {
    CounterRng noise_rng(config.seed, 0, StreamPurpose::Simulate, kNoiseStream, i);
    CounterRng mask_rng(config.seed, 0, StreamPurpose::Simulate, kMaskStream, i);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::uint32_t j = 0; j < dims.indications; ++j) {
      for (std::uint32_t k = 0; k < dims.layers; ++k) {
        const Coord at{i, j, k};
        const double raw = (u.row(i).cwiseProduct(v.row(j))).dot(layer_rows.row(k));
        const double eps = noise(noise_rng) * config.noise_sd;
        const bool seen = coin(mask_rng) < config.observed_fraction;
        const auto idx = data.flat(at);
        data.truth[idx] = std::clamp(raw, 0.0, 1.0);
        if (!seen) continue;
        data.observed[idx] = 1;
        double value = std::clamp(raw + eps, 0.0, 1.0);
        if (config.binarize_outcome && k == 0) value = value >= 0.5 ? 1.0 : 0.0;
        data.bundle.tensor.insert(at, value);
      }
    }
  }
  return data;
}

}  // namespace btf
