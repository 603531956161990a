// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "btf/gibbs.hpp"

namespace btf {

struct CheckpointManifest {
  int latent_dim = 0;
  double alpha = 0.0;
  SamplerSchedule schedule;
  std::uint64_t seed = 0;
  int retained = 0;
  std::uint32_t sweep = 0;
  Dims dims;
};

nlohmann::json to_json(const CheckpointManifest& manifest);
CheckpointManifest manifest_from_json(const nlohmann::json& json);

/// Writes `dir/U.tsv`, `dir/V.tsv`, `dir/W.tsv` (one row per entity: the
/// entity identifier when `modes` is given, else its index, then D latent
/// values) and `dir/manifest.json`. Creates `dir` if needed.
void save_checkpoint(const std::filesystem::path& dir, const ModelState& state,
                     const SamplerSchedule& schedule, int retained,
                     const std::array<ModeIndex, kNumModes>* modes = nullptr);

struct Checkpoint {
  CheckpointManifest manifest;
  std::array<LatentMatrix, kNumModes> latents;
};

Checkpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace btf
