// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "btf/sparse_tensor.hpp"

namespace btf {

// Tensor on disk: a TSV with header `i\tj\tk\tvalue` and a JSON sidecar
// {"dims": [n_i, n_j, n_k], "targets": [...], "indications": [...],
//  "layers": [...]} carrying the reverse sequence of each mode dictionary.

void save_tensor(const TensorBundle& bundle, const std::filesystem::path& tsv_path,
                 const std::filesystem::path& meta_path);

TensorBundle load_tensor(const std::filesystem::path& tsv_path,
                         const std::filesystem::path& meta_path);

/// `tensor.tsv` -> `tensor.meta.json`.
std::filesystem::path default_meta_path(const std::filesystem::path& tsv_path);

nlohmann::json tensor_metadata(const TensorBundle& bundle);

/// Bundle restricted to the given layers, with the layer dictionary
/// renumbered to match.
TensorBundle select_bundle_layers(const TensorBundle& bundle,
                                  std::span<const std::uint32_t> layers);

}  // namespace btf
