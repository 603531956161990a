// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "btf/sparse_tensor.hpp"

namespace btf {

struct CellSplit {
  std::vector<Coord> train;    // sorted
  std::vector<Coord> heldout;  // sorted
  std::uint64_t seed = 0;
};

/// Stratified hold-out of the entries in one layer. A cell with value >= 0.5
/// is a positive. Each class contributes floor(fraction * n_class + 0.5)
/// cells, chosen by a seeded Fisher-Yates shuffle of the class members in
/// coordinate order (see `shuffle_stream`).
///
/// Throws std::invalid_argument if the fraction is outside (0,1) or the layer
/// is out of range, and "insufficient class members" when either class has
/// fewer than two entries.
CellSplit split_cells(const SparseTensor& tensor, std::uint32_t layer,
                      double heldout_fraction, std::uint64_t seed);

/// Number of held-out members for a class of size n (round half up).
std::size_t heldout_count(std::size_t n, double fraction);

/// Stream purposes used by split_cells; exposed so tests can replay the draw.
inline constexpr std::uint32_t kSplitStreamPositive = 1;
inline constexpr std::uint32_t kSplitStreamNegative = 0;

}  // namespace btf
