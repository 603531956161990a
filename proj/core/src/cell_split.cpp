// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/cell_split.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "btf/random.hpp"

namespace btf {
namespace {

void shuffle(std::vector<Coord>& items, CounterRng& rng) {
  for (std::size_t n = items.size(); n > 1; --n) {
    const auto pick = uniform_index(rng, static_cast<std::uint32_t>(n));
    std::swap(items[n - 1], items[pick]);
  }
}

}  // namespace

std::size_t heldout_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
}

CellSplit split_cells(const SparseTensor& tensor, std::uint32_t layer, double heldout_fraction,
                      std::uint64_t seed) {
  if (!(heldout_fraction > 0.0 && heldout_fraction < 1.0)) {
    throw std::invalid_argument("heldout_fraction must lie in (0,1)");
  }
  if (layer >= tensor.dims().layers) throw std::invalid_argument("layer out of range");

  std::vector<Coord> positives, negatives;
  for (const auto& e : tensor.entries()) {
    if (e.at.k != layer) continue;
    (e.value >= 0.5 ? positives : negatives).push_back(e.at);
  }
  if (positives.size() < 2 || negatives.size() < 2) {
    throw std::invalid_argument("insufficient class members");
  }

  CellSplit split;
  split.seed = seed;
  auto draw = [&](std::vector<Coord>& members, std::uint32_t stream) {
    std::sort(members.begin(), members.end());
    CounterRng rng(seed, 0, StreamPurpose::Split, stream, layer);
    shuffle(members, rng);
    const auto take = heldout_count(members.size(), heldout_fraction);
    split.heldout.insert(split.heldout.end(), members.begin(), members.begin() + take);
    split.train.insert(split.train.end(), members.begin() + take, members.end());
  };
  draw(positives, kSplitStreamPositive);
  draw(negatives, kSplitStreamNegative);
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.heldout.begin(), split.heldout.end());
  return split;
}

}  // namespace btf
