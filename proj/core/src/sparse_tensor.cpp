// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/sparse_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace btf {
namespace {

std::string describe(const Coord& c) {
  return "(" + std::to_string(c.i) + "," + std::to_string(c.j) + "," + std::to_string(c.k) + ")";
}

}  // namespace

SparseTensor::SparseTensor(Dims dims) : dims_(dims) {
  if (dims.targets == 0 || dims.indications == 0 || dims.layers == 0) {
    throw std::invalid_argument("tensor dims must be positive");
  }
  constexpr auto kMaxIndex = std::numeric_limits<std::uint32_t>::max();
  if (dims.targets > kMaxIndex || dims.indications > kMaxIndex || dims.layers > kMaxIndex) {
    throw std::invalid_argument("tensor dims exceed 32-bit index range");
  }
}

void SparseTensor::insert(Coord at, double value) {
  if (!dims_.contains(at)) throw std::out_of_range("coordinate out of range: " + describe(at));
  if (!std::isfinite(value)) {
    throw std::invalid_argument("non-finite value at " + describe(at));
  }
  if (value < 0.0 || value > 1.0) {
    throw std::invalid_argument("value outside [0,1] at " + describe(at));
  }
  auto [it, inserted] = lookup_.emplace(key(at), static_cast<std::uint32_t>(entries_.size()));
  if (!inserted) throw std::invalid_argument("duplicate coordinate " + describe(at));
  entries_.push_back({at, value});
}

std::optional<double> SparseTensor::lookup(Coord at) const {
  if (!dims_.contains(at)) return std::nullopt;
  auto it = lookup_.find(key(at));
  if (it == lookup_.end()) return std::nullopt;
  return entries_[it->second].value;
}

double SparseTensor::density() const {
  const auto cells = dims_.cells();
  return cells == 0 ? 0.0 : static_cast<double>(entries_.size()) / static_cast<double>(cells);
}

std::vector<Entry> SparseTensor::layer_entries(std::uint32_t layer) const {
  std::vector<Entry> out;
  for (const auto& e : entries_) {
    if (e.at.k == layer) out.push_back(e);
  }
  return out;
}

SparseTensor remove_cells(const SparseTensor& tensor, std::span<const Coord> cells) {
  std::set<Coord> drop(cells.begin(), cells.end());
  SparseTensor out(tensor.dims());
  for (const auto& e : tensor.entries()) {
    if (!drop.contains(e.at)) out.insert(e.at, e.value);
  }
  return out;
}

SparseTensor select_layers(const SparseTensor& tensor, std::span<const std::uint32_t> layers) {
  if (layers.empty()) throw std::invalid_argument("select_layers: no layers selected");
  std::vector<std::int64_t> remap(tensor.dims().layers, -1);
  for (std::size_t pos = 0; pos < layers.size(); ++pos) {
    const auto layer = layers[pos];
    if (layer >= tensor.dims().layers) throw std::out_of_range("select_layers: layer out of range");
    if (remap[layer] >= 0) throw std::invalid_argument("select_layers: duplicate layer");
    remap[layer] = static_cast<std::int64_t>(pos);
  }
  Dims dims = tensor.dims();
  dims.layers = layers.size();
  SparseTensor out(dims);
  for (const auto& e : tensor.entries()) {
    if (remap[e.at.k] < 0) continue;
    out.insert({e.at.i, e.at.j, static_cast<std::uint32_t>(remap[e.at.k])}, e.value);
  }
  return out;
}

FiberIndex::FiberIndex(const SparseTensor& tensor)
    : dims_(tensor.dims()), entries_(tensor.entries().begin(), tensor.entries().end()) {
  // Entries sorted by coordinate make every fiber list ascending and the
  // layout independent of insertion order.
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.at < b.at; });
  for (std::size_t m = 0; m < kNumModes; ++m) {
    const auto mode = static_cast<Mode>(m);
    const std::size_t n = dims_[mode];
    auto& offsets = offsets_[m];
    offsets.assign(n + 1, 0);
    for (const auto& e : entries_) ++offsets[e.at[mode] + 1];
    for (std::size_t e = 0; e < n; ++e) offsets[e + 1] += offsets[e];
    auto cursor = offsets;
    auto& members = members_[m];
    members.resize(entries_.size());
    for (std::uint32_t pos = 0; pos < entries_.size(); ++pos) {
      members[cursor[entries_[pos].at[mode]]++] = pos;
    }
  }
}

std::span<const std::uint32_t> FiberIndex::fiber(Mode mode, std::size_t entity) const {
  const auto m = static_cast<std::size_t>(mode);
  const auto& offsets = offsets_[m];
  if (entity + 1 >= offsets.size()) throw std::out_of_range("fiber entity out of range");
  return std::span<const std::uint32_t>(members_[m]).subspan(
      offsets[entity], offsets[entity + 1] - offsets[entity]);
}

}  // namespace btf
