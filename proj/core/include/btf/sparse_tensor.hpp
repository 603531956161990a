// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "btf/mode_index.hpp"

namespace btf {

struct Coord {
  std::uint32_t i = 0;  // target
  std::uint32_t j = 0;  // indication
  std::uint32_t k = 0;  // layer

  std::uint32_t operator[](Mode m) const {
    return m == Mode::Target ? i : (m == Mode::Indication ? j : k);
  }
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

struct Entry {
  Coord at;
  double value = 0.0;
};

struct Dims {
  std::size_t targets = 0;
  std::size_t indications = 0;
  std::size_t layers = 0;

  std::size_t operator[](Mode m) const {
    return m == Mode::Target ? targets : (m == Mode::Indication ? indications : layers);
  }
  std::size_t cells() const { return targets * indications * layers; }
  bool contains(const Coord& c) const {
    return c.i < targets && c.j < indications && c.k < layers;
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Coordinate-format rank-3 observation set. Values live in [0,1]; each
/// coordinate appears at most once.
class SparseTensor {
 public:
  SparseTensor() = default;
  explicit SparseTensor(Dims dims);

  /// Throws std::out_of_range for a coordinate outside dims,
  /// std::invalid_argument for a duplicate coordinate or a value that is
  /// non-finite or outside [0,1].
  void insert(Coord at, double value);

  std::optional<double> lookup(Coord at) const;
  bool contains(Coord at) const { return lookup_.contains(key(at)); }

  const Dims& dims() const { return dims_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double density() const;

  /// Entries whose layer coordinate equals `layer`, in insertion order.
  std::vector<Entry> layer_entries(std::uint32_t layer) const;

 private:
  std::uint64_t key(const Coord& c) const {
    return (static_cast<std::uint64_t>(c.i) * dims_.indications + c.j) * dims_.layers + c.k;
  }

  Dims dims_;
  std::vector<Entry> entries_;
  std::unordered_map<std::uint64_t, std::uint32_t> lookup_;
};

/// Copy of `tensor` without the listed coordinates (absent ones are ignored).
SparseTensor remove_cells(const SparseTensor& tensor, std::span<const Coord> cells);

/// Keeps only the listed layers, renumbered 0..n-1 in the given order.
SparseTensor select_layers(const SparseTensor& tensor, std::span<const std::uint32_t> layers);

/// Sorted per-mode fiber lists (CSR layout) over an immutable copy of the
/// entries; `fiber(m, e)` lists the positions of all entries whose mode-m
/// coordinate is e.
class FiberIndex {
 public:
  explicit FiberIndex(const SparseTensor& tensor);

  const Dims& dims() const { return dims_; }
  std::span<const Entry> entries() const { return entries_; }
  std::span<const std::uint32_t> fiber(Mode mode, std::size_t entity) const;

 private:
  Dims dims_;
  std::vector<Entry> entries_;
  std::array<std::vector<std::uint32_t>, kNumModes> offsets_;
  std::array<std::vector<std::uint32_t>, kNumModes> members_;
};

/// A tensor together with the identifier dictionaries of its three modes.
struct TensorBundle {
  SparseTensor tensor;
  std::array<ModeIndex, kNumModes> modes;

  const ModeIndex& index(Mode m) const { return modes[static_cast<std::size_t>(m)]; }
};

}  // namespace btf
