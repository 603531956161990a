// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace btf {

enum class Mode : std::uint8_t { Target = 0, Indication = 1, Layer = 2 };

inline constexpr std::size_t kNumModes = 3;

std::string_view mode_name(Mode mode);

/// Bidirectional dictionary between domain identifiers (gene ids, MeSH ids,
/// layer names) and contiguous mode indices.
class ModeIndex {
 public:
  ModeIndex() = default;

  /// Deduplicates and sorts `identifiers` lexicographically, then assigns
  /// indices 0..n-1. Throws std::invalid_argument("empty mode") on empty input.
  static ModeIndex build(Mode mode, std::span<const std::string> identifiers);

  /// Keeps the caller's order. Duplicates are rejected.
  static ModeIndex ordered(Mode mode, std::span<const std::string> identifiers);

  Mode mode() const { return mode_; }
  std::size_t size() const { return reverse_.size(); }

  std::optional<std::uint32_t> find(std::string_view id) const;
  /// Throws std::out_of_range for unknown identifiers.
  std::uint32_t at(std::string_view id) const;
  const std::string& name(std::uint32_t index) const { return reverse_.at(index); }
  const std::vector<std::string>& names() const { return reverse_; }

  friend bool operator==(const ModeIndex& a, const ModeIndex& b) {
    return a.mode_ == b.mode_ && a.reverse_ == b.reverse_;
  }

 private:
  ModeIndex(Mode mode, std::vector<std::string> reverse);

  Mode mode_ = Mode::Target;
  std::unordered_map<std::string, std::uint32_t> forward_;
  std::vector<std::string> reverse_;
};

ModeIndex build_index(Mode mode, std::span<const std::string> identifiers);

}  // namespace btf
