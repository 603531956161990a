// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/mode_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace btf {

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Target: return "target";
    case Mode::Indication: return "indication";
    case Mode::Layer: return "layer";
  }
  return "unknown";
}

ModeIndex::ModeIndex(Mode mode, std::vector<std::string> reverse)
    : mode_(mode), reverse_(std::move(reverse)) {
  forward_.reserve(reverse_.size());
  for (std::uint32_t idx = 0; idx < reverse_.size(); ++idx) {
    if (!forward_.emplace(reverse_[idx], idx).second) {
      throw std::invalid_argument("duplicate identifier in " + std::string(mode_name(mode)) +
                                  " mode: " + reverse_[idx]);
    }
  }
}

ModeIndex ModeIndex::build(Mode mode, std::span<const std::string> identifiers) {
  if (identifiers.empty()) throw std::invalid_argument("empty mode");
  std::vector<std::string> ids(identifiers.begin(), identifiers.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ModeIndex(mode, std::move(ids));
}

ModeIndex ModeIndex::ordered(Mode mode, std::span<const std::string> identifiers) {
  if (identifiers.empty()) throw std::invalid_argument("empty mode");
  return ModeIndex(mode, std::vector<std::string>(identifiers.begin(), identifiers.end()));
}

std::optional<std::uint32_t> ModeIndex::find(std::string_view id) const {
  auto it = forward_.find(std::string(id));
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t ModeIndex::at(std::string_view id) const {
  if (auto idx = find(id)) return *idx;
  throw std::out_of_range("unknown " + std::string(mode_name(mode_)) + " identifier: " +
                          std::string(id));
}

ModeIndex build_index(Mode mode, std::span<const std::string> identifiers) {
  return ModeIndex::build(mode, identifiers);
}

}  // namespace btf
