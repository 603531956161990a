// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/tensor_io.hpp"

#include <fstream>
#include <limits>
#include <ostream>

#include "btf/errors.hpp"
#include "btf/tsv.hpp"

namespace btf {
namespace {

constexpr const char* kModeKeys[kNumModes] = {"targets", "indications", "layers"};

}  // namespace

std::filesystem::path default_meta_path(const std::filesystem::path& tsv_path) {
  auto meta = tsv_path;
  meta.replace_extension(".meta.json");
  return meta;
}

nlohmann::json tensor_metadata(const TensorBundle& bundle) {
  const auto& dims = bundle.tensor.dims();
  nlohmann::json meta;
  meta["dims"] = {dims.targets, dims.indications, dims.layers};
  for (std::size_t m = 0; m < kNumModes; ++m) meta[kModeKeys[m]] = bundle.modes[m].names();
  return meta;
}

void save_tensor(const TensorBundle& bundle, const std::filesystem::path& tsv_path,
                 const std::filesystem::path& meta_path) {
  write_atomic(tsv_path, [&](std::ostream& out) {
    out << "i\tj\tk\tvalue\n";
    for (const auto& e : bundle.tensor.entries()) {
      out << e.at.i << '\t' << e.at.j << '\t' << e.at.k << '\t' << format_double(e.value) << '\n';
    }
  });
  write_atomic(meta_path, [&](std::ostream& out) { out << tensor_metadata(bundle).dump(2) << '\n'; });
}

TensorBundle load_tensor(const std::filesystem::path& tsv_path,
                         const std::filesystem::path& meta_path) {
  std::ifstream meta_in(meta_path);
  if (!meta_in) throw DataError("cannot open " + meta_path.string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& err) {
    throw DataError(meta_path.string() + ": " + err.what());
  }

  TensorBundle bundle;
  Dims dims;
  try {
    const auto sizes = meta.at("dims").get<std::vector<std::size_t>>();
    if (sizes.size() != 3) throw DataError(meta_path.string() + ": dims must have 3 entries");
    dims = {sizes[0], sizes[1], sizes[2]};
    for (std::size_t m = 0; m < kNumModes; ++m) {
      const auto names = meta.at(kModeKeys[m]).get<std::vector<std::string>>();
      bundle.modes[m] = ModeIndex::ordered(static_cast<Mode>(m), names);
      if (names.size() != dims[static_cast<Mode>(m)]) {
        throw DataError(meta_path.string() + ": " + kModeKeys[m] + " length does not match dims");
      }
    }
  } catch (const nlohmann::json::exception& err) {
    throw DataError(meta_path.string() + ": " + err.what());
  } catch (const std::invalid_argument& err) {
    throw DataError(meta_path.string() + ": " + err.what());
  }

  bundle.tensor = SparseTensor(dims);
  const auto table = TsvTable::read(tsv_path, {"i", "j", "k", "value"});
  const auto ci = table.column("i"), cj = table.column("j"), ck = table.column("k"),
             cv = table.column("value");
  for (const auto& row : table.rows()) {
    const auto where = tsv_path.string() + ":" + std::to_string(row.line);
    const auto i = parse_int(row.fields[ci], "i"), j = parse_int(row.fields[cj], "j"),
               k = parse_int(row.fields[ck], "k");
    if (i < 0 || j < 0 || k < 0) throw DataError(where + ": negative coordinate");
    constexpr long long kMax = std::numeric_limits<std::uint32_t>::max();
    if (i > kMax || j > kMax || k > kMax) throw DataError(where + ": coordinate out of range");
    try {
      bundle.tensor.insert({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                            static_cast<std::uint32_t>(k)},
                           parse_double(row.fields[cv], "value"));
    } catch (const std::logic_error& err) {
      throw DataError(where + ": " + err.what());
    }
  }
  return bundle;
}

TensorBundle select_bundle_layers(const TensorBundle& bundle,
                                  std::span<const std::uint32_t> layers) {
  TensorBundle out;
  out.tensor = select_layers(bundle.tensor, layers);
  out.modes[0] = bundle.modes[0];
  out.modes[1] = bundle.modes[1];
  std::vector<std::string> names;
  for (auto layer : layers) names.push_back(bundle.modes[2].name(layer));
  out.modes[2] = ModeIndex::ordered(Mode::Layer, names);
  return out;
}

}  // namespace btf
