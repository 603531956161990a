// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/checkpoint.hpp"

#include <fstream>
#include <ostream>

#include "btf/errors.hpp"
#include "btf/tsv.hpp"

namespace btf {
namespace {

constexpr const char* kFactorFiles[kNumModes] = {"U.tsv", "V.tsv", "W.tsv"};

}  // namespace

nlohmann::json to_json(const CheckpointManifest& manifest) {
  return {
      {"D", manifest.latent_dim},
      {"alpha", manifest.alpha},
      {"schedule",
       {{"burnin", manifest.schedule.burnin},
        {"samples", manifest.schedule.samples},
        {"thin", manifest.schedule.thin}}},
      {"seed", manifest.seed},
      {"retained", manifest.retained},
      {"sweeps", manifest.sweep},
      {"dims", {manifest.dims.targets, manifest.dims.indications, manifest.dims.layers}},
  };
}

CheckpointManifest manifest_from_json(const nlohmann::json& json) {
  CheckpointManifest m;
  m.latent_dim = json.at("D").get<int>();
  m.alpha = json.at("alpha").get<double>();
  const auto& s = json.at("schedule");
  m.schedule = {s.at("burnin").get<int>(), s.at("samples").get<int>(), s.at("thin").get<int>()};
  m.seed = json.at("seed").get<std::uint64_t>();
  m.retained = json.at("retained").get<int>();
  m.sweep = json.value("sweeps", 0u);
  const auto dims = json.at("dims").get<std::vector<std::size_t>>();
  if (dims.size() != 3) throw DataError("manifest: dims must have 3 entries");
  m.dims = {dims[0], dims[1], dims[2]};
  return m;
}

void save_checkpoint(const std::filesystem::path& dir, const ModelState& state,
                     const SamplerSchedule& schedule, int retained,
                     const std::array<ModeIndex, kNumModes>* modes) {
  std::filesystem::create_directories(dir);
  for (std::size_t m = 0; m < kNumModes; ++m) {
    const auto& factor = state.latents[m];
    write_atomic(dir / kFactorFiles[m], [&](std::ostream& out) {
      out << "id";
      for (Eigen::Index d = 0; d < factor.cols(); ++d) out << "\td" << d;
      out << '\n';
      for (Eigen::Index e = 0; e < factor.rows(); ++e) {
        if (modes) {
          out << (*modes)[m].name(static_cast<std::uint32_t>(e));
        } else {
          out << e;
        }
        for (Eigen::Index d = 0; d < factor.cols(); ++d) out << '\t' << format_double(factor(e, d));
        out << '\n';
      }
    });
  }
  CheckpointManifest manifest{state.latent_dim, state.alpha, schedule, state.seed,
                              retained,         state.sweep, state.dims()};
  write_atomic(dir / "manifest.json",
               [&](std::ostream& out) { out << to_json(manifest).dump(2) << '\n'; });
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  Checkpoint cp;
  std::ifstream in(dir / "manifest.json");
  if (!in) throw DataError("cannot open " + (dir / "manifest.json").string());
  try {
    cp.manifest = manifest_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& err) {
    throw DataError("manifest.json: " + std::string(err.what()));
  }
  for (std::size_t m = 0; m < kNumModes; ++m) {
    const auto table = TsvTable::read(dir / kFactorFiles[m]);
    const auto cols = static_cast<Eigen::Index>(table.header().size()) - 1;
    if (cols != cp.manifest.latent_dim) throw DataError(std::string(kFactorFiles[m]) + ": wrong D");
    auto& factor = cp.latents[m];
    factor.resize(static_cast<Eigen::Index>(table.rows().size()), cols);
    for (std::size_t r = 0; r < table.rows().size(); ++r) {
      const auto& fields = table.rows()[r].fields;
      for (Eigen::Index d = 0; d < cols; ++d) {
        factor(static_cast<Eigen::Index>(r), d) = parse_double(fields[d + 1], kFactorFiles[m]);
      }
    }
  }
  return cp;
}

}  // namespace btf
