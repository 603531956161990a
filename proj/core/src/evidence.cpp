// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/evidence.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include "btf/errors.hpp"
#include "btf/tsv.hpp"

namespace btf {
namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t");
  return std::string(text.substr(first, last - first + 1));
}

std::string where(const TsvTable& table, const TsvTable::Row& row) {
  return table.source() + ":" + std::to_string(row.line);
}

// Reads the gene/disease id pair and rejects empty identifiers.
std::pair<std::string, std::string> ids(const TsvTable& table, const TsvTable::Row& row,
                                        std::size_t gene_col, std::size_t disease_col) {
  auto gene = trim(row.fields[gene_col]);
  auto disease = trim(row.fields[disease_col]);
  if (gene.empty() || disease.empty()) throw DataError(where(table, row) + ": empty identifier");
  return {std::move(gene), std::move(disease)};
}

const std::set<std::string>& known_confidence_tiers() {
  static const std::set<std::string> tiers = {
      "definitive", "strong",  "moderate", "limited", "disputed", "refuted",
      "no known disease relationship", "no_known_disease_relationship", "supportive",
      "animal model"};
  return tiers;
}

}  // namespace

std::string_view layer_name(EvidenceLayer layer) {
  switch (layer) {
    case EvidenceLayer::RareDisease: return "rare_disease";
    case EvidenceLayer::GeneBurden: return "gene_burden";
    case EvidenceLayer::Gwas: return "gwas";
  }
  return "unknown";
}

std::optional<EvidenceLayer> parse_layer(std::string_view name) {
  const auto key = lower(name);
  if (key == "rare_disease" || key == "rare") return EvidenceLayer::RareDisease;
  if (key == "gene_burden" || key == "burden") return EvidenceLayer::GeneBurden;
  if (key == "gwas" || key == "l2g") return EvidenceLayer::Gwas;
  return std::nullopt;
}

std::set<std::string> default_confidence_tiers() { return {"definitive", "strong"}; }

Parsed<EvidenceRecord> parse_rare_disease(const std::filesystem::path& path,
                                          const std::set<std::string>& accepted) {
  std::set<std::string> accepted_lower;
  for (const auto& tier : accepted) accepted_lower.insert(lower(tier));

  const auto table = TsvTable::read(path, {"gene_id", "efo_id", "confidence"});
  const auto cg = table.column("gene_id"), cd = table.column("efo_id"),
             cc = table.column("confidence");
  Parsed<EvidenceRecord> out;
  for (const auto& row : table.rows()) {
    ++out.rows;
    auto [gene, disease] = ids(table, row, cg, cd);
    const auto tier = lower(trim(row.fields[cc]));
    if (accepted_lower.contains(tier)) {
      out.items.push_back({std::move(gene), std::move(disease), EvidenceLayer::RareDisease, 1.0});
      continue;
    }
    ++out.dropped;
    if (!known_confidence_tiers().contains(tier)) {
      out.warnings.push_back(where(table, row) + ": unknown confidence '" + row.fields[cc] +
                             "', row dropped");
    }
  }
  return out;
}

Parsed<EvidenceRecord> parse_gene_burden(const std::filesystem::path& path,
                                         const SignificancePolicy& policy) {
  const auto table = TsvTable::read(path, {"gene_id", "efo_id", policy.column});
  const auto cg = table.column("gene_id"), cd = table.column("efo_id"),
             cs = table.column(policy.column);
  Parsed<EvidenceRecord> out;
  for (const auto& row : table.rows()) {
    ++out.rows;
    auto [gene, disease] = ids(table, row, cg, cd);
    const auto flag = lower(trim(row.fields[cs]));
    double value;
    if (flag == "1" || (policy.accept_words && (flag == "true" || flag == "yes"))) {
      value = 1.0;
    } else if (flag == "0" || (policy.accept_words && (flag == "false" || flag == "no"))) {
      value = 0.0;
    } else {
      throw DataError(where(table, row) + ": significance must be 0 or 1, got '" +
                      row.fields[cs] + "'");
    }
    out.items.push_back({std::move(gene), std::move(disease), EvidenceLayer::GeneBurden, value});
  }
  return out;
}

Parsed<EvidenceRecord> parse_gwas_l2g(const std::filesystem::path& path, double score_threshold) {
  if (!(score_threshold >= 0.0 && score_threshold <= 1.0)) {
    throw std::invalid_argument("l2g threshold must lie in [0,1]");
  }
  const auto table = TsvTable::read(path, {"gene_id", "efo_id", "l2g_score"});
  const auto cg = table.column("gene_id"), cd = table.column("efo_id"),
             cs = table.column("l2g_score");
  Parsed<EvidenceRecord> out;
  for (const auto& row : table.rows()) {
    ++out.rows;
    auto [gene, disease] = ids(table, row, cg, cd);
    const double score = parse_double(trim(row.fields[cs]), where(table, row) + " l2g_score");
    if (!(score >= 0.0 && score <= 1.0)) {
      throw DataError(where(table, row) + ": l2g_score outside [0,1]: " + row.fields[cs]);
    }
    if (score < score_threshold) {
      ++out.dropped;
      continue;
    }
    out.items.push_back({std::move(gene), std::move(disease), EvidenceLayer::Gwas, score});
  }
  return out;
}

std::string_view status_name(TrialStatus status) {
  switch (status) {
    case TrialStatus::Approved: return "approved";
    case TrialStatus::Terminated: return "terminated";
    case TrialStatus::Suspended: return "suspended";
    case TrialStatus::Completed: return "completed";
    case TrialStatus::Active: return "active";
    case TrialStatus::Withdrawn: return "withdrawn";
    case TrialStatus::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::Safety: return "safety";
    case StopReason::Efficacy: return "efficacy";
    case StopReason::Business: return "business";
    case StopReason::Other: return "other";
    case StopReason::None: return "none";
  }
  return "none";
}

Parsed<TrialRow> parse_outcomes(const std::filesystem::path& path) {
  const auto table =
      TsvTable::read(path, {"gene_id", "efo_id", "phase", "status", "stop_reason_class"});
  const auto cg = table.column("gene_id"), cd = table.column("efo_id"),
             cp = table.column("phase"), cs = table.column("status"),
             cr = table.column("stop_reason_class");
  Parsed<TrialRow> out;
  for (const auto& row : table.rows()) {
    ++out.rows;
    TrialRow trial;
    std::tie(trial.gene_id, trial.disease_id) = ids(table, row, cg, cd);

    const auto phase = parse_int(trim(row.fields[cp]), where(table, row) + " phase");
    if (phase < 0 || phase > 4) throw DataError(where(table, row) + ": phase outside 0-4");
    trial.phase = static_cast<int>(phase);

    const auto status = lower(trim(row.fields[cs]));
    trial.status = TrialStatus::Unknown;
    for (auto s : {TrialStatus::Approved, TrialStatus::Terminated, TrialStatus::Suspended,
                   TrialStatus::Completed, TrialStatus::Active, TrialStatus::Withdrawn}) {
      if (status == status_name(s)) trial.status = s;
    }
    if (trial.status == TrialStatus::Unknown) {
      out.warnings.push_back(where(table, row) + ": unknown status '" + row.fields[cs] +
                             "', treated as non-negative evidence");
    }

    const auto reason = lower(trim(row.fields[cr]));
    bool known_reason = false;
    for (auto r : {StopReason::Safety, StopReason::Efficacy, StopReason::Business,
                   StopReason::Other, StopReason::None}) {
      if (reason == stop_reason_name(r)) {
        trial.stop_reason = r;
        known_reason = true;
      }
    }
    if (!known_reason) {
      throw DataError(where(table, row) + ": unknown stop_reason_class '" + row.fields[cr] + "'");
    }
    out.items.push_back(std::move(trial));
  }
  return out;
}

std::vector<OutcomePair> label_outcomes(std::span<const TrialRow> rows) {
  std::map<std::pair<std::string, std::string>, OutcomePair> pairs;
  for (const auto& row : rows) {
    if (row.phase < 0 || row.phase > 4) throw std::invalid_argument("phase outside 0-4");
    auto [it, fresh] = pairs.try_emplace({row.gene_id, row.disease_id});
    auto& pair = it->second;
    if (fresh) {
      pair.gene_id = row.gene_id;
      pair.disease_id = row.disease_id;
      pair.max_phase = row.phase;
    }
    pair.statuses.insert(row.status);
    pair.max_phase = std::max(pair.max_phase, row.phase);
    pair.stop_reason = std::min(pair.stop_reason, row.stop_reason);
  }

  std::vector<OutcomePair> out;
  out.reserve(pairs.size());
  for (auto& [key, pair] : pairs) {
    const auto has = [&](TrialStatus s) { return pair.statuses.contains(s); };
    if (has(TrialStatus::Approved)) {
      pair.label = 1;
    } else if (has(TrialStatus::Terminated) || has(TrialStatus::Suspended) ||
               pair.stop_reason == StopReason::Safety ||
               pair.stop_reason == StopReason::Efficacy) {
      pair.label = 0;
    }
    out.push_back(std::move(pair));
  }
  return out;
}

void OntologyXref::add(const std::string& efo, const std::string& mesh, const std::string& where) {
  if (efo.empty() || mesh.empty()) throw DataError(where + ": empty identifier in xref");
  auto [it, fresh] = forward_.emplace(efo, mesh);
  if (!fresh && it->second != mesh) {
    throw DataError(where + ": ambiguous mapping for " + efo + " (" + it->second + ", " + mesh + ")");
  }
  targets_.insert(mesh);
}

OntologyXref OntologyXref::load(const std::filesystem::path& path) {
  const auto table = TsvTable::read(path, {"efo_id", "mesh_id"});
  const auto ce = table.column("efo_id"), cm = table.column("mesh_id");
  OntologyXref xref;
  for (const auto& row : table.rows()) {
    xref.add(trim(row.fields[ce]), trim(row.fields[cm]), where(table, row));
  }
  return xref;
}

OntologyXref OntologyXref::from_pairs(std::span<const std::pair<std::string, std::string>> pairs) {
  OntologyXref xref;
  for (const auto& [efo, mesh] : pairs) xref.add(efo, mesh, "xref");
  return xref;
}

std::optional<std::string> OntologyXref::lookup(std::string_view efo_id) const {
  auto it = forward_.find(std::string(efo_id));
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

namespace {

// EFO ids map through the table; ids that are already targets pass through.
std::optional<std::string> resolve(const OntologyXref& xref, const std::string& id) {
  if (auto mesh = xref.lookup(id)) return mesh;
  if (xref.is_target(id)) return id;
  return std::nullopt;
}

}  // namespace

MappingResult<EvidenceRecord> map_ontology(std::span<const EvidenceRecord> records,
                                           const OntologyXref& xref) {
  using Key = std::tuple<std::string, std::string, EvidenceLayer>;
  struct Group {
    std::vector<std::string> sources;
    std::vector<double> values;
  };
  std::map<Key, Group> groups;
  MappingResult<EvidenceRecord> out;
  for (const auto& record : records) {
    auto mesh = resolve(xref, record.disease_id);
    if (!mesh) {
      ++out.unmapped;
      out.unmapped_ids.insert(record.disease_id);
      continue;
    }
    auto& group = groups[{record.gene_id, *mesh, record.layer}];
    group.sources.push_back(record.disease_id);
    group.values.push_back(record.value);
  }
  for (auto& [key, group] : groups) {
    const auto& [gene, disease, layer] = key;
    const double best = *std::max_element(group.values.begin(), group.values.end());
    out.merged += group.values.size() - 1;
    const auto [lo, hi] = std::minmax_element(group.values.begin(), group.values.end());
    if (*lo != *hi) {
      out.conflicts.push_back({gene, disease, std::string(layer_name(layer)), group.sources,
                               group.values, best});
    }
    out.items.push_back({gene, disease, layer, best});
  }
  return out;
}

MappingResult<OutcomePair> map_ontology(std::span<const OutcomePair> pairs,
                                        const OntologyXref& xref) {
  std::map<std::pair<std::string, std::string>, std::vector<const OutcomePair*>> groups;
  MappingResult<OutcomePair> out;
  for (const auto& pair : pairs) {
    auto mesh = resolve(xref, pair.disease_id);
    if (!mesh) {
      ++out.unmapped;
      out.unmapped_ids.insert(pair.disease_id);
      continue;
    }
    groups[{pair.gene_id, *mesh}].push_back(&pair);
  }
  for (const auto& [key, members] : groups) {
    OutcomePair merged;
    merged.gene_id = key.first;
    merged.disease_id = key.second;
    merged.max_phase = 0;
    std::vector<std::string> sources;
    std::vector<double> labels;
    for (const auto* p : members) {
      merged.statuses.insert(p->statuses.begin(), p->statuses.end());
      merged.max_phase = std::max(merged.max_phase, p->max_phase);
      merged.stop_reason = std::min(merged.stop_reason, p->stop_reason);
      if (p->label) {
        merged.label = std::max(merged.label.value_or(0), *p->label);
        sources.push_back(p->disease_id);
        labels.push_back(*p->label);
      }
    }
    out.merged += members.size() - 1;
    if (!labels.empty() &&
        *std::min_element(labels.begin(), labels.end()) !=
            *std::max_element(labels.begin(), labels.end())) {
      out.conflicts.push_back({merged.gene_id, merged.disease_id, std::string(kOutcomeLayerName),
                               sources, labels, static_cast<double>(*merged.label)});
    }
    out.items.push_back(std::move(merged));
  }
  return out;
}

TensorBundle build_tensor(std::span<const EvidenceRecord> evidence,
                          std::span<const OutcomePair> outcomes,
                          std::span<const EvidenceLayer> layer_selection) {
  std::vector<EvidenceLayer> layers(layer_selection.begin(), layer_selection.end());
  std::sort(layers.begin(), layers.end());
  layers.erase(std::unique(layers.begin(), layers.end()), layers.end());

  const bool any_label =
      std::any_of(outcomes.begin(), outcomes.end(), [](const auto& p) { return p.label.has_value(); });
  if (!any_label) throw DataError("empty outcome layer");

  std::vector<std::string> genes, diseases;
  std::vector<std::string> layer_names{std::string(kOutcomeLayerName)};
  for (auto layer : layers) layer_names.emplace_back(layer_name(layer));
  for (const auto& p : outcomes) {
    genes.push_back(p.gene_id);
    diseases.push_back(p.disease_id);
  }
  const auto selected = [&](EvidenceLayer layer) {
    return std::binary_search(layers.begin(), layers.end(), layer);
  };
  for (const auto& r : evidence) {
    if (!selected(r.layer)) continue;
    genes.push_back(r.gene_id);
    diseases.push_back(r.disease_id);
  }

  TensorBundle bundle;
  bundle.modes[0] = ModeIndex::build(Mode::Target, genes);
  bundle.modes[1] = ModeIndex::build(Mode::Indication, diseases);
  bundle.modes[2] = ModeIndex::ordered(Mode::Layer, layer_names);
  bundle.tensor = SparseTensor({bundle.modes[0].size(), bundle.modes[1].size(), layer_names.size()});

  auto put = [&](const std::string& gene, const std::string& disease, std::uint32_t k, double v) {
    try {
      bundle.tensor.insert({bundle.modes[0].at(gene), bundle.modes[1].at(disease), k}, v);
    } catch (const std::logic_error& err) {
      throw DataError(gene + "/" + disease + " in layer " + layer_names[k] + ": " + err.what());
    }
  };
  for (const auto& p : outcomes) {
    if (p.label) put(p.gene_id, p.disease_id, 0, static_cast<double>(*p.label));
  }
  for (const auto& r : evidence) {
    if (!selected(r.layer)) continue;
    const auto pos = std::lower_bound(layers.begin(), layers.end(), r.layer) - layers.begin();
    put(r.gene_id, r.disease_id, static_cast<std::uint32_t>(pos + 1), r.value);
  }
  return bundle;
}

}  // namespace btf
