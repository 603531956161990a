// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "btf/sparse_tensor.hpp"

namespace btf {

enum class EvidenceLayer : std::uint8_t { RareDisease = 0, GeneBurden = 1, Gwas = 2 };

inline constexpr std::string_view kOutcomeLayerName = "outcome";

/// Canonical layer names: rare_disease, gene_burden, gwas.
std::string_view layer_name(EvidenceLayer layer);
/// Accepts the canonical names plus the short forms rare, burden, l2g.
std::optional<EvidenceLayer> parse_layer(std::string_view name);

/// One observation from a curation source. Values: rare disease 1.0, gene
/// burden 0.0 or 1.0, GWAS the raw L2G score.
struct EvidenceRecord {
  std::string gene_id;
  std::string disease_id;  // EFO before map_ontology, MeSH after
  EvidenceLayer layer = EvidenceLayer::RareDisease;
  double value = 0.0;

  friend bool operator==(const EvidenceRecord&, const EvidenceRecord&) = default;
};

template <typename T>
struct Parsed {
  std::vector<T> items;
  std::size_t rows = 0;     // data rows read
  std::size_t dropped = 0;  // rows that produced no item
  std::vector<std::string> warnings;
};

std::set<std::string> default_confidence_tiers();

/// rare_disease.tsv (gene_id, efo_id, confidence). Accepted tiers become
/// value 1.0; known lower tiers are dropped silently and unknown strings
/// dropped with a warning. Comparison is case-insensitive.
Parsed<EvidenceRecord> parse_rare_disease(const std::filesystem::path& path,
                                          const std::set<std::string>& accepted =
                                              default_confidence_tiers());

/// How the burden significance column is read.
struct SignificancePolicy {
  std::string column = "significant";
  bool accept_words = false;  // also accept true/false, yes/no
};

/// gene_burden.tsv (gene_id, efo_id, significant). Non-significant rows are
/// explicit 0.0 observations, never dropped.
Parsed<EvidenceRecord> parse_gene_burden(const std::filesystem::path& path,
                                         const SignificancePolicy& policy = {});

/// gwas_l2g.tsv (gene_id, efo_id, l2g_score). Scores >= threshold are kept
/// as-is; lower scores are dropped (missing, not negative). A score outside
/// [0,1] is a DataError.
Parsed<EvidenceRecord> parse_gwas_l2g(const std::filesystem::path& path,
                                      double score_threshold = 0.5);

enum class TrialStatus : std::uint8_t {
  Approved, Terminated, Suspended, Completed, Active, Withdrawn, Unknown
};
/// Ordered from most to least informative for failure labeling.
enum class StopReason : std::uint8_t { Safety, Efficacy, Business, Other, None };

std::string_view status_name(TrialStatus status);
std::string_view stop_reason_name(StopReason reason);

struct TrialRow {
  std::string gene_id;
  std::string disease_id;
  int phase = 0;
  TrialStatus status = TrialStatus::Unknown;
  StopReason stop_reason = StopReason::None;
};

/// outcomes.tsv (gene_id, efo_id, phase, status, stop_reason_class). An
/// unknown status is a warning and is read as TrialStatus::Unknown; a phase
/// outside 0-4 or an unknown stop reason is a DataError.
Parsed<TrialRow> parse_outcomes(const std::filesystem::path& path);

struct OutcomePair {
  std::string gene_id;
  std::string disease_id;
  std::set<TrialStatus> statuses;
  int max_phase = 0;
  StopReason stop_reason = StopReason::None;
  std::optional<int> label;  // 1 success, 0 failure, empty = unlabeled

  friend bool operator==(const OutcomePair&, const OutcomePair&) = default;
};

/// Groups trial rows by (gene, disease), sorted. Label 1 if any row is
/// approved; otherwise 0 if any row is terminated or suspended or carries a
/// safety/efficacy stop reason; otherwise unlabeled.
std::vector<OutcomePair> label_outcomes(std::span<const TrialRow> rows);

/// Flat EFO -> MeSH cross-reference. Many EFO ids may share a MeSH id; an
/// EFO id listed with two different MeSH ids is "ambiguous mapping".
class OntologyXref {
 public:
  static OntologyXref load(const std::filesystem::path& path);
  static OntologyXref from_pairs(std::span<const std::pair<std::string, std::string>> pairs);

  std::optional<std::string> lookup(std::string_view efo_id) const;
  /// True for ids that are mapping targets (already MeSH).
  bool is_target(std::string_view id) const { return targets_.contains(std::string(id)); }
  std::size_t size() const { return forward_.size(); }

 private:
  void add(const std::string& efo, const std::string& mesh, const std::string& where);

  std::map<std::string, std::string> forward_;
  std::set<std::string> targets_;
};

struct MergeConflict {
  std::string gene_id;
  std::string disease_id;
  std::string layer;
  std::vector<std::string> source_ids;
  std::vector<double> values;
  double resolved = 0.0;
};

template <typename T>
struct MappingResult {
  std::vector<T> items;
  std::size_t unmapped = 0;  // items dropped for lack of a MeSH id
  std::set<std::string> unmapped_ids;
  std::size_t merged = 0;    // items folded into another item
  std::vector<MergeConflict> conflicts;
};

/// Replaces EFO ids with MeSH ids. Ids that are already MeSH targets pass
/// through, so mapping is idempotent. Records landing on the same
/// (gene, MeSH, layer) merge to their max value; differing values are
/// reported as conflicts. Output sorted by (gene, disease, layer).
MappingResult<EvidenceRecord> map_ontology(std::span<const EvidenceRecord> records,
                                           const OntologyXref& xref);

/// Pairs landing on the same (gene, MeSH) merge: label = max of present
/// labels, max_phase = max, statuses unioned, most severe stop reason kept.
/// Two present, different labels are reported as a conflict.
MappingResult<OutcomePair> map_ontology(std::span<const OutcomePair> pairs,
                                        const OntologyXref& xref);

/// Assembles the tensor: layer 0 holds outcome labels, selected evidence
/// layers follow in canonical order (rare_disease, gene_burden, gwas). Mode
/// dictionaries cover every id in the selected layers and in all outcome
/// pairs (labeled or not). Throws DataError("empty outcome layer") when no
/// pair carries a label.
TensorBundle build_tensor(std::span<const EvidenceRecord> evidence,
                          std::span<const OutcomePair> outcomes,
                          std::span<const EvidenceLayer> layer_selection);

}  // namespace btf
