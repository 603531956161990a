// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace btf {

/// Area under the ROC curve by the rank-sum formula with midranks for ties:
/// (sum of positive ranks - n+(n+ + 1)/2) / (n+ n-). Labels are 0/1.
/// Throws std::invalid_argument("degenerate labels") unless both classes occur.
double auroc(std::span<const double> scores, std::span<const int> labels);

/// F1 of the predictions score >= threshold. Returns 0 whenever there are no
/// true positives. threshold must lie in (0,1).
double f1_score(std::span<const double> scores, std::span<const int> labels,
                double threshold = 0.5);

/// Fraction of positive labels. Throws on empty input.
double class_imbalance(std::span<const int> labels);

/// 1-based ranks with ties sharing their average rank.
std::vector<double> midranks(std::span<const double> values);

struct MannWhitneyResult {
  double u = 0.0;  // U statistic of the first group
  double p = 1.0;  // two-sided
  bool exact = false;
};

/// Two-sided Mann-Whitney-Wilcoxon test. Uses exact enumeration when
/// n_a + n_b <= kExactLimit, the normal approximation otherwise.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kExactLimit = 12;

/// Exact two-sided p: fraction of all C(n_a+n_b, n_a) relabelings of the
/// pooled midranks whose U is at least as far from n_a n_b / 2 as observed.
double mann_whitney_exact_p(std::span<const double> a, std::span<const double> b);

/// Normal approximation with tie-corrected variance and continuity
/// correction, capped at 1.
double mann_whitney_normal_p(std::span<const double> a, std::span<const double> b);

/// p -> min(1, m p). Requires m >= p_values.size().
std::vector<double> bonferroni(std::span<const double> p_values, std::size_t m);

struct PhaseComparison {
  int phase_a = 0;
  int phase_b = 0;
  double u = 0.0;
  double p_raw = 1.0;
  double p_corrected = 1.0;
};

struct PhaseAnalysis {
  std::map<int, std::vector<double>> groups;  // phase -> scores, phases 0..4 with >= 2 members
  std::vector<PhaseComparison> pairwise;
  std::map<int, std::size_t> excluded;        // phase -> member count (< 2)
};

struct ScoredPair {
  std::string target_id;
  std::string indication_id;
  double score = 0.0;
};

struct PhasedPair {
  std::string target_id;
  std::string indication_id;
  int max_phase = 0;
};

/// Groups prediction scores by the max clinical phase of their pair, runs
/// Mann-Whitney on every pair of phases that has at least two members, and
/// Bonferroni-corrects with m = number of comparisons. Throws DataError if a
/// prediction has no matching pair.
PhaseAnalysis phase_analysis(std::span<const ScoredPair> predictions,
                             std::span<const PhasedPair> pairs);

}  // namespace btf
