// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "btf/errors.hpp"

namespace btf {
namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores/labels size mismatch");
  for (int label : labels) {
    if (label != 0 && label != 1) throw std::invalid_argument("labels must be 0 or 1");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw std::invalid_argument("NaN score");
  }
}

// U of group a against b over pooled ranks, where the first n_a ranks belong to a.
double u_from_rank_sum(double rank_sum, std::size_t n_a) {
  const double n = static_cast<double>(n_a);
  return rank_sum - n * (n + 1.0) / 2.0;
}

}  // namespace

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(values.size());
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() && values[order[end]] == values[order[start]]) ++end;
    const double rank = 0.5 * static_cast<double>(start + 1 + end);  // mean of start+1..end
    for (std::size_t r = start; r < end; ++r) ranks[order[r]] = rank;
    start = end;
  }
  return ranks;
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const auto n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const auto n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("degenerate labels");
  const auto ranks = midranks(scores);
  double pos_rank_sum = 0.0;
  for (std::size_t x = 0; x < ranks.size(); ++x) {
    if (labels[x] == 1) pos_rank_sum += ranks[x];
  }
  return u_from_rank_sum(pos_rank_sum, n_pos) /
         (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double f1_score(std::span<const double> scores, std::span<const int> labels, double threshold) {
  check_inputs(scores, labels);
  if (!(threshold > 0.0 && threshold < 1.0)) throw std::invalid_argument("threshold must lie in (0,1)");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t x = 0; x < scores.size(); ++x) {
    const bool predicted = scores[x] >= threshold;
    if (predicted && labels[x] == 1) ++tp;
    else if (predicted) ++fp;
    else if (labels[x] == 1) ++fn;
  }
  if (tp == 0) return 0.0;
  // 2PR/(P+R) simplifies to 2TP/(2TP+FP+FN).
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

double class_imbalance(std::span<const int> labels) {
  if (labels.empty()) throw std::invalid_argument("class_imbalance: no labels");
  const auto n_pos = std::count(labels.begin(), labels.end(), 1);
  return static_cast<double>(n_pos) / static_cast<double>(labels.size());
}

double mann_whitney_exact_p(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u: empty group");
  const std::size_t n_a = a.size(), n = a.size() + b.size();
  if (n > 30) throw std::invalid_argument("exact enumeration limited to 30 observations");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);

  const double centre = static_cast<double>(n_a * b.size()) / 2.0;
  const double observed =
      std::abs(u_from_rank_sum(std::accumulate(ranks.begin(), ranks.begin() + n_a, 0.0), n_a) - centre);

  // Walk every n_a-subset of positions via a selection mask.
  std::vector<char> mask(n, 0);
  std::fill(mask.begin(), mask.begin() + n_a, 1);
  std::size_t total = 0, extreme = 0;
  do {
    double rank_sum = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (mask[x]) rank_sum += ranks[x];
    }
    ++total;
    if (std::abs(u_from_rank_sum(rank_sum, n_a) - centre) >= observed - 1e-9) ++extreme;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

double mann_whitney_normal_p(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u: empty group");
  const double n_a = static_cast<double>(a.size()), n_b = static_cast<double>(b.size());
  const double n = n_a + n_b;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);
  const double u =
      u_from_rank_sum(std::accumulate(ranks.begin(), ranks.begin() + a.size(), 0.0), a.size());

  std::sort(pooled.begin(), pooled.end());
  double tie_term = 0.0;
  for (std::size_t start = 0; start < pooled.size();) {
    std::size_t end = start;
    while (end < pooled.size() && pooled[end] == pooled[start]) ++end;
    const double t = static_cast<double>(end - start);
    tie_term += t * t * t - t;
    start = end;
  }
  const double variance = n_a * n_b / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(variance > 0.0)) return 1.0;
  const double deviation = std::max(0.0, std::abs(u - n_a * n_b / 2.0) - 0.5);
  const double z = deviation / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u: empty group");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);
  MannWhitneyResult result;
  result.u = u_from_rank_sum(std::accumulate(ranks.begin(), ranks.begin() + a.size(), 0.0), a.size());
  result.exact = pooled.size() <= kExactLimit;
  result.p = result.exact ? mann_whitney_exact_p(a, b) : mann_whitney_normal_p(a, b);
  return result;
}

std::vector<double> bonferroni(std::span<const double> p_values, std::size_t m) {
  if (m < p_values.size()) throw std::invalid_argument("bonferroni: m below number of tests");
  std::vector<double> out;
  out.reserve(p_values.size());
  for (double p : p_values) out.push_back(std::min(1.0, static_cast<double>(m) * p));
  return out;
}

PhaseAnalysis phase_analysis(std::span<const ScoredPair> predictions,
                             std::span<const PhasedPair> pairs) {
  std::map<std::pair<std::string, std::string>, int> phase_of;
  for (const auto& p : pairs) {
    if (p.max_phase < 0 || p.max_phase > 4) throw DataError("max_phase outside 0-4");
    phase_of[{p.target_id, p.indication_id}] = p.max_phase;
  }
  std::map<int, std::vector<double>> all_groups;
  for (int phase = 0; phase <= 4; ++phase) all_groups[phase];
  for (const auto& pred : predictions) {
    auto it = phase_of.find({pred.target_id, pred.indication_id});
    if (it == phase_of.end()) {
      throw DataError("prediction " + pred.target_id + "/" + pred.indication_id +
                      " has no outcome pair");
    }
    all_groups[it->second].push_back(pred.score);
  }

  PhaseAnalysis analysis;
  for (auto& [phase, scores] : all_groups) {
    if (scores.size() < 2) {
      analysis.excluded[phase] = scores.size();
    } else {
      analysis.groups[phase] = std::move(scores);
    }
  }
  std::vector<double> raw;
  for (auto a = analysis.groups.begin(); a != analysis.groups.end(); ++a) {
    for (auto b = std::next(a); b != analysis.groups.end(); ++b) {
      const auto test = mann_whitney_u(a->second, b->second);
      analysis.pairwise.push_back({a->first, b->first, test.u, test.p, 1.0});
      raw.push_back(test.p);
    }
  }
  const auto corrected = bonferroni(raw, raw.size());
  for (std::size_t c = 0; c < corrected.size(); ++c) analysis.pairwise[c].p_corrected = corrected[c];
  return analysis;
}

}  // namespace btf
