// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "btf/cell_split.hpp"
#include "btf/mode_index.hpp"
#include "btf/random.hpp"
#include "btf/sparse_tensor.hpp"
#include "btf/tensor_io.hpp"
#include "btf/tsv.hpp"
#include "support.hpp"

namespace btf {
namespace {

TEST(ModeIndex, SortsAndDeduplicates) {
  const std::vector<std::string> ids{"ENSG2", "ENSG1", "ENSG2"};
  const auto index = build_index(Mode::Target, ids);
  ASSERT_EQ(index.size(), 2u);
  EXPECT_EQ(index.at("ENSG1"), 0u);
  EXPECT_EQ(index.at("ENSG2"), 1u);
}

TEST(ModeIndex, Singleton) {
  const std::vector<std::string> ids{"A"};
  const auto index = build_index(Mode::Indication, ids);
  EXPECT_EQ(index.size(), 1u);
  EXPECT_EQ(index.at("A"), 0u);
}

TEST(ModeIndex, EmptyIsAnError) {
  const std::vector<std::string> none;
  try {
    build_index(Mode::Target, none);
    FAIL() << "expected throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "empty mode");
  }
}

TEST(ModeIndex, FixtureGenesFollowSortedOrder) {
  const auto table = TsvTable::read(testing::data_path("pipeline/gene_burden.tsv"));
  std::vector<std::string> genes;
  for (const auto& row : table.rows()) genes.push_back(row.fields[table.column("gene_id")]);
  const auto index = build_index(Mode::Target, genes);

  auto oracle = genes;
  std::sort(oracle.begin(), oracle.end());
  oracle.erase(std::unique(oracle.begin(), oracle.end()), oracle.end());
  ASSERT_EQ(oracle.size(), 3u);
  for (std::uint32_t n = 0; n < oracle.size(); ++n) EXPECT_EQ(index.at(oracle[n]), n);
}

TEST(ModeIndex, ForwardAndReverseAreInverse) {
  const std::vector<std::string> ids{"d", "b", "a", "c", "b", "e"};
  const auto index = build_index(Mode::Layer, ids);
  for (const auto& id : ids) EXPECT_EQ(index.name(index.at(id)), id);
  for (std::uint32_t n = 0; n < index.size(); ++n) EXPECT_EQ(index.at(index.name(n)), n);
  EXPECT_FALSE(index.find("zzz").has_value());
  EXPECT_THROW(index.at("zzz"), std::out_of_range);
}

TEST(ModeIndex, OrderedKeepsGivenOrder) {
  const std::vector<std::string> ids{"outcome", "rare_disease", "gwas"};
  const auto index = ModeIndex::ordered(Mode::Layer, ids);
  EXPECT_EQ(index.names(), ids);
  const std::vector<std::string> dup{"a", "a"};
  EXPECT_THROW(ModeIndex::ordered(Mode::Layer, dup), std::invalid_argument);
}

TEST(SparseTensor, InsertOne) {
  SparseTensor t({2, 2, 2});
  t.insert({0, 0, 0}, 1.0);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.lookup({0, 0, 0}), 1.0);
  EXPECT_FALSE(t.lookup({1, 0, 0}).has_value());
}

TEST(SparseTensor, RejectsBadInserts) {
  SparseTensor t({2, 2, 2});
  t.insert({1, 1, 1}, 0.25);
  EXPECT_THROW(t.insert({1, 1, 1}, 0.25), std::invalid_argument);
  EXPECT_THROW(t.insert({2, 0, 0}, 0.5), std::out_of_range);
  EXPECT_THROW(t.insert({0, 0, 2}, 0.5), std::out_of_range);
  EXPECT_THROW(t.insert({0, 0, 0}, std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  EXPECT_THROW(t.insert({0, 0, 0}, std::numeric_limits<double>::infinity()), std::invalid_argument);
  EXPECT_THROW(t.insert({0, 0, 0}, 1.5), std::invalid_argument);
  EXPECT_THROW(t.insert({0, 0, 0}, -0.1), std::invalid_argument);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_THROW(SparseTensor({0, 1, 1}), std::invalid_argument);
}

TEST(SparseTensor, FixtureRecordsGiveHalfDensity) {
  const auto table = TsvTable::read(testing::data_path("pipeline/expected_tensor.tsv"));
  SparseTensor t({3, 2, 4});
  for (const auto& row : table.rows()) {
    t.insert({static_cast<std::uint32_t>(parse_int(row.fields[0], "i")),
              static_cast<std::uint32_t>(parse_int(row.fields[1], "j")),
              static_cast<std::uint32_t>(parse_int(row.fields[2], "k"))},
             parse_double(row.fields[3], "value"));
  }
  EXPECT_EQ(t.size(), table.rows().size());
  EXPECT_EQ(t.size(), 12u);
  EXPECT_DOUBLE_EQ(t.density(), 12.0 / (3 * 2 * 4));
}

TEST(SparseTensor, LookupRoundTripsExactly) {
  SparseTensor t({5, 4, 3});
  CounterRng rng(3, 0, StreamPurpose::Test, 0, 0);
  std::vector<Entry> inserted;
  for (std::uint32_t i = 0; i < 5; ++i) {
    for (std::uint32_t j = 0; j < 4; ++j) {
      for (std::uint32_t k = 0; k < 3; ++k) {
        if (rng() % 3 != 0) continue;
        const double v = static_cast<double>(rng()) / 4294967295.0;
        t.insert({i, j, k}, v);
        inserted.push_back({{i, j, k}, v});
      }
    }
  }
  for (const auto& e : inserted) EXPECT_EQ(*t.lookup(e.at), e.value);
}

TEST(SparseTensor, RemoveAndSelectLayers) {
  SparseTensor t({2, 2, 3});
  t.insert({0, 0, 0}, 1.0);
  t.insert({1, 1, 0}, 0.0);
  t.insert({0, 1, 1}, 0.5);
  t.insert({1, 0, 2}, 0.7);
  const std::vector<Coord> drop{{1, 1, 0}};
  const auto removed = remove_cells(t, drop);
  EXPECT_EQ(removed.size(), 3u);
  EXPECT_FALSE(removed.contains({1, 1, 0}));

  const std::vector<std::uint32_t> keep{0, 2};
  const auto sel = select_layers(t, keep);
  EXPECT_EQ(sel.dims().layers, 2u);
  EXPECT_EQ(sel.size(), 3u);
  EXPECT_EQ(sel.lookup({1, 0, 1}), 0.7);
  EXPECT_FALSE(sel.contains({0, 1, 1}));
}

TEST(FiberIndex, FibersListEveryEntryOnce) {
  SparseTensor t({3, 3, 2});
  CounterRng rng(8, 0, StreamPurpose::Test, 0, 0);
  for (std::uint32_t i = 0; i < 3; ++i)
    for (std::uint32_t j = 0; j < 3; ++j)
      for (std::uint32_t k = 0; k < 2; ++k)
        if (rng() % 2) t.insert({i, j, k}, 0.5);
  const FiberIndex index(t);
  for (Mode m : {Mode::Target, Mode::Indication, Mode::Layer}) {
    std::size_t total = 0;
    for (std::size_t e = 0; e < t.dims()[m]; ++e) {
      for (auto pos : index.fiber(m, e)) {
        EXPECT_EQ(index.entries()[pos].at[m], e);
        ++total;
      }
    }
    EXPECT_EQ(total, t.size());
  }
  EXPECT_THROW(index.fiber(Mode::Target, 3), std::out_of_range);
}

SparseTensor labelled_layer(std::size_t positives, std::size_t negatives) {
  SparseTensor t({positives + negatives, 1, 2});
  std::uint32_t i = 0;
  for (std::size_t n = 0; n < positives; ++n) t.insert({i++, 0, 0}, 1.0);
  for (std::size_t n = 0; n < negatives; ++n) t.insert({i++, 0, 0}, 0.0);
  t.insert({0, 0, 1}, 0.3);  // evidence cell, never split
  return t;
}

TEST(SplitCells, ProportionalRounding) {
  const auto t = labelled_layer(5, 5);
  const auto split = split_cells(t, 0, 0.2, 1);
  std::size_t pos = 0, neg = 0;
  for (const auto& c : split.heldout) (*t.lookup(c) >= 0.5 ? pos : neg)++;
  EXPECT_EQ(pos, 1u);
  EXPECT_EQ(neg, 1u);
  EXPECT_EQ(split.train.size(), 8u);
}

TEST(SplitCells, RoundsHalfUp) {
  EXPECT_EQ(heldout_count(5, 0.5), 3u);
  EXPECT_EQ(heldout_count(5, 0.3), 2u);  // 1.5 -> 2
  EXPECT_EQ(heldout_count(10, 0.2), 2u);
  EXPECT_EQ(heldout_count(2, 0.2), 0u);
}

TEST(SplitCells, Deterministic) {
  const auto t = labelled_layer(9, 14);
  const auto a = split_cells(t, 0, 0.3, 77);
  const auto b = split_cells(t, 0, 0.3, 77);
  EXPECT_EQ(a.heldout, b.heldout);
  EXPECT_EQ(a.train, b.train);
  EXPECT_NE(a.heldout, split_cells(t, 0, 0.3, 78).heldout);
}

TEST(SplitCells, PartitionsTheLayer) {
  const auto t = labelled_layer(12, 30);
  const auto split = split_cells(t, 0, 0.2, 5);
  std::vector<Coord> all(split.train);
  all.insert(all.end(), split.heldout.begin(), split.heldout.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
  EXPECT_EQ(all.size(), t.layer_entries(0).size());
  for (const auto& c : all) EXPECT_EQ(c.k, 0u);
}

TEST(SplitCells, StratificationWithinOneItem) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = labelled_layer(7 + seed % 5, 20 + seed);
    for (double f : {0.1, 0.2, 0.35, 0.5}) {
      const auto split = split_cells(t, 0, f, seed);
      std::size_t held = 0, total = 0;
      for (const auto& e : t.layer_entries(0)) {
        if (e.value < 0.5) continue;
        ++total;
        held += std::binary_search(split.heldout.begin(), split.heldout.end(), e.at);
      }
      EXPECT_LE(std::abs(static_cast<double>(held) - f * static_cast<double>(total)), 1.0);
    }
  }
}

TEST(SplitCells, InsufficientClassMembers) {
  const auto t = labelled_layer(1, 10);
  try {
    split_cells(t, 0, 0.2, 1);
    FAIL() << "expected throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "insufficient class members");
  }
  EXPECT_THROW(split_cells(labelled_layer(3, 3), 0, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(split_cells(labelled_layer(3, 3), 0, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(split_cells(labelled_layer(3, 3), 5, 0.2, 1), std::invalid_argument);
}

// Reference draw written from the stream layout alone: words come from
// Philox blocks with counter (block, layer, purpose<<24 | class, 0) and key
// (seed lo, seed hi); each class is sorted, Fisher-Yates shuffled from the
// top with rejection-sampled indices, and the first round(f*n) are held out.
std::vector<Coord> reference_heldout(const SparseTensor& t, std::uint32_t layer, double fraction,
                                     std::uint64_t seed) {
  std::vector<Coord> pos, neg, out;
  for (const auto& e : t.entries()) {
    if (e.at.k == layer) (e.value >= 0.5 ? pos : neg).push_back(e.at);
  }
  auto draw = [&](std::vector<Coord> items, std::uint32_t cls) {
    std::sort(items.begin(), items.end());
    std::vector<std::uint32_t> words;
    std::uint32_t block = 0;
    std::size_t next = 0;
    auto word = [&]() {
      if (next == words.size()) {
        const auto b = Philox4x32::block({block++, layer, (4u << 24) | cls, 0},
                                         {static_cast<std::uint32_t>(seed),
                                          static_cast<std::uint32_t>(seed >> 32)});
        words.insert(words.end(), b.begin(), b.end());
      }
      return words[next++];
    };
    for (std::size_t n = items.size(); n > 1; --n) {
      const std::uint64_t range = n;
      const std::uint64_t limit = (std::uint64_t{1} << 32) - ((std::uint64_t{1} << 32) % range);
      std::uint64_t r;
      // Accept words from the top of the range so every residue is equally likely.
      do r = word(); while (r < (std::uint64_t{1} << 32) - limit);
      std::swap(items[n - 1], items[r % range]);
    }
    const auto take = static_cast<std::size_t>(std::floor(fraction * items.size() + 0.5));
    out.insert(out.end(), items.begin(), items.begin() + take);
  };
  draw(pos, 1);
  draw(neg, 0);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(SplitCells, MatchesReferenceDraw) {
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 0xDEADBEEFCAFEull}) {
    const auto t = labelled_layer(13, 29);
    EXPECT_EQ(split_cells(t, 0, 0.2, seed).heldout, reference_heldout(t, 0, 0.2, seed));
  }
}

TEST(SplitCells, FixtureOutcomeSliceMatchesReference) {
  const auto bundle = load_tensor(testing::data_path("pipeline/expected_tensor.tsv"),
                                  testing::data_path("pipeline/expected_tensor.meta.json"));
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto split = split_cells(bundle.tensor, 0, 0.2, seed);
    EXPECT_EQ(split.heldout, reference_heldout(bundle.tensor, 0, 0.2, seed));
    // Two of each class, round(0.4) = 0 held out per class.
    EXPECT_TRUE(split.heldout.empty());
  }
  const auto wide = split_cells(bundle.tensor, 0, 0.5, 3);
  EXPECT_EQ(wide.heldout, reference_heldout(bundle.tensor, 0, 0.5, 3));
  EXPECT_EQ(wide.heldout.size(), 2u);
}

}  // namespace
}  // namespace btf
