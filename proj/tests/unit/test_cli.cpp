// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "btf/commands.hpp"
#include "btf/tensor_io.hpp"
#include "btf/tsv.hpp"
#include "support.hpp"

namespace btf {
namespace {

using nlohmann::json;
using testing::data_path;
using testing::TempDir;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "btf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json read_json(const std::filesystem::path& path) { return json::parse(testing::slurp(path)); }

std::vector<std::string> ingest_args(const std::filesystem::path& out) {
  const auto p = [](const char* f) { return data_path(std::string("pipeline/") + f).string(); };
  return {"ingest",          "--rare-disease", p("rare_disease.tsv"), "--gene-burden",
          p("gene_burden.tsv"), "--gwas",        p("gwas_l2g.tsv"),     "--outcomes",
          p("outcomes.tsv"),  "--xref",         p("xref.tsv"),         "--out-dir",
          out.string()};
}

void expect_no_temp_files(const std::filesystem::path& dir) {
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos) << e.path();
  }
}

TEST(Cli, HelpExitsZero) {
  const auto r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("phase-analysis"), std::string::npos);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"simulate", "--bogus", "1"}).code, 1);
  EXPECT_EQ(cli({"simulate", "--out-dir", "x", "--rank", "abc"}).code, 1);
}

TEST(Cli, IngestFixture) {
  TempDir dir;
  const auto r = cli(ingest_args(dir / "out"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto meta = read_json(dir / "out/tensor.meta.json");
  EXPECT_EQ(meta["dims"], json({3, 2, 4}));
  const auto bundle = load_tensor(dir / "out/tensor.tsv", dir / "out/tensor.meta.json");
  EXPECT_EQ(bundle.tensor.size(), 12u);

  const auto report = read_json(dir / "out/ingest_report.json");
  EXPECT_EQ(report["evidence_mapping"]["unmapped"], 1);
  EXPECT_EQ(report["evidence_mapping"]["conflicts"].size(), 1u);
  EXPECT_EQ(report["evidence_mapping"]["conflicts"][0]["resolved"], 1.0);
  EXPECT_EQ(report["tensor"]["layer_cells"]["gene_burden"], 4);

  const auto pairs = TsvTable::read(dir / "out/pairs.tsv", {"target_id", "indication_id",
                                                             "max_phase", "label"});
  EXPECT_EQ(pairs.rows().size(), 5u);
  expect_no_temp_files(dir.path());
}

TEST(Cli, IngestMissingXrefNamesFlag) {
  TempDir dir;
  auto args = ingest_args(dir / "out");
  for (std::size_t a = 0; a + 1 < args.size(); ++a) {
    if (args[a] == "--xref") args[a + 1] = (dir / "absent.tsv").string();
  }
  const auto r = cli(args);
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("--xref"), std::string::npos) << r.err;
  EXPECT_FALSE(std::filesystem::exists(dir / "out/tensor.tsv"));
}

TEST(Cli, IngestSingleLayer) {
  TempDir dir;
  auto args = ingest_args(dir / "out");
  args.insert(args.end(), {"--layers", "rare"});
  ASSERT_EQ(cli(args).code, 0);
  const auto meta = read_json(dir / "out/tensor.meta.json");
  EXPECT_EQ(meta["dims"][2], 2);
  EXPECT_EQ(meta["layers"], json({"outcome", "rare_disease"}));
}

TEST(Cli, IngestMalformedInputIsDataError) {
  TempDir dir;
  testing::spit(dir / "bad.tsv", "gene_id\tefo_id\tphase\tstatus\tstop_reason_class\nG\tE\tx\tactive\tnone\n");
  auto args = ingest_args(dir / "out");
  for (std::size_t a = 0; a + 1 < args.size(); ++a) {
    if (args[a] == "--outcomes") args[a + 1] = (dir / "bad.tsv").string();
  }
  const auto r = cli(args);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.tsv:2"), std::string::npos) << r.err;
}

TEST(Cli, TrainDefaultsRetainTen) {
  TempDir dir;
  ASSERT_EQ(cli(ingest_args(dir / "in")).code, 0);
  const auto r = cli({"train", "--tensor", (dir / "in/tensor.tsv").string(), "--out-dir",
                      (dir / "model").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto manifest = read_json(dir / "model/checkpoint/manifest.json");
  EXPECT_EQ(manifest["retained"], 10);
  EXPECT_EQ(manifest["D"], 32);
  EXPECT_EQ(manifest["schedule"]["burnin"], 500);
  EXPECT_EQ(manifest["schedule"]["samples"], 3500);
  EXPECT_EQ(manifest["schedule"]["thin"], 350);
  const auto preds = TsvTable::read(dir / "model/predictions.tsv",
                                    {"target_id", "indication_id", "layer", "score"});
  EXPECT_EQ(preds.rows().size(), 6u);  // every outcome-layer cell of the 3 x 2 grid
  for (const auto& row : preds.rows()) {
    const double s = parse_double(row.fields[3], "score");
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
  expect_no_temp_files(dir.path());
}

std::vector<std::string> quick_train(const TempDir& dir, const std::string& out, int threads) {
  return {"train", "--tensor", (dir / "sim/tensor.tsv").string(), "--out-dir", (dir / out).string(),
          "-D", "6", "--burnin", "20", "--samples", "40", "--thin", "10", "--seed", "7",
          "--threads", std::to_string(threads)};
}

TEST(Cli, TrainIsByteReproducible) {
  TempDir dir;
  ASSERT_EQ(cli({"simulate", "--out-dir", (dir / "sim").string(), "--seed", "3"}).code, 0);
  ASSERT_EQ(cli(quick_train(dir, "a", 1)).code, 0);
  ASSERT_EQ(cli(quick_train(dir, "b", 1)).code, 0);
  ASSERT_EQ(cli(quick_train(dir, "c", 4)).code, 0);
  const auto a = testing::slurp(dir / "a/predictions.tsv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, testing::slurp(dir / "b/predictions.tsv"));
  EXPECT_EQ(a, testing::slurp(dir / "c/predictions.tsv"));
  EXPECT_EQ(testing::slurp(dir / "a/checkpoint/U.tsv"), testing::slurp(dir / "c/checkpoint/U.tsv"));
}

TEST(Cli, TrainQueryModes) {
  TempDir dir;
  ASSERT_EQ(cli({"simulate", "--out-dir", (dir / "sim").string(), "--targets", "6",
                 "--indications", "5", "--layers", "2", "--seed", "2"})
                .code,
            0);
  const auto bundle = load_tensor(dir / "sim/tensor.tsv", dir / "sim/tensor.meta.json");
  const auto observed = bundle.tensor.layer_entries(0).size();
  for (const auto& [mode, expect] :
       {std::pair<std::string, std::size_t>{"all", 30}, {"observed", observed},
        {"unobserved", 30 - observed}}) {
    auto args = quick_train(dir, mode, 1);
    args.insert(args.end(), {"--query", mode});
    ASSERT_EQ(cli(args).code, 0);
    EXPECT_EQ(TsvTable::read(dir / mode / "predictions.tsv").rows().size(), expect) << mode;
  }
  auto bad = quick_train(dir, "bad", 1);
  bad.insert(bad.end(), {"--query", "some"});
  EXPECT_EQ(cli(bad).code, 1);
}

TEST(Cli, SimulateThenTrainRecoversHeldOut) {
  TempDir dir;
  ASSERT_EQ(cli({"simulate", "--out-dir", (dir / "sim").string(), "--coupling", "0.9",
                 "--observed-fraction", "0.5", "--binarize-outcome", "--seed", "1"})
                .code,
            0);
  const auto r = cli({"train", "--tensor", (dir / "sim/tensor.tsv").string(), "--out-dir",
                      (dir / "model").string(), "--holdout", "-D", "8", "--alpha", "25",
                      "--burnin", "200", "--samples", "800", "--thin", "80", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = read_json(dir / "model/train_report.json");
  EXPECT_GE(report["heldout"]["auroc"].get<double>(), 0.9);
}

TEST(Cli, EvaluateReportsEveryModel) {
  TempDir dir;
  ASSERT_EQ(cli({"simulate", "--out-dir", (dir / "sim").string(), "--coupling", "0.9",
                 "--observed-fraction", "0.5", "--binarize-outcome", "--seed", "2"})
                .code,
            0);
  const auto r = cli({"evaluate", "--tensor", (dir / "sim/tensor.tsv").string(), "--out",
                      (dir / "eval.json").string(), "-D", "4", "--burnin", "10", "--samples",
                      "20", "--thin", "10", "--n-repeats", "2", "--seeds", "5,5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = read_json(dir / "eval.json");
  const auto& models = report["models"];
  ASSERT_EQ(models.size(), 4u);  // three single-evidence models, then combined
  EXPECT_EQ(models[0]["model"], "evidence1");
  EXPECT_EQ(models[3]["model"], "combined");
  EXPECT_EQ(models[0]["layers"], json({"outcome", "evidence1"}));
  EXPECT_EQ(models[3]["layers"].size(), 4u);
  for (const auto& m : models) {
    EXPECT_TRUE(m.contains("auroc"));
    EXPECT_TRUE(m.contains("f1"));
    EXPECT_TRUE(m.contains("imbalance"));
    EXPECT_EQ(m["auroc"]["sd"], 0.0);
    EXPECT_EQ(m["f1"]["sd"], 0.0);
  }
}

TEST(Cli, EvaluateExplicitModelsAndSeedCount) {
  TempDir dir;
  ASSERT_EQ(cli({"simulate", "--out-dir", (dir / "sim").string(), "--binarize-outcome",
                 "--observed-fraction", "0.5", "--seed", "4"})
                .code,
            0);
  const std::vector<std::string> base{"evaluate", "--tensor", (dir / "sim/tensor.tsv").string(),
                                      "--out", (dir / "eval.json").string(), "-D", "3",
                                      "--burnin", "5", "--samples", "10", "--thin", "5",
                                      "--n-repeats", "2"};
  auto args = base;
  args.insert(args.end(), {"--models", "evidence1+evidence3"});
  ASSERT_EQ(cli(args).code, 0);
  EXPECT_EQ(read_json(dir / "eval.json")["models"][0]["layers"],
            json({"outcome", "evidence1", "evidence3"}));
  args = base;
  args.insert(args.end(), {"--seeds", "1,2,3"});
  EXPECT_EQ(cli(args).code, 1);
  args = base;
  args.insert(args.end(), {"--models", "nope"});
  EXPECT_EQ(cli(args).code, 1);
}

void write_phase_inputs(const TempDir& dir, const std::vector<std::pair<int, double>>& rows) {
  std::ostringstream preds, pairs;
  preds << "target_id\tindication_id\tlayer\tscore\n";
  pairs << "target_id\tindication_id\tmax_phase\tlabel\n";
  for (std::size_t n = 0; n < rows.size(); ++n) {
    preds << "T" << n << "\tI\toutcome\t" << rows[n].second << '\n';
    preds << "T" << n << "\tI\tgwas\t0.99\n";  // other layers are ignored
    pairs << "T" << n << "\tI\t" << rows[n].first << "\tNA\n";
  }
  preds << "Tx\tIx\toutcome\t0.5\n";  // grid cell without a trial
  testing::spit(dir / "predictions.tsv", preds.str());
  testing::spit(dir / "pairs.tsv", pairs.str());
}

Outcome run_phase(const TempDir& dir) {
  return cli({"phase-analysis", "--predictions", (dir / "predictions.tsv").string(), "--pairs",
              (dir / "pairs.tsv").string(), "--out-dir", (dir / "phase").string()});
}

TEST(Cli, PhaseFiveGroupsTenRows) {
  TempDir dir;
  std::vector<std::pair<int, double>> rows;
  for (int phase = 0; phase <= 4; ++phase)
    for (int n = 0; n < 5; ++n) rows.push_back({phase, 0.1 * n + 0.02 * phase});
  write_phase_inputs(dir, rows);
  const auto r = run_phase(dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto table = TsvTable::read(dir / "phase/phase_analysis.tsv",
                                    {"phase_a", "phase_b", "U", "p_raw", "p_corrected"});
  EXPECT_EQ(table.rows().size(), 10u);
  EXPECT_EQ(read_json(dir / "phase/phase_analysis.json")["comparisons"], 10);
}

TEST(Cli, PhaseShiftIsSignificant) {
  TempDir dir;
  std::vector<std::pair<int, double>> rows;
  for (int n = 0; n < 30; ++n) {
    const double base = (n * 37 % 30) / 100.0;
    rows.push_back({1, base});
    rows.push_back({3, base + 0.3});
  }
  write_phase_inputs(dir, rows);
  ASSERT_EQ(run_phase(dir).code, 0);
  const auto table = TsvTable::read(dir / "phase/phase_analysis.tsv");
  ASSERT_EQ(table.rows().size(), 1u + 3u);  // one test, three excluded phases
  EXPECT_EQ(table.rows()[0].fields[0], "1");
  EXPECT_EQ(table.rows()[0].fields[1], "3");
  EXPECT_LT(parse_double(table.rows()[0].fields[4], "p"), 0.05);
}

TEST(Cli, PhaseEmptyGroupWarns) {
  TempDir dir;
  write_phase_inputs(dir, {{1, 0.1}, {1, 0.2}, {2, 0.3}, {2, 0.5}, {4, 0.9}});
  const auto r = run_phase(dir);
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("warning: phase 0 excluded"), std::string::npos);
  EXPECT_NE(r.out.find("warning: phase 4 excluded (1 members)"), std::string::npos);
  const auto text = testing::slurp(dir / "phase/phase_analysis.tsv");
  EXPECT_NE(text.find("0\tNA\tNA\tNA\tNA"), std::string::npos);
  EXPECT_NE(text.find("4\tNA\tNA\tNA\tNA"), std::string::npos);
}

TEST(Cli, SimulateWritesTruth) {
  TempDir dir;
  ASSERT_EQ(cli({"simulate", "--out-dir", (dir / "sim").string(), "--targets", "4",
                 "--indications", "3", "--layers", "2", "--noise-sd", "0",
                 "--observed-fraction", "1", "--seed", "5"})
                .code,
            0);
  const auto truth = TsvTable::read(dir / "sim/truth.tsv", {"i", "j", "k", "truth", "observed"});
  EXPECT_EQ(truth.rows().size(), 24u);
  const auto bundle = load_tensor(dir / "sim/tensor.tsv", dir / "sim/tensor.meta.json");
  for (const auto& row : truth.rows()) {
    const Coord at{static_cast<std::uint32_t>(parse_int(row.fields[0], "i")),
                   static_cast<std::uint32_t>(parse_int(row.fields[1], "j")),
                   static_cast<std::uint32_t>(parse_int(row.fields[2], "k"))};
    EXPECT_EQ(row.fields[4], "1");
    EXPECT_EQ(bundle.tensor.lookup(at), parse_double(row.fields[3], "truth"));
  }
}

TEST(Cli, ConfigFileSetsDefaultsFlagsOverride) {
  TempDir dir;
  testing::spit(dir / "run.ini", "[simulate]\ntargets = 7\nindications = 4\nlayers = 2\nseed = 9\n");
  ASSERT_EQ(cli({"--config", (dir / "run.ini").string(), "simulate", "--out-dir",
                 (dir / "a").string()})
                .code,
            0);
  EXPECT_EQ(read_json(dir / "a/tensor.meta.json")["dims"], json({7, 4, 2}));
  ASSERT_EQ(cli({"--config", (dir / "run.ini").string(), "simulate", "--out-dir",
                 (dir / "b").string(), "--targets", "3"})
                .code,
            0);
  EXPECT_EQ(read_json(dir / "b/tensor.meta.json")["dims"], json({3, 4, 2}));
}

}  // namespace
}  // namespace btf
