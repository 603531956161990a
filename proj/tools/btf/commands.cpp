// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "btf/cell_split.hpp"
#include "btf/checkpoint.hpp"
#include "btf/errors.hpp"
#include "btf/evaluation.hpp"
#include "btf/evidence.hpp"
#include "btf/simulate.hpp"
#include "btf/tensor_io.hpp"
#include "btf/tsv.hpp"

namespace btf::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void require_file(const char* flag, const fs::path& path) {
  if (path.empty()) throw std::invalid_argument(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) {
    throw DataError(std::string(flag) + ": file not found: " + path.string());
  }
}

void write_json(const fs::path& path, const json& value) {
  write_atomic(path, [&](std::ostream& out) { out << value.dump(2) << '\n'; });
}

std::vector<EvidenceLayer> resolve_evidence_layers(const std::vector<std::string>& names) {
  std::vector<EvidenceLayer> layers;
  for (const auto& name : names) {
    if (name == "all" || name == "combined") {
      layers = {EvidenceLayer::RareDisease, EvidenceLayer::GeneBurden, EvidenceLayer::Gwas};
      continue;
    }
    auto layer = parse_layer(name);
    if (!layer) throw std::invalid_argument("--layers: unknown layer '" + name + "'");
    layers.push_back(*layer);
  }
  std::sort(layers.begin(), layers.end());
  layers.erase(std::unique(layers.begin(), layers.end()), layers.end());
  return layers;
}

// Layer indices in a loaded tensor for a list of names. The outcome layer
// (index 0) always comes first; "all"/"combined" selects every layer.
std::vector<std::uint32_t> resolve_tensor_layers(const ModeIndex& layer_index,
                                                 const std::vector<std::string>& names) {
  std::set<std::uint32_t> picked{0};
  for (const auto& name : names) {
    if (name == "all" || name == "combined") {
      for (std::uint32_t k = 0; k < layer_index.size(); ++k) picked.insert(k);
      continue;
    }
    auto idx = layer_index.find(name);
    if (!idx) {
      if (auto alias = parse_layer(name)) idx = layer_index.find(layer_name(*alias));
    }
    if (!idx) throw std::invalid_argument("unknown layer '" + name + "' in tensor metadata");
    picked.insert(*idx);
  }
  return {picked.begin(), picked.end()};
}

TensorBundle load_bundle(const fs::path& tensor, const fs::path& meta) {
  require_file("--tensor", tensor);
  const auto meta_path = meta.empty() ? default_meta_path(tensor) : meta;
  require_file("--meta", meta_path);
  return load_tensor(tensor, meta_path);
}

SamplerSchedule schedule_of(const ModelOptions& m) {
  SamplerSchedule schedule{m.burnin, m.samples, m.thin};
  schedule.validate();
  return schedule;
}

json parse_summary(const std::string& source, std::size_t rows, std::size_t kept,
                   std::size_t dropped, const std::vector<std::string>& warnings) {
  return {{"source", source}, {"rows", rows}, {"kept", kept}, {"dropped", dropped},
          {"warnings", warnings}};
}

template <typename T>
json mapping_summary(const MappingResult<T>& mapped) {
  json conflicts = json::array();
  for (const auto& c : mapped.conflicts) {
    conflicts.push_back({{"gene_id", c.gene_id},
                         {"disease_id", c.disease_id},
                         {"layer", c.layer},
                         {"sources", c.source_ids},
                         {"values", c.values},
                         {"resolved", c.resolved}});
  }
  return {{"unmapped", mapped.unmapped},
          {"unmapped_ids", mapped.unmapped_ids},
          {"merged", mapped.merged},
          {"conflicts", conflicts}};
}

}  // namespace

void cmd_ingest(const IngestOptions& options, std::ostream& log) {
  require_file("--outcomes", options.outcomes);
  require_file("--xref", options.xref);
  if (options.out_dir.empty()) throw std::invalid_argument("--out-dir is required");
  const auto layers = resolve_evidence_layers(options.layers);
  const auto selected = [&](EvidenceLayer l) {
    return std::find(layers.begin(), layers.end(), l) != layers.end();
  };

  const auto xref = OntologyXref::load(options.xref);
  json report;
  report["sources"] = json::array();
  std::vector<EvidenceRecord> evidence;
  std::vector<std::string> warnings;

  auto take = [&](const char* source, Parsed<EvidenceRecord> parsed) {
    report["sources"].push_back(
        parse_summary(source, parsed.rows, parsed.items.size(), parsed.dropped, parsed.warnings));
    warnings.insert(warnings.end(), parsed.warnings.begin(), parsed.warnings.end());
    evidence.insert(evidence.end(), parsed.items.begin(), parsed.items.end());
  };
  if (selected(EvidenceLayer::RareDisease)) {
    require_file("--rare-disease", options.rare_disease);
    std::set<std::string> tiers(options.confidence.begin(), options.confidence.end());
    take("rare_disease", parse_rare_disease(options.rare_disease, tiers));
  }
  if (selected(EvidenceLayer::GeneBurden)) {
    require_file("--gene-burden", options.gene_burden);
    take("gene_burden", parse_gene_burden(options.gene_burden));
  }
  if (selected(EvidenceLayer::Gwas)) {
    require_file("--gwas", options.gwas);
    take("gwas", parse_gwas_l2g(options.gwas, options.l2g_threshold));
  }

  const auto trials = parse_outcomes(options.outcomes);
  report["sources"].push_back(
      parse_summary("outcomes", trials.rows, trials.items.size(), trials.dropped, trials.warnings));
  warnings.insert(warnings.end(), trials.warnings.begin(), trials.warnings.end());
  const auto labeled = label_outcomes(trials.items);

  const auto mapped_evidence = map_ontology(evidence, xref);
  const auto mapped_pairs = map_ontology(labeled, xref);
  report["evidence_mapping"] = mapping_summary(mapped_evidence);
  report["outcome_mapping"] = mapping_summary(mapped_pairs);

  const auto bundle = build_tensor(mapped_evidence.items, mapped_pairs.items, layers);
  const auto& dims = bundle.tensor.dims();
  json layer_cells = json::object();
  for (std::uint32_t k = 0; k < dims.layers; ++k) {
    layer_cells[bundle.modes[2].name(k)] = bundle.tensor.layer_entries(k).size();
  }
  std::size_t labeled_pairs = 0;
  for (const auto& p : mapped_pairs.items) labeled_pairs += p.label.has_value();
  report["tensor"] = {{"dims", {dims.targets, dims.indications, dims.layers}},
                      {"entries", bundle.tensor.size()},
                      {"layers", bundle.modes[2].names()},
                      {"layer_cells", layer_cells}};
  report["outcome_pairs"] = {{"total", mapped_pairs.items.size()}, {"labeled", labeled_pairs}};
  report["l2g_threshold"] = options.l2g_threshold;
  report["confidence_tiers"] = options.confidence;

  fs::create_directories(options.out_dir);
  save_tensor(bundle, options.out_dir / "tensor.tsv", options.out_dir / "tensor.meta.json");
  write_atomic(options.out_dir / "pairs.tsv", [&](std::ostream& out) {
    out << "target_id\tindication_id\tmax_phase\tlabel\n";
    for (const auto& p : mapped_pairs.items) {
      out << p.gene_id << '\t' << p.disease_id << '\t' << p.max_phase << '\t'
          << (p.label ? std::to_string(*p.label) : "NA") << '\n';
    }
  });
  write_json(options.out_dir / "ingest_report.json", report);

  for (const auto& w : warnings) log << "warning: " << w << '\n';
  log << "tensor dims (" << dims.targets << "," << dims.indications << "," << dims.layers
      << "), " << bundle.tensor.size() << " entries -> " << options.out_dir.string() << '\n';
}

void cmd_train(const TrainOptions& options, std::ostream& log) {
  if (options.out_dir.empty()) throw std::invalid_argument("--out-dir is required");
  const auto full = load_bundle(options.tensor, options.meta);
  const auto bundle =
      select_bundle_layers(full, resolve_tensor_layers(full.modes[2], options.layers));
  const auto schedule = schedule_of(options.model);
  const auto& dims = bundle.tensor.dims();

  SparseTensor training = bundle.tensor;
  std::vector<Coord> heldout;
  if (options.holdout) {
    const auto split = split_cells(bundle.tensor, 0, options.heldout_fraction, options.model.seed);
    heldout = split.heldout;
    training = remove_cells(bundle.tensor, heldout);
  }

  std::vector<Coord> query;
  if (options.query == "all" || options.query == "unobserved" || options.query == "observed") {
    for (std::uint32_t i = 0; i < dims.targets; ++i) {
      for (std::uint32_t j = 0; j < dims.indications; ++j) {
        const Coord at{i, j, 0};
        const bool observed = bundle.tensor.contains(at);
        if (options.query == "all" || (options.query == "observed") == observed) query.push_back(at);
      }
    }
  } else {
    throw std::invalid_argument("--query must be all, observed or unobserved");
  }
  // Held-out cells must be scored even when the query excludes them.
  std::set<Coord> query_set(query.begin(), query.end());
  for (const auto& c : heldout) {
    if (query_set.insert(c).second) query.push_back(c);
  }

  const auto& m = options.model;
  auto state = init_model(dims, m.latent_dim, Hyperprior::defaults(m.latent_dim), m.alpha, m.seed);
  const FiberIndex index(training);
  RunOptions run_options;
  run_options.threads = m.threads;
  const auto result = run(state, index, schedule, query, run_options);

  fs::create_directories(options.out_dir);
  save_checkpoint(options.out_dir / "checkpoint", state, schedule, result.retained, &bundle.modes);
  write_atomic(options.out_dir / "predictions.tsv", [&](std::ostream& out) {
    out << "target_id\tindication_id\tlayer\tscore\n";
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
      const auto& at = result.cells[c];
      out << bundle.modes[0].name(at.i) << '\t' << bundle.modes[1].name(at.j) << '\t'
          << bundle.modes[2].name(at.k) << '\t' << format_double(result.predictions[c]) << '\n';
    }
  });

  json report = {{"retained", result.retained},
                 {"layers", bundle.modes[2].names()},
                 {"training_entries", training.size()},
                 {"query_cells", query.size()}};
  if (options.holdout) {
    std::map<Coord, double> score;
    for (std::size_t c = 0; c < result.cells.size(); ++c) score[result.cells[c]] = result.predictions[c];
    std::vector<double> scores;
    std::vector<int> labels;
    for (const auto& c : heldout) {
      scores.push_back(score.at(c));
      labels.push_back(*bundle.tensor.lookup(c) >= 0.5 ? 1 : 0);
    }
    report["heldout"] = {{"cells", heldout.size()},
                         {"auroc", auroc(scores, labels)},
                         {"f1", f1_score(scores, labels, 0.5)},
                         {"imbalance", class_imbalance(labels)}};
    log << "held-out AUROC " << report["heldout"]["auroc"].get<double>() << '\n';
  }
  write_json(options.out_dir / "train_report.json", report);
  log << "retained " << result.retained << " samples; " << result.cells.size()
      << " predictions -> " << options.out_dir.string() << '\n';
}

void cmd_evaluate(const EvaluateOptions& options, std::ostream& log) {
  if (options.out.empty()) throw std::invalid_argument("--out is required");
  const auto full = load_bundle(options.tensor, options.meta);

  std::vector<std::string> models = options.models;
  if (models.empty()) {
    for (std::uint32_t k = 1; k < full.modes[2].size(); ++k) models.push_back(full.modes[2].name(k));
    models.emplace_back("combined");
  }
  std::vector<std::uint64_t> seeds = options.seeds;
  if (seeds.empty()) {
    for (int r = 0; r < options.n_repeats; ++r) seeds.push_back(options.model.seed + r);
  }
  if (seeds.size() != static_cast<std::size_t>(options.n_repeats)) {
    throw std::invalid_argument("--seeds must list exactly --n-repeats values");
  }

  const auto& m = options.model;
  EvalConfig config;
  config.latent_dim = m.latent_dim;
  config.alpha = m.alpha;
  config.schedule = schedule_of(m);
  config.heldout_fraction = options.heldout_fraction;
  config.threshold = options.threshold;
  config.threads = m.threads;

  json out_models = json::array();
  for (const auto& model : models) {
    std::vector<std::string> parts;
    std::stringstream ss(model);
    for (std::string part; std::getline(ss, part, '+');) parts.push_back(part);
    const auto layers = resolve_tensor_layers(full.modes[2], parts);
    const auto bundle = select_bundle_layers(full, layers);
    config.model_name = model;
    const auto report = repeated_eval(bundle.tensor, config, options.n_repeats, seeds);
    auto entry = to_json(report);
    entry["layers"] = bundle.modes[2].names();
    out_models.push_back(entry);
    log << model << ": AUROC " << report.auroc_mean << " +/- " << report.auroc_sd << ", F1 "
        << report.f1_mean << " +/- " << report.f1_sd << ", imbalance " << report.imbalance << '\n';
  }
  write_json(options.out, {{"models", out_models},
                           {"heldout_fraction", options.heldout_fraction},
                           {"seeds", seeds},
                           {"schedule", {{"burnin", m.burnin}, {"samples", m.samples}, {"thin", m.thin}}},
                           {"D", m.latent_dim},
                           {"alpha", m.alpha}});
}

void cmd_phase(const PhaseOptions& options, std::ostream& log) {
  require_file("--predictions", options.predictions);
  require_file("--pairs", options.pairs);
  if (options.out_dir.empty()) throw std::invalid_argument("--out-dir is required");

  const auto pred_table =
      TsvTable::read(options.predictions, {"target_id", "indication_id", "layer", "score"});
  const auto pt = pred_table.column("target_id"), pi = pred_table.column("indication_id"),
             pl = pred_table.column("layer"), ps = pred_table.column("score");
  std::vector<ScoredPair> predictions;
  for (const auto& row : pred_table.rows()) {
    if (row.fields[pl] != kOutcomeLayerName) continue;
    predictions.push_back({row.fields[pt], row.fields[pi], parse_double(row.fields[ps], "score")});
  }

  const auto pair_table = TsvTable::read(options.pairs, {"target_id", "indication_id", "max_phase"});
  const auto qt = pair_table.column("target_id"), qi = pair_table.column("indication_id"),
             qp = pair_table.column("max_phase");
  std::vector<PhasedPair> pairs;
  std::set<std::pair<std::string, std::string>> known;
  for (const auto& row : pair_table.rows()) {
    pairs.push_back({row.fields[qt], row.fields[qi],
                     static_cast<int>(parse_int(row.fields[qp], "max_phase"))});
    known.insert({row.fields[qt], row.fields[qi]});
  }
  // Scores for grid cells without any trial are not part of the comparison.
  std::erase_if(predictions, [&](const ScoredPair& p) {
    return !known.contains({p.target_id, p.indication_id});
  });

  const auto analysis = phase_analysis(predictions, pairs);
  fs::create_directories(options.out_dir);
  write_atomic(options.out_dir / "phase_analysis.tsv", [&](std::ostream& out) {
    out << "phase_a\tphase_b\tU\tp_raw\tp_corrected\n";
    for (const auto& c : analysis.pairwise) {
      out << c.phase_a << '\t' << c.phase_b << '\t' << format_double(c.u) << '\t'
          << format_double(c.p_raw) << '\t' << format_double(c.p_corrected) << '\n';
    }
    for (const auto& [phase, n] : analysis.excluded) out << phase << "\tNA\tNA\tNA\tNA\n";
  });
  write_json(options.out_dir / "phase_analysis.json", to_json(analysis));
  for (const auto& [phase, n] : analysis.excluded) {
    log << "warning: phase " << phase << " excluded (" << n << " members)\n";
  }
  log << analysis.pairwise.size() << " pairwise comparisons -> " << options.out_dir.string() << '\n';
}

void cmd_simulate(const SimulateOptions& options, std::ostream& log) {
  if (options.out_dir.empty()) throw std::invalid_argument("--out-dir is required");
  SynthConfig config;
  config.dims = {options.targets, options.indications, options.layers};
  config.rank = options.rank;
  config.noise_sd = options.noise_sd;
  config.observed_fraction = options.observed_fraction;
  config.coupling = options.coupling;
  config.binarize_outcome = options.binarize_outcome;
  config.seed = options.seed;
  const auto data = generate(config);

  fs::create_directories(options.out_dir);
  save_tensor(data.bundle, options.out_dir / "tensor.tsv", options.out_dir / "tensor.meta.json");
  const auto& dims = data.bundle.tensor.dims();
  write_atomic(options.out_dir / "truth.tsv", [&](std::ostream& out) {
    out << "i\tj\tk\ttruth\tobserved\n";
    for (std::uint32_t i = 0; i < dims.targets; ++i) {
      for (std::uint32_t j = 0; j < dims.indications; ++j) {
        for (std::uint32_t k = 0; k < dims.layers; ++k) {
          const Coord at{i, j, k};
          out << i << '\t' << j << '\t' << k << '\t' << format_double(data.truth_at(at)) << '\t'
              << (data.is_observed(at) ? 1 : 0) << '\n';
        }
      }
    }
  });
  log << "simulated (" << dims.targets << "," << dims.indications << "," << dims.layers << "), "
      << data.bundle.tensor.size() << " observed cells -> " << options.out_dir.string() << '\n';
}

namespace {

void add_model_flags(CLI::App* sub, ModelOptions& m) {
  sub->add_option("-D,--latent-dim", m.latent_dim, "Latent dimension")->capture_default_str();
  sub->add_option("--alpha", m.alpha, "Observation precision")->capture_default_str();
  sub->add_option("--burnin", m.burnin, "Burn-in sweeps")->capture_default_str();
  sub->add_option("--samples", m.samples, "Post burn-in sweeps")->capture_default_str();
  sub->add_option("--thin", m.thin, "Keep every thin-th sweep")->capture_default_str();
  sub->add_option("--seed", m.seed, "Random seed")->capture_default_str();
  sub->add_option("--threads", m.threads, "Worker threads")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Latent-factor scoring of target x indication x evidence tensors", "btf"};
  app.set_config("--config", "", "Key-value config file; flags override it");
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse curated evidence and build the tensor");
  ingest_cmd->add_option("--rare-disease", ingest.rare_disease, "rare_disease.tsv");
  ingest_cmd->add_option("--gene-burden", ingest.gene_burden, "gene_burden.tsv");
  ingest_cmd->add_option("--gwas", ingest.gwas, "gwas_l2g.tsv");
  ingest_cmd->add_option("--outcomes", ingest.outcomes, "outcomes.tsv")->required();
  ingest_cmd->add_option("--xref", ingest.xref, "EFO to MeSH xref.tsv")->required();
  ingest_cmd->add_option("--layers", ingest.layers, "Evidence layers (rare,burden,gwas|all)")
      ->delimiter(',')
      ->capture_default_str();
  ingest_cmd->add_option("--l2g-threshold", ingest.l2g_threshold, "Minimum L2G score kept")
      ->capture_default_str();
  ingest_cmd->add_option("--confidence", ingest.confidence, "Accepted rare-disease tiers")
      ->delimiter(',')
      ->capture_default_str();
  ingest_cmd->add_option("--out-dir", ingest.out_dir, "Output directory")->required();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Run the Gibbs sampler and write predictions");
  train_cmd->add_option("--tensor", train.tensor, "tensor.tsv")->required();
  train_cmd->add_option("--meta", train.meta, "Sidecar metadata (default: <tensor>.meta.json)");
  train_cmd->add_option("--out-dir", train.out_dir, "Output directory")->required();
  train_cmd->add_option("--layers", train.layers, "Evidence layers to include")
      ->delimiter(',')
      ->capture_default_str();
  train_cmd->add_option("--query", train.query, "Outcome cells to score: all|observed|unobserved")
      ->capture_default_str();
  train_cmd->add_flag("--holdout", train.holdout, "Hold out outcome cells and report AUROC");
  train_cmd->add_option("--heldout-fraction", train.heldout_fraction)->capture_default_str();
  add_model_flags(train_cmd, train.model);

  EvaluateOptions evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "Repeated stratified hold-out evaluation");
  eval_cmd->add_option("--tensor", evaluate.tensor, "tensor.tsv")->required();
  eval_cmd->add_option("--meta", evaluate.meta, "Sidecar metadata");
  eval_cmd->add_option("--out", evaluate.out, "Report JSON")->required();
  eval_cmd->add_option("--models", evaluate.models,
                       "Layer sets, e.g. rare_disease,gwas,combined or rare+gwas")
      ->delimiter(',');
  eval_cmd->add_option("--n-repeats", evaluate.n_repeats)->capture_default_str();
  eval_cmd->add_option("--seeds", evaluate.seeds, "Explicit per-repeat seeds")->delimiter(',');
  eval_cmd->add_option("--heldout-fraction", evaluate.heldout_fraction)->capture_default_str();
  eval_cmd->add_option("--threshold", evaluate.threshold, "F1 threshold")->capture_default_str();
  add_model_flags(eval_cmd, evaluate.model);

  PhaseOptions phase;
  auto* phase_cmd = app.add_subcommand("phase-analysis", "Phase-grouped Mann-Whitney tests");
  phase_cmd->add_option("--predictions", phase.predictions, "predictions.tsv")->required();
  phase_cmd->add_option("--pairs", phase.pairs, "pairs.tsv from ingest")->required();
  phase_cmd->add_option("--out-dir", phase.out_dir, "Output directory")->required();

  SimulateOptions simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic coupled tensor");
  sim_cmd->add_option("--targets", simulate.targets)->capture_default_str();
  sim_cmd->add_option("--indications", simulate.indications)->capture_default_str();
  sim_cmd->add_option("--layers", simulate.layers)->capture_default_str();
  sim_cmd->add_option("--rank", simulate.rank)->capture_default_str();
  sim_cmd->add_option("--noise-sd", simulate.noise_sd)->capture_default_str();
  sim_cmd->add_option("--observed-fraction", simulate.observed_fraction)->capture_default_str();
  sim_cmd->add_option("--coupling", simulate.coupling)->capture_default_str();
  sim_cmd->add_flag("--binarize-outcome", simulate.binarize_outcome);
  sim_cmd->add_option("--seed", simulate.seed)->capture_default_str();
  sim_cmd->add_option("--out-dir", simulate.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*ingest_cmd) cmd_ingest(ingest, out);
    else if (*train_cmd) cmd_train(train, out);
    else if (*eval_cmd) cmd_evaluate(evaluate, out);
    else if (*phase_cmd) cmd_phase(phase, out);
    else if (*sim_cmd) cmd_simulate(simulate, out);
    return kSuccess;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::logic_error& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace btf::cli
