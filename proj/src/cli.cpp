// Copyright 2026 The skillner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skillner/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skillner/clueminer.hpp"
#include "skillner/corpus.hpp"
#include "skillner/error.hpp"
#include "skillner/eval.hpp"
#include "skillner/graph.hpp"
#include "skillner/ingest.hpp"
#include "skillner/mlp.hpp"
#include "skillner/svm.hpp"
#include "skillner/text_format.hpp"
#include "skillner/version.hpp"

namespace skillner {

namespace {

using Provenance = std::vector<std::pair<std::string, std::string>>;

Provenance base_provenance(std::uint64_t seed) {
  return {{kToolkitName, kToolkitVersion}, {"seed", std::to_string(seed)}};
}

int cmd_annotate(const std::string& input, const std::string& out,
                 const std::string& source_id) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + input);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::vector<Sentence> sentences =
      naive_annotate(buffer.str(), source_id);
  write_conll(sentences, out, kAnnotatorNaive);
  return 0;
}

int cmd_mine_clues(const std::string& seeds_path, const std::string& corpus_path,
                   const std::string& out, double threshold,
                   std::size_t max_wildcard, std::uint64_t seed,
                   std::ostream* log) {
  const std::vector<SeedSkill> seeds = read_seed_file(seeds_path);
  const ConllFile corpus = read_conll_file(corpus_path);
  MatchOptions options;
  options.max_wildcard = max_wildcard;
  const std::vector<ExtractionContextHit> hits =
      collect_contexts(seeds, corpus.sentences, options);
  const std::vector<ClueRecord> grouped = group_variants(hits);
  const std::vector<ClueRecord> kept = pareto_cutoff(grouped, threshold);
  Provenance provenance = base_provenance(seed);
  provenance.push_back({"annotator", corpus.annotator.empty()
                                         ? "unknown"
                                         : corpus.annotator});
  provenance.push_back({"threshold", fmt_double(threshold)});
  provenance.push_back({"contexts", std::to_string(hits.size())});
  write_clue_tsv(kept, out, provenance);
  if (log) {
    *log << "contexts: " << hits.size() << ", clue groups: " << grouped.size()
         << ", kept after cutoff: " << kept.size() << "\n";
  }
  return 0;
}

int cmd_train(const std::string& model_kind, const std::string& corpus_path,
              const std::string& out, const SvmConfig& svm_config,
              const MlpConfig& mlp_config, const std::string& embeddings,
              std::ostream* log) {
  const ConllFile corpus = read_conll_file(corpus_path);
  const std::string annotator =
      corpus.annotator.empty() ? "unknown" : corpus.annotator;
  if (model_kind == "svm") {
    const LinearSvmModel model =
        train_svm(corpus.sentences, svm_config, annotator, log);
    save_svm(model, out);
  } else {
    MlpModel model = init_mlp(fit_word_vocab(corpus.sentences), mlp_config);
    model.annotator = annotator;
    if (!embeddings.empty()) {
      const std::size_t loaded = load_pretrained_embeddings(model, embeddings);
      if (log) *log << "loaded " << loaded << " pretrained embedding rows\n";
    }
    train_mlp_inplace(model, corpus.sentences, log);
    save_mlp(model, out);
  }
  return 0;
}

int cmd_eval(const std::string& corpus_path, const std::string& model_path,
             const std::string& out, const SplitConfig& split,
             const SvmConfig& svm_config, const MlpConfig& mlp_config,
             std::ostream* log) {
  const ConllFile corpus = read_conll_file(corpus_path);
  const std::string annotator =
      corpus.annotator.empty() ? "unknown" : corpus.annotator;

  if (!model_path.empty()) {
    // Score one existing model on the held-out part of the split.
    std::vector<Sentence> train, test;
    split_corpus(corpus.sentences, split, &train, &test);
    const std::unique_ptr<Tagger> tagger = load_tagger(model_path);
    std::vector<std::vector<BioTag>> gold, pred;
    for (const Sentence& sentence : test) {
      gold.push_back(sentence_tags(sentence));
      pred.push_back(tagger->predict(sentence));
    }
    EvalReport report = score_tokens(gold, pred);
    report.annotator = annotator;
    std::cout << format_report_table(tagger->id(), report);
    if (!out.empty()) {
      std::ofstream file(out, std::ios::binary);
      if (!file) throw DataError("cannot write report file: " + out);
      for (const auto& [key, value] : base_provenance(split.seed)) {
        file << "# " << key << " = " << value << "\n";
      }
      file << "# model = " << tagger->id() << "\n";
      file << "# annotator = " << annotator << "\n";
      file << report_tsv_rows(tagger->id(), report);
    }
    return 0;
  }

  const ModelComparison comparison =
      compare_models(corpus.sentences, split, svm_config, mlp_config,
                     annotator, log);
  std::cout << format_comparison_table(comparison);
  if (!out.empty()) {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw DataError("cannot write report file: " + out);
    for (const auto& [key, value] : base_provenance(split.seed)) {
      file << "# " << key << " = " << value << "\n";
    }
    file << "# annotator = " << annotator << "\n";
    file << "# note = " << comparison.svm_report.note << "\n";
    file << "# winner = "
         << (comparison.winner == Winner::Svm
                 ? "SVM"
                 : comparison.winner == Winner::Mlp ? "MLP" : "tie")
         << "\n";
    file << report_tsv_rows("SVM", comparison.svm_report);
    file << report_tsv_rows("MLP", comparison.mlp_report);
  }
  return 0;
}

int cmd_extract(const std::string& model_path, const std::string& skills,
                const std::string& occupations, const std::string& relations,
                const std::string& fields_name, const std::string& conll_path,
                const std::string& out, const std::string& out_assignments,
                std::uint64_t seed, std::ostream* log) {
  const IngestResult ingested =
      ingest_esco(skills, occupations, relations, log);
  const std::unique_ptr<Tagger> tagger = load_tagger(model_path);

  ExtractFields fields = ExtractFields::Both;
  if (fields_name == "label") fields = ExtractFields::Label;
  else if (fields_name == "description") fields = ExtractFields::Description;

  ExtractionRun run;
  if (!conll_path.empty()) {
    run = extract_skills_conll(ingested.records, read_conll(conll_path),
                               *tagger);
  } else {
    run = extract_skills(ingested.records, *tagger, fields);
  }

  Provenance provenance = base_provenance(seed);
  provenance.push_back({"model", run.model_id});
  provenance.push_back({"annotator", run.annotator});
  provenance.push_back({"fields", fields_name});
  write_extraction_tsv(run, out, provenance);
  if (!out_assignments.empty()) {
    write_assignments_csv(ingested.records, run, out_assignments);
  }
  if (log) {
    std::size_t soft = 0;
    for (const ExtractionResult& result : run.results) soft += result.soft;
    *log << "records: " << ingested.records.size()
         << ", unique skills: " << run.results.size() << ", soft: " << soft
         << "\n";
  }
  return 0;
}

struct GraphArtifacts {
  CoocGraph graph;
  Partition partition;
  GraphStats statistics;
};

GraphArtifacts build_graph(const std::string& assignments_path,
                           const std::string& mode_name, double resolution,
                           std::uint64_t seed) {
  const std::vector<Assignment> assignments =
      read_assignments_csv(assignments_path);
  const ProjectionMode mode =
      mode_name == "job" ? ProjectionMode::Job : ProjectionMode::Skill;
  GraphArtifacts artifacts;
  artifacts.graph = project(assignments, mode);
  artifacts.partition = louvain(artifacts.graph, resolution, seed).partition;
  artifacts.statistics = stats(artifacts.graph);
  return artifacts;
}

void print_graph_summary(const GraphArtifacts& artifacts,
                         const std::string& mode_name) {
  int communities = 0;
  for (const int c : artifacts.partition.community) {
    communities = std::max(communities, c + 1);
  }
  std::cout << "mode\t" << mode_name << "\n"
            << "nodes\t" << artifacts.statistics.nodes << "\n"
            << "edges\t" << artifacts.statistics.edges << "\n"
            << "avg_degree\t" << fmt_double(artifacts.statistics.average_degree)
            << "\n"
            << "avg_weighted_degree\t"
            << fmt_double(artifacts.statistics.average_weighted_degree) << "\n"
            << "communities\t" << communities << "\n"
            << "modularity\t" << fmt_double(artifacts.partition.q) << "\n";
}

int cmd_graph(const std::string& assignments_path, const std::string& mode_name,
              double resolution, std::uint64_t seed, const std::string& out) {
  const GraphArtifacts artifacts =
      build_graph(assignments_path, mode_name, resolution, seed);
  Provenance provenance = base_provenance(seed);
  provenance.push_back({"mode", mode_name});
  provenance.push_back({"resolution", fmt_double(resolution)});
  provenance.push_back({"q", fmt_double(artifacts.partition.q)});
  write_partition_tsv(artifacts.graph, artifacts.partition, out, provenance);
  print_graph_summary(artifacts, mode_name);
  return 0;
}

int cmd_export_gexf(const std::string& assignments_path,
                    const std::string& mode_name, double resolution,
                    std::uint64_t seed, const std::string& out) {
  const GraphArtifacts artifacts =
      build_graph(assignments_path, mode_name, resolution, seed);
  std::ostringstream description;
  description << "mode=" << mode_name << " seed=" << seed
              << " resolution=" << fmt_double(resolution)
              << " q=" << fmt_double(artifacts.partition.q);
  export_gexf(artifacts.graph, artifacts.partition, out, description.str());
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"soft-skill mining toolkit: clue mining, BIO taggers, "
               "co-occurrence graphs"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file; command-line flags win");

  std::uint64_t seed = 42;
  bool quiet = false;
  app.add_option("--seed", seed, "seed for every stochastic step")
      ->capture_default_str();
  app.add_flag("--quiet", quiet, "suppress progress output");

  // annotate
  auto* annotate = app.add_subcommand(
      "annotate", "tokenize raw text with the fallback annotator");
  std::string annotate_input, annotate_out, annotate_source;
  annotate->add_option("--input", annotate_input, "raw UTF-8 text file")
      ->required();
  annotate->add_option("--out", annotate_out, "corpus file to write")
      ->required();
  annotate->add_option("--source-id", annotate_source,
                       "source id recorded on every sentence");

  // mine-clues
  auto* mine = app.add_subcommand(
      "mine-clues", "mine clue phrases around seed skills");
  std::string mine_seeds, mine_corpus, mine_out;
  double mine_threshold = 0.8;
  std::size_t mine_wildcard = 10;
  mine->add_option("--seeds", mine_seeds, "seed skill list (label TAB lemmas)")
      ->required();
  mine->add_option("--corpus", mine_corpus, "annotated corpus")->required();
  mine->add_option("--out", mine_out, "clue TSV to write")->required();
  mine->add_option("--threshold", mine_threshold,
                   "cumulative frequency cutoff")
      ->capture_default_str();
  mine->add_option("--max-wildcard", mine_wildcard,
                   "max tokens one wildcard may absorb")
      ->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "train a tagger on a corpus");
  std::string train_model, train_corpus, train_out, train_embeddings;
  SvmConfig svm_config;
  MlpConfig mlp_config;
  train->add_option("--model", train_model, "classifier kind")
      ->required()
      ->check(CLI::IsMember({"svm", "mlp"}));
  train->add_option("--corpus", train_corpus, "tagged corpus")->required();
  train->add_option("--out", train_out, "model file to write")->required();
  train->add_option("--window", svm_config.window,
                    "svm feature window half-width")
      ->capture_default_str();
  train->add_option("--c", svm_config.c, "svm regularization trade-off")
      ->capture_default_str();
  train->add_option("--epochs", svm_config.epochs, "training epochs")
      ->capture_default_str();
  train->add_option("--embed-dim", mlp_config.embed_dim, "embedding size")
      ->capture_default_str();
  train->add_option("--hidden", mlp_config.hidden, "hidden layer width")
      ->capture_default_str();
  train->add_option("--embed-window", mlp_config.embed_window,
                    "mlp embedding window half-width")
      ->capture_default_str();
  train->add_option("--max-len", mlp_config.max_len, "sequence length")
      ->capture_default_str();
  train->add_option("--batch", mlp_config.batch_size, "batch size")
      ->capture_default_str();
  train->add_option("--dropout", mlp_config.dropout, "dropout rate")
      ->capture_default_str();
  train->add_option("--alpha", mlp_config.alpha, "adam step size")
      ->capture_default_str();
  train->add_option("--embeddings", train_embeddings,
                    "pretrained embedding text file (word v1 ... vD)");

  // eval
  auto* eval = app.add_subcommand(
      "eval", "train both classifiers on a split and compare, or score "
              "an existing model");
  std::string eval_corpus, eval_model, eval_out;
  SplitConfig split;
  SvmConfig eval_svm_config;
  MlpConfig eval_mlp_config;
  int eval_svm_epochs = eval_svm_config.epochs;
  int eval_mlp_epochs = eval_mlp_config.epochs;
  eval->add_option("--corpus", eval_corpus, "tagged corpus")->required();
  eval->add_option("--model", eval_model,
                   "score this model instead of the head-to-head");
  eval->add_option("--out", eval_out, "report TSV to write");
  eval->add_option("--test-fraction", split.test_fraction,
                   "held-out fraction of sentences")
      ->capture_default_str();
  eval->add_option("--window", eval_svm_config.window,
                   "svm feature window half-width")
      ->capture_default_str();
  eval->add_option("--c", eval_svm_config.c, "svm regularization trade-off")
      ->capture_default_str();
  eval->add_option("--svm-epochs", eval_svm_epochs, "svm epochs")
      ->capture_default_str();
  eval->add_option("--mlp-epochs", eval_mlp_epochs, "mlp epochs")
      ->capture_default_str();
  eval->add_option("--dropout", eval_mlp_config.dropout, "mlp dropout rate")
      ->capture_default_str();
  eval->add_option("--alpha", eval_mlp_config.alpha, "adam step size")
      ->capture_default_str();

  // extract
  auto* extract = app.add_subcommand(
      "extract", "run a tagger over taxonomy skill texts");
  std::string extract_model, extract_skills_csv, extract_occupations_csv;
  std::string extract_relations_csv, extract_fields = "both";
  std::string extract_conll, extract_out, extract_assignments;
  extract->add_option("--model", extract_model, "trained model file")
      ->required();
  extract->add_option("--skills", extract_skills_csv,
                      "skills csv (skill_id,skill_label,skill_description)")
      ->required();
  extract->add_option("--occupations", extract_occupations_csv,
                      "occupations csv (occupation_id,occupation_label)")
      ->required();
  extract->add_option("--relations", extract_relations_csv,
                      "relations csv (occupation_id,skill_id,relation_type)")
      ->required();
  extract->add_option("--fields", extract_fields,
                      "which skill text to scan")
      ->check(CLI::IsMember({"label", "description", "both"}))
      ->capture_default_str();
  extract->add_option("--conll", extract_conll,
                      "pre-parsed skill texts (source_id = skill_id); "
                      "replaces the fallback annotator");
  extract->add_option("--out", extract_out, "extraction TSV to write")
      ->required();
  extract->add_option("--out-assignments", extract_assignments,
                      "also write the soft-skill assignment csv");

  // graph
  auto* graph_cmd = app.add_subcommand(
      "graph", "project assignments and cluster with Louvain");
  std::string graph_assignments, graph_mode = "skill", graph_out;
  double graph_resolution = 1.0;
  std::uint64_t graph_seed = 0;
  bool graph_seed_set = false;
  graph_cmd->add_option("--assignments", graph_assignments,
                        "assignment csv (job_id,job_label,skill_id,skill_label)")
      ->required();
  graph_cmd->add_option("--mode", graph_mode, "projection mode")
      ->check(CLI::IsMember({"skill", "job"}))
      ->capture_default_str();
  graph_cmd->add_option("--resolution", graph_resolution,
                        "modularity resolution gamma")
      ->capture_default_str();
  graph_cmd
      ->add_option_function<std::uint64_t>(
          "--seed",
          [&](const std::uint64_t value) {
            graph_seed = value;
            graph_seed_set = true;
          },
          "louvain visit-order seed (defaults to the global --seed)")
      ->expected(1);
  graph_cmd->add_option("--out", graph_out, "partition TSV to write")
      ->required();

  // export-gexf
  auto* gexf = app.add_subcommand("export-gexf",
                                  "project, cluster and export GEXF 1.2");
  std::string gexf_assignments, gexf_mode = "skill", gexf_out;
  double gexf_resolution = 1.0;
  std::uint64_t gexf_seed = 0;
  bool gexf_seed_set = false;
  gexf->add_option("--assignments", gexf_assignments, "assignment csv")
      ->required();
  gexf->add_option("--mode", gexf_mode, "projection mode")
      ->check(CLI::IsMember({"skill", "job"}))
      ->capture_default_str();
  gexf->add_option("--resolution", gexf_resolution,
                   "modularity resolution gamma")
      ->capture_default_str();
  gexf->add_option_function<std::uint64_t>(
          "--seed",
          [&](const std::uint64_t value) {
            gexf_seed = value;
            gexf_seed_set = true;
          },
          "louvain visit-order seed (defaults to the global --seed)")
      ->expected(1);
  gexf->add_option("--out", gexf_out, "gexf file to write")->required();

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  std::ostream* log = quiet ? nullptr : &std::cerr;
  try {
    if (annotate->parsed()) {
      return cmd_annotate(annotate_input, annotate_out, annotate_source);
    }
    if (mine->parsed()) {
      return cmd_mine_clues(mine_seeds, mine_corpus, mine_out, mine_threshold,
                            mine_wildcard, seed, log);
    }
    if (train->parsed()) {
      svm_config.seed = seed;
      mlp_config.seed = seed;
      return cmd_train(train_model, train_corpus, train_out, svm_config,
                       mlp_config, train_embeddings, log);
    }
    if (eval->parsed()) {
      split.seed = seed;
      eval_svm_config.seed = seed;
      eval_mlp_config.seed = seed;
      eval_svm_config.epochs = eval_svm_epochs;
      eval_mlp_config.epochs = eval_mlp_epochs;
      return cmd_eval(eval_corpus, eval_model, eval_out, split,
                      eval_svm_config, eval_mlp_config, log);
    }
    if (extract->parsed()) {
      return cmd_extract(extract_model, extract_skills_csv,
                         extract_occupations_csv, extract_relations_csv,
                         extract_fields, extract_conll, extract_out,
                         extract_assignments, seed, log);
    }
    if (graph_cmd->parsed()) {
      return cmd_graph(graph_assignments, graph_mode, graph_resolution,
                       graph_seed_set ? graph_seed : seed, graph_out);
    }
    if (gexf->parsed()) {
      return cmd_export_gexf(gexf_assignments, gexf_mode, gexf_resolution,
                             gexf_seed_set ? gexf_seed : seed, gexf_out);
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace skillner
