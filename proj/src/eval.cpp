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

#include "skillner/eval.hpp"

#include <cstdio>
#include <sstream>

#include "skillner/error.hpp"
#include "skillner/rng.hpp"

namespace skillner {

double LabelCounts::precision() const {
  return tp + fp == 0 ? 0.0
                      : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double LabelCounts::recall() const {
  return tp + fn == 0 ? 0.0
                      : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double LabelCounts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

EvalReport score_tokens(const std::vector<std::vector<BioTag>>& gold,
                        const std::vector<std::vector<BioTag>>& pred) {
  if (gold.size() != pred.size()) {
    throw DataError("gold/pred sentence counts differ");
  }
  EvalReport report;
  bool any_positive_gold = false;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != pred[s].size()) {
      throw DataError("gold/pred lengths differ in sentence " +
                      std::to_string(s));
    }
    for (std::size_t i = 0; i < gold[s].size(); ++i) {
      const int g = static_cast<int>(gold[s][i]);
      const int p = static_cast<int>(pred[s][i]);
      ++report.total_tokens;
      if (g == p) {
        ++report.per_label[g].tp;
      } else {
        ++report.per_label[p].fp;
        ++report.per_label[g].fn;
      }
      if (gold[s][i] != BioTag::O) any_positive_gold = true;
    }
  }
  for (int c = 1; c < kNumBioTags; ++c) {
    report.micro.tp += report.per_label[c].tp;
    report.micro.fp += report.per_label[c].fp;
    report.micro.fn += report.per_label[c].fn;
  }
  report.degenerate = !any_positive_gold ||
                      (report.micro.tp + report.micro.fp == 0) ||
                      (report.micro.tp + report.micro.fn == 0);
  return report;
}

LabelCounts score_spans(const std::vector<std::vector<BioTag>>& gold,
                        const std::vector<std::vector<BioTag>>& pred) {
  if (gold.size() != pred.size()) {
    throw DataError("gold/pred sentence counts differ");
  }
  LabelCounts counts;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const std::vector<Span> g = bio_to_spans(gold[s]);
    const std::vector<Span> p = bio_to_spans(pred[s]);
    std::size_t gi = 0, pi = 0;
    while (gi < g.size() && pi < p.size()) {
      if (g[gi] == p[pi]) {
        ++counts.tp;
        ++gi;
        ++pi;
      } else if (g[gi].start < p[pi].start ||
                 (g[gi].start == p[pi].start && g[gi].end < p[pi].end)) {
        ++counts.fn;
        ++gi;
      } else {
        ++counts.fp;
        ++pi;
      }
    }
    counts.fn += g.size() - gi;
    counts.fp += p.size() - pi;
  }
  return counts;
}

void split_corpus(const std::vector<Sentence>& corpus,
                  const SplitConfig& split, std::vector<Sentence>* train,
                  std::vector<Sentence>* test) {
  if (split.test_fraction <= 0.0 || split.test_fraction >= 1.0) {
    throw DataError("test fraction must be in (0, 1)");
  }
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(split.seed);
  rng.shuffle(order);
  const std::size_t test_count = static_cast<std::size_t>(
      static_cast<double>(corpus.size()) * split.test_fraction);
  if (test_count == 0 || test_count >= corpus.size()) {
    throw DataError("corpus too small to split " +
                    std::to_string(corpus.size()) + " sentences at " +
                    std::to_string(split.test_fraction));
  }
  train->clear();
  test->clear();
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i < corpus.size() - test_count) {
      train->push_back(corpus[order[i]]);
    } else {
      test->push_back(corpus[order[i]]);
    }
  }
}

namespace {

EvalReport score_model(const std::vector<Sentence>& test,
                       const std::vector<std::vector<BioTag>>& gold,
                       const std::vector<std::vector<BioTag>>& pred,
                       const std::string& annotator, const SplitConfig& split) {
  EvalReport report = score_tokens(gold, pred);
  report.annotator = annotator;
  std::ostringstream note;
  note << "micro over B-EXTR/I-EXTR, token-level exact tag match; split "
       << (1.0 - split.test_fraction) << "/" << split.test_fraction
       << " by sentence, seed " << split.seed << "; test sentences "
       << test.size();
  report.note = note.str();
  return report;
}

}  // namespace

ModelComparison compare_models(const std::vector<Sentence>& corpus,
                               const SplitConfig& split,
                               const SvmConfig& svm_config,
                               const MlpConfig& mlp_config,
                               const std::string& annotator,
                               std::ostream* log) {
  std::vector<Sentence> train, test;
  split_corpus(corpus, split, &train, &test);

  std::vector<std::vector<BioTag>> gold;
  gold.reserve(test.size());
  for (const Sentence& sentence : test) gold.push_back(sentence_tags(sentence));

  const LinearSvmModel svm = train_svm(train, svm_config, annotator, log);
  std::vector<std::vector<BioTag>> svm_pred;
  svm_pred.reserve(test.size());
  for (const Sentence& sentence : test) {
    svm_pred.push_back(predict_tags_svm(svm, sentence));
  }

  const MlpModel mlp = train_mlp(train, mlp_config, annotator, log);
  std::vector<std::vector<BioTag>> mlp_pred;
  mlp_pred.reserve(test.size());
  for (const Sentence& sentence : test) {
    mlp_pred.push_back(predict_tags_mlp(mlp, sentence));
  }

  ModelComparison comparison;
  comparison.svm_report = score_model(test, gold, svm_pred, annotator, split);
  comparison.mlp_report = score_model(test, gold, mlp_pred, annotator, split);
  const double svm_f1 = comparison.svm_report.micro.f1();
  const double mlp_f1 = comparison.mlp_report.micro.f1();
  comparison.winner = svm_f1 > mlp_f1   ? Winner::Svm
                      : mlp_f1 > svm_f1 ? Winner::Mlp
                                        : Winner::Tie;
  return comparison;
}

namespace {

std::string pct(double fraction) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "%.1f", fraction * 100.0);
  return buffer;
}

}  // namespace

std::string format_report_table(const std::string& name,
                                const EvalReport& report) {
  std::ostringstream out;
  out << "\tPrecision\tRecall\tF1-score\n";
  out << name << '\t' << pct(report.micro.precision()) << '\t'
      << pct(report.micro.recall()) << '\t' << pct(report.micro.f1()) << '\n';
  for (int c = 0; c < kNumBioTags; ++c) {
    const LabelCounts& counts = report.per_label[c];
    out << name << ":" << to_string(static_cast<BioTag>(c)) << '\t'
        << pct(counts.precision()) << '\t' << pct(counts.recall()) << '\t'
        << pct(counts.f1()) << '\n';
  }
  if (report.degenerate) {
    out << "# warning: degenerate data (a 0/0 metric was reported as 0)\n";
  }
  return out.str();
}

std::string format_comparison_table(const ModelComparison& comparison) {
  std::ostringstream out;
  out << "\tPrecision\tRecall\tF1-score\n";
  const EvalReport* reports[2] = {&comparison.svm_report,
                                  &comparison.mlp_report};
  const char* names[2] = {"SVM", "MLP"};
  for (int i = 0; i < 2; ++i) {
    out << names[i] << '\t' << pct(reports[i]->micro.precision()) << '\t'
        << pct(reports[i]->micro.recall()) << '\t'
        << pct(reports[i]->micro.f1()) << '\n';
  }
  switch (comparison.winner) {
    case Winner::Svm: out << "winner\tSVM\n"; break;
    case Winner::Mlp: out << "winner\tMLP\n"; break;
    case Winner::Tie: out << "winner\ttie\n"; break;
  }
  return out.str();
}

std::string report_tsv_rows(const std::string& name,
                            const EvalReport& report) {
  std::ostringstream out;
  auto row = [&](const std::string& label, const LabelCounts& counts) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f\t%.6f\t%.6f",
                  counts.precision(), counts.recall(), counts.f1());
    out << name << '\t' << label << '\t' << buffer << '\t' << counts.tp
        << '\t' << counts.fp << '\t' << counts.fn << '\n';
  };
  row("micro", report.micro);
  for (int c = 0; c < kNumBioTags; ++c) {
    row(to_string(static_cast<BioTag>(c)), report.per_label[c]);
  }
  return out.str();
}

}  // namespace skillner
