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

#ifndef SKILLNER_EVAL_HPP_
#define SKILLNER_EVAL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "skillner/corpus.hpp"
#include "skillner/mlp.hpp"
#include "skillner/svm.hpp"

namespace skillner {

struct LabelCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  double precision() const;
  double recall() const;
  double f1() const;
};

/// Token-level scores: exact tag-match counts per label, and micro scores
/// pooling tp/fp/fn over the two positive labels (O excluded).
struct EvalReport {
  LabelCounts per_label[kNumBioTags];
  LabelCounts micro;
  std::size_t total_tokens = 0;
  bool degenerate = false;  // no positive gold tags, or a 0/0 metric
  std::string annotator;    // provenance of the scored corpus
  std::string note;         // aggregation/split disclosure for the header
};

/// Counts exact tag matches; gold and pred must have identical shape.
/// A token is a positive iff its tag is B-EXTR or I-EXTR.
EvalReport score_tokens(const std::vector<std::vector<BioTag>>& gold,
                        const std::vector<std::vector<BioTag>>& pred);

/// Span-exact alternative (whole extents must match); kept separate from
/// the token-level protocol above.
LabelCounts score_spans(const std::vector<std::vector<BioTag>>& gold,
                        const std::vector<std::vector<BioTag>>& pred);

struct SplitConfig {
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
};

/// Seeded by-sentence split: shuffled indices, last `test_fraction` of the
/// corpus becomes the test set. Both halves are non-empty or it raises.
void split_corpus(const std::vector<Sentence>& corpus,
                  const SplitConfig& split, std::vector<Sentence>* train,
                  std::vector<Sentence>* test);

enum class Winner { Svm, Mlp, Tie };

struct ModelComparison {
  EvalReport svm_report;
  EvalReport mlp_report;
  Winner winner = Winner::Tie;
};

/// Trains both classifiers on the identical seeded split and scores them on
/// the held-out sentences; the winner has the higher micro-F1.
ModelComparison compare_models(const std::vector<Sentence>& corpus,
                               const SplitConfig& split,
                               const SvmConfig& svm_config,
                               const MlpConfig& mlp_config,
                               const std::string& annotator = "",
                               std::ostream* log = nullptr);

/// Table with the columns Precision / Recall / F1-score (percentages).
std::string format_report_table(const std::string& name,
                                const EvalReport& report);
std::string format_comparison_table(const ModelComparison& comparison);

/// TSV rows (model, label, precision, recall, f1, tp, fp, fn).
std::string report_tsv_rows(const std::string& name,
                            const EvalReport& report);

}  // namespace skillner

#endif  // SKILLNER_EVAL_HPP_
