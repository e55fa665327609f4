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

#ifndef SKILLNER_INGEST_HPP_
#define SKILLNER_INGEST_HPP_

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "skillner/corpus.hpp"

namespace skillner {

enum class RelationType { Essential, Optional };

RelationType relation_from_string(const std::string& s);
const std::string& to_string(RelationType relation);

/// One joined occupation-skill row from the taxonomy CSVs.
struct EscoRecord {
  std::string occupation_id;
  std::string occupation_label;
  std::string skill_id;
  std::string skill_label;
  std::string skill_description;
  RelationType relation = RelationType::Essential;
};

struct IngestResult {
  std::vector<EscoRecord> records;
  std::size_t dropped_missing_skill = 0;
  std::size_t dropped_missing_occupation = 0;
  std::size_t dropped_bad_relation = 0;
};

/// Joins relations (occupation_id, skill_id, relation_type) against the
/// skill and occupation tables. Dangling references are dropped and
/// counted; a warning per kind goes to `log` when given.
///
/// Expected headers:
///   skills csv:      skill_id, skill_label, skill_description
///   occupations csv: occupation_id, occupation_label
///   relations csv:   occupation_id, skill_id, relation_type
IngestResult ingest_esco(const std::string& skills_csv,
                         const std::string& occupations_csv,
                         const std::string& relations_csv,
                         std::ostream* log = nullptr);

/// Either trained classifier behind one prediction surface.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<BioTag> predict(const Sentence& sentence) const = 0;
  /// "svm-<hash>" / "mlp-<hash>" where the hash covers the model file bytes.
  virtual const std::string& id() const = 0;
  /// Annotator flag the model was trained with.
  virtual const std::string& annotator() const = 0;
};

/// Loads a model file saved by either trainer, dispatching on its header.
std::unique_ptr<Tagger> load_tagger(const std::string& path);

enum class ExtractFields { Label, Description, Both };

struct ExtractedSpan {
  std::size_t sentence_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
};

/// Extraction outcome for one unique skill. A skill is soft iff at least
/// one extraction context was predicted in its label or description.
struct ExtractionResult {
  std::string skill_id;
  std::string skill_label;
  std::vector<ExtractedSpan> spans;
  bool soft = false;
};

struct ExtractionRun {
  std::vector<ExtractionResult> results;  // first-appearance record order
  std::string model_id;
  std::string annotator;  // annotator used for the scanned text
};

/// Runs the tagger over each unique skill's text, annotated with the
/// fallback annotator.
ExtractionRun extract_skills(const std::vector<EscoRecord>& records,
                             const Tagger& tagger,
                             ExtractFields fields = ExtractFields::Both);

/// External-parser path: `parsed` holds pre-annotated sentences whose
/// source_id is the skill_id they describe.
ExtractionRun extract_skills_conll(const std::vector<EscoRecord>& records,
                                   const std::vector<Sentence>& parsed,
                                   const Tagger& tagger);

/// TSV of extraction results (skill_id, soft, span count, spans) behind
/// provenance comment lines.
void write_extraction_tsv(const ExtractionRun& run, const std::string& path,
                          const std::vector<std::pair<std::string, std::string>>&
                              provenance = {});

/// Assignment table (job_id, job_label, skill_id, skill_label) restricted
/// to skills the run flagged soft; feeds the graph subcommands.
void write_assignments_csv(const std::vector<EscoRecord>& records,
                           const ExtractionRun& run, const std::string& path);

}  // namespace skillner

#endif  // SKILLNER_INGEST_HPP_
