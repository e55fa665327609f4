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

#include "skillner/ingest.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "skillner/csv.hpp"
#include "skillner/error.hpp"
#include "skillner/mlp.hpp"
#include "skillner/svm.hpp"
#include "skillner/text_format.hpp"

namespace skillner {

namespace {

const std::string kRelationNames[2] = {"essential", "optional"};

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string quoted = "\"";
  for (const char c : value) {
    if (c == '"') quoted += "\"\"";
    else quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

}  // namespace

RelationType relation_from_string(const std::string& s) {
  if (s == "essential") return RelationType::Essential;
  if (s == "optional") return RelationType::Optional;
  throw DataError("unknown relation type: '" + s + "'");
}

const std::string& to_string(RelationType relation) {
  return kRelationNames[static_cast<int>(relation)];
}

IngestResult ingest_esco(const std::string& skills_csv,
                         const std::string& occupations_csv,
                         const std::string& relations_csv, std::ostream* log) {
  struct SkillRow {
    std::string label;
    std::string description;
  };
  std::map<std::string, SkillRow> skills;
  {
    const CsvTable table = read_csv(skills_csv);
    const std::size_t id = table.column("skill_id");
    const std::size_t label = table.column("skill_label");
    const std::size_t description = table.column("skill_description");
    for (const auto& row : table.rows) {
      if (row[id].empty()) throw DataError(skills_csv + ": empty skill_id");
      skills.emplace(row[id], SkillRow{row[label], row[description]});
    }
  }
  std::map<std::string, std::string> occupations;
  {
    const CsvTable table = read_csv(occupations_csv);
    const std::size_t id = table.column("occupation_id");
    const std::size_t label = table.column("occupation_label");
    for (const auto& row : table.rows) {
      if (row[id].empty()) {
        throw DataError(occupations_csv + ": empty occupation_id");
      }
      occupations.emplace(row[id], row[label]);
    }
  }

  IngestResult result;
  const CsvTable table = read_csv(relations_csv);
  const std::size_t occupation_id = table.column("occupation_id");
  const std::size_t skill_id = table.column("skill_id");
  const std::size_t relation_type = table.column("relation_type");
  for (const auto& row : table.rows) {
    const auto occupation = occupations.find(row[occupation_id]);
    if (occupation == occupations.end()) {
      ++result.dropped_missing_occupation;
      continue;
    }
    const auto skill = skills.find(row[skill_id]);
    if (skill == skills.end()) {
      ++result.dropped_missing_skill;
      continue;
    }
    EscoRecord record;
    record.occupation_id = occupation->first;
    record.occupation_label = occupation->second;
    record.skill_id = skill->first;
    record.skill_label = skill->second.label;
    record.skill_description = skill->second.description;
    try {
      record.relation = relation_from_string(row[relation_type]);
    } catch (const DataError&) {
      ++result.dropped_bad_relation;
      continue;
    }
    result.records.push_back(std::move(record));
  }
  if (log) {
    if (result.dropped_missing_occupation > 0) {
      *log << "warning: dropped " << result.dropped_missing_occupation
           << " relation(s) referencing a missing occupation\n";
    }
    if (result.dropped_missing_skill > 0) {
      *log << "warning: dropped " << result.dropped_missing_skill
           << " relation(s) referencing a missing skill\n";
    }
    if (result.dropped_bad_relation > 0) {
      *log << "warning: dropped " << result.dropped_bad_relation
           << " relation(s) with an unknown relation_type\n";
    }
  }
  return result;
}

namespace {

class SvmTagger : public Tagger {
 public:
  SvmTagger(LinearSvmModel model, std::string id)
      : model_(std::move(model)), id_(std::move(id)) {}
  std::vector<BioTag> predict(const Sentence& sentence) const override {
    return predict_tags_svm(model_, sentence);
  }
  const std::string& id() const override { return id_; }
  const std::string& annotator() const override { return model_.annotator; }

 private:
  LinearSvmModel model_;
  std::string id_;
};

class MlpTagger : public Tagger {
 public:
  MlpTagger(MlpModel model, std::string id)
      : model_(std::move(model)), id_(std::move(id)) {}
  std::vector<BioTag> predict(const Sentence& sentence) const override {
    return predict_tags_mlp(model_, sentence);
  }
  const std::string& id() const override { return id_; }
  const std::string& annotator() const override { return model_.annotator; }

 private:
  MlpModel model_;
  std::string id_;
};

std::vector<ExtractedSpan> spans_of(const std::vector<Sentence>& sentences,
                                    const Tagger& tagger) {
  std::vector<ExtractedSpan> spans;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const std::vector<BioTag> tags = tagger.predict(sentences[s]);
    for (const Span& span : bio_to_spans(tags)) {
      ExtractedSpan extracted;
      extracted.sentence_index = s;
      extracted.start = span.start;
      extracted.end = span.end;
      for (std::size_t i = span.start; i < span.end; ++i) {
        if (i > span.start) extracted.surface.push_back(' ');
        extracted.surface += sentences[s].tokens[i].text;
      }
      spans.push_back(std::move(extracted));
    }
  }
  return spans;
}

// Unique skills in first-appearance record order.
std::vector<const EscoRecord*> unique_skills(
    const std::vector<EscoRecord>& records) {
  std::vector<const EscoRecord*> unique;
  std::set<std::string> seen;
  for (const EscoRecord& record : records) {
    if (seen.insert(record.skill_id).second) unique.push_back(&record);
  }
  return unique;
}

}  // namespace

std::unique_ptr<Tagger> load_tagger(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  const std::string hash = hex64(fnv1a(bytes));
  std::istringstream stream(bytes);
  if (bytes.rfind("skillner-svm", 0) == 0) {
    return std::make_unique<SvmTagger>(load_svm(stream), "svm-" + hash);
  }
  if (bytes.rfind("skillner-mlp", 0) == 0) {
    return std::make_unique<MlpTagger>(load_mlp(stream), "mlp-" + hash);
  }
  throw DataError(path + ": not a skillner model file");
}

ExtractionRun extract_skills(const std::vector<EscoRecord>& records,
                             const Tagger& tagger, ExtractFields fields) {
  ExtractionRun run;
  run.model_id = tagger.id();
  run.annotator = kAnnotatorNaive;
  for (const EscoRecord* record : unique_skills(records)) {
    std::vector<Sentence> sentences;
    if (fields != ExtractFields::Description) {
      for (Sentence& s : naive_annotate(record->skill_label, record->skill_id)) {
        sentences.push_back(std::move(s));
      }
    }
    if (fields != ExtractFields::Label) {
      for (Sentence& s :
           naive_annotate(record->skill_description, record->skill_id)) {
        sentences.push_back(std::move(s));
      }
    }
    ExtractionResult result;
    result.skill_id = record->skill_id;
    result.skill_label = record->skill_label;
    result.spans = spans_of(sentences, tagger);
    result.soft = !result.spans.empty();
    run.results.push_back(std::move(result));
  }
  return run;
}

ExtractionRun extract_skills_conll(const std::vector<EscoRecord>& records,
                                   const std::vector<Sentence>& parsed,
                                   const Tagger& tagger) {
  std::map<std::string, std::vector<Sentence>> by_skill;
  for (const Sentence& sentence : parsed) {
    by_skill[sentence.source_id].push_back(sentence);
  }
  ExtractionRun run;
  run.model_id = tagger.id();
  run.annotator = kAnnotatorExternal;
  for (const EscoRecord* record : unique_skills(records)) {
    ExtractionResult result;
    result.skill_id = record->skill_id;
    result.skill_label = record->skill_label;
    const auto it = by_skill.find(record->skill_id);
    if (it != by_skill.end()) {
      result.spans = spans_of(it->second, tagger);
    }
    result.soft = !result.spans.empty();
    run.results.push_back(std::move(result));
  }
  return run;
}

void write_extraction_tsv(
    const ExtractionRun& run, const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write extraction file: " + path);
  for (const auto& [key, value] : provenance) {
    out << "# " << key << " = " << value << "\n";
  }
  out << "skill_id\tsoft\tspan_count\tspans\n";
  for (const ExtractionResult& result : run.results) {
    out << result.skill_id << '\t' << (result.soft ? 1 : 0) << '\t'
        << result.spans.size() << '\t';
    for (std::size_t i = 0; i < result.spans.size(); ++i) {
      const ExtractedSpan& span = result.spans[i];
      if (i > 0) out << '|';
      out << span.sentence_index << ':' << span.start << '-' << span.end
          << ':' << span.surface;
    }
    out << '\n';
  }
}

void write_assignments_csv(const std::vector<EscoRecord>& records,
                           const ExtractionRun& run, const std::string& path) {
  std::set<std::string> soft;
  for (const ExtractionResult& result : run.results) {
    if (result.soft) soft.insert(result.skill_id);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write assignment file: " + path);
  out << "job_id,job_label,skill_id,skill_label\n";
  std::set<std::pair<std::string, std::string>> written;
  for (const EscoRecord& record : records) {
    if (soft.count(record.skill_id) == 0) continue;
    if (!written.insert({record.occupation_id, record.skill_id}).second) {
      continue;
    }
    out << csv_field(record.occupation_id) << ','
        << csv_field(record.occupation_label) << ','
        << csv_field(record.skill_id) << ',' << csv_field(record.skill_label)
        << '\n';
  }
}

}  // namespace skillner
