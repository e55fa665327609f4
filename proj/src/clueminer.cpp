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

#include "skillner/clueminer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "skillner/error.hpp"

namespace skillner {

namespace {

// Coarse POS tags that never head a clue group.
const std::unordered_set<std::string> kFunctionPos = {
    "ADP", "AUX",  "CCONJ", "CONJ", "DET",   "PART",
    "PRON", "SCONJ", "PUNCT", "SYM",  "NUM", "SPACE"};

// Closed stopword list used when the fallback annotator left pos = "X".
const std::unordered_set<std::string> kStopLemmas = {
    "a",    "an",   "the",  "to",    "of",   "in",   "on",   "at",
    "for",  "with", "and",  "or",    "but",  "is",   "are",  "was",
    "were", "be",   "been", "being", "as",   "by",   "from", "that",
    "this", "these", "those", "it",  "its",  "their", "his",  "her",
    "our",  "your", "my",   ",",     ".",    ";",    ":",    "-"};

bool is_function_word(const AnnotatedToken& token) {
  if (token.pos.empty() || token.pos == "X") {
    return kStopLemmas.count(token.lemma) > 0;
  }
  return kFunctionPos.count(token.pos) > 0;
}

std::string lowercase(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::string surface_phrase(const std::vector<AnnotatedToken>& tokens) {
  std::string out;
  for (const AnnotatedToken& tok : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += lowercase(tok.text);
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string word;
  while (in >> word) parts.push_back(word);
  return parts;
}

}  // namespace

std::vector<Pattern> build_seed_patterns(const std::vector<SeedSkill>& seeds) {
  if (seeds.empty()) throw DataError("seed list is empty");
  std::vector<Pattern> patterns;
  patterns.reserve(seeds.size() * 2);
  for (const SeedSkill& seed : seeds) {
    if (seed.lemmas.empty()) {
      throw DataError("seed '" + seed.label + "' has no lemmas");
    }
    std::vector<PatternStep> prefix;
    prefix.push_back({{{Attr::Pos, "NOUN"}}, Quantifier::One});
    prefix.push_back({{}, Quantifier::ZeroOrMore});
    for (const std::string& lemma : seed.lemmas) {
      prefix.push_back({{{Attr::Lemma, lemma}}, Quantifier::One});
    }
    patterns.push_back(compile_pattern(std::move(prefix), seed.label + ":prefix"));

    std::vector<PatternStep> suffix;
    for (const std::string& lemma : seed.lemmas) {
      suffix.push_back({{{Attr::Lemma, lemma}}, Quantifier::One});
    }
    suffix.push_back({{}, Quantifier::ZeroOrMore});
    suffix.push_back({{{Attr::Lemma, "soft"}}, Quantifier::One});
    suffix.push_back({{{Attr::Lemma, "skill"}}, Quantifier::One});
    patterns.push_back(compile_pattern(std::move(suffix), seed.label + ":suffix"));
  }
  return patterns;
}

std::vector<ExtractionContextHit> collect_contexts(
    const std::vector<SeedSkill>& seeds, const std::vector<Sentence>& corpus,
    const MatchOptions& options) {
  const std::vector<Pattern> patterns = build_seed_patterns(seeds);
  const std::vector<Match> matches = find_all(patterns, corpus, options);

  std::vector<ExtractionContextHit> hits;
  hits.reserve(matches.size());
  for (const Match& match : matches) {
    // Pattern names are "<label>:prefix|suffix"; patterns come in pairs.
    const std::size_t colon = match.pattern_name.rfind(':');
    const std::string label = match.pattern_name.substr(0, colon);
    const bool is_prefix = match.pattern_name.substr(colon + 1) == "prefix";
    std::size_t seed_index = 0;
    for (; seed_index < seeds.size(); ++seed_index) {
      if (seeds[seed_index].label == label) break;
    }
    const std::size_t seed_len = seeds[seed_index].lemmas.size();

    ExtractionContextHit hit;
    hit.match = match;
    hit.seed_index = seed_index;
    if (is_prefix) {
      // [NOUN, *, seed...]: the seed sits at the end, the clue before it.
      hit.clue_side = ClueSide::Before;
      hit.clue_start = match.start;
      hit.clue_end = match.end - seed_len;
    } else {
      // [seed..., *, soft, skill]: the clue trails the seed.
      hit.clue_side = ClueSide::After;
      hit.clue_start = match.start + seed_len;
      hit.clue_end = match.end;
    }
    const Sentence& sentence = corpus[match.sentence_index];
    hit.clue_tokens.assign(sentence.tokens.begin() + hit.clue_start,
                           sentence.tokens.begin() + hit.clue_end);
    hits.push_back(std::move(hit));
  }
  return hits;
}

std::vector<ClueRecord> group_variants(
    const std::vector<ExtractionContextHit>& hits) {
  std::map<std::string, ClueRecord> grouped;
  for (const ExtractionContextHit& hit : hits) {
    const AnnotatedToken* head = nullptr;
    for (const AnnotatedToken& tok : hit.clue_tokens) {
      if (!is_function_word(tok)) {
        head = &tok;
        break;
      }
    }
    if (head == nullptr) head = &hit.clue_tokens.front();
    const std::string key = lowercase(head->lemma);
    ClueRecord& record = grouped[key];
    record.head_lemma = key;
    record.variants.insert(surface_phrase(hit.clue_tokens));
    record.frequency += 1;
  }
  std::vector<ClueRecord> records;
  records.reserve(grouped.size());
  for (auto& [key, record] : grouped) records.push_back(std::move(record));
  std::sort(records.begin(), records.end(),
            [](const ClueRecord& a, const ClueRecord& b) {
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return a.head_lemma < b.head_lemma;
            });
  return records;
}

std::vector<ClueRecord> pareto_cutoff(const std::vector<ClueRecord>& records,
                                      double threshold) {
  if (threshold <= 0.0 || threshold > 1.0) {
    throw DataError("pareto threshold must be in (0, 1]");
  }
  if (records.empty()) return {};
  std::size_t total = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0 && records[i].frequency > records[i - 1].frequency) {
      throw DataError("pareto_cutoff input must be sorted by frequency desc");
    }
    total += records[i].frequency;
  }
  const double target = threshold * static_cast<double>(total);
  std::vector<ClueRecord> kept;
  std::size_t cumulative = 0;
  for (const ClueRecord& record : records) {
    kept.push_back(record);
    cumulative += record.frequency;
    if (static_cast<double>(cumulative) >= target) break;
  }
  return kept;
}

std::vector<SeedSkill> read_seed_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open seed file: " + path);
  std::vector<SeedSkill> seeds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 'label TAB lemmas'");
    }
    SeedSkill seed;
    seed.label = line.substr(0, tab);
    seed.lemmas = split_ws(line.substr(tab + 1));
    if (seed.label.empty() || seed.lemmas.empty()) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": seed needs a label and at least one lemma");
    }
    seeds.push_back(std::move(seed));
  }
  return seeds;
}

void write_clue_tsv(
    const std::vector<ClueRecord>& records, const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write clue file: " + path);
  for (const auto& [key, value] : provenance) {
    out << "# " << key << " = " << value << "\n";
  }
  out << "head_lemma\tfrequency\tvariants\n";
  for (const ClueRecord& record : records) {
    out << record.head_lemma << '\t' << record.frequency << '\t';
    bool first = true;
    for (const std::string& variant : record.variants) {
      if (!first) out << '|';
      out << variant;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace skillner
