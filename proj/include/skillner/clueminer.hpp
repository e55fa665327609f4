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

#ifndef SKILLNER_CLUEMINER_HPP_
#define SKILLNER_CLUEMINER_HPP_

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "skillner/corpus.hpp"
#include "skillner/matcher.hpp"

namespace skillner {

/// A seed soft skill: display label plus its lemma sequence in token order,
/// e.g. "problem solving" -> [solve, problem].
struct SeedSkill {
  std::string label;
  std::vector<std::string> lemmas;
};

/// Whether the clue precedes the skill (noun-prefix pattern) or follows it
/// (suffix pattern ending in "soft skill").
enum class ClueSide { Before, After };

/// One extraction context found in the corpus: the match, which seed fired,
/// and the clue token range (the match minus the seed tokens).
struct ExtractionContextHit {
  Match match;
  std::size_t seed_index = 0;
  ClueSide clue_side = ClueSide::Before;
  std::size_t clue_start = 0;  // token extent within the sentence
  std::size_t clue_end = 0;
  std::vector<AnnotatedToken> clue_tokens;
};

/// A grouped clue: head content-word lemma, its distinct surface variants,
/// and the aggregated occurrence count.
struct ClueRecord {
  std::string head_lemma;
  std::set<std::string> variants;
  std::size_t frequency = 0;
};

/// Builds the two context patterns per seed: the noun-prefix pattern
/// [{POS:NOUN},{OP:*},<seed lemmas>] and the suffix pattern
/// [<seed lemmas>,{OP:*},{LEMMA:soft},{LEMMA:skill}]. Pattern names are
/// "<label>:prefix" / "<label>:suffix".
std::vector<Pattern> build_seed_patterns(const std::vector<SeedSkill>& seeds);

/// Runs the seed patterns over an annotated corpus and slices each match
/// into seed tokens and clue tokens.
std::vector<ExtractionContextHit> collect_contexts(
    const std::vector<SeedSkill>& seeds, const std::vector<Sentence>& corpus,
    const MatchOptions& options = {});

/// Groups hits by the head content-word lemma of the clue (first token that
/// is not a function word; with fallback-annotated corpora, first token not
/// in a closed stopword list). Output is sorted by frequency descending,
/// ties broken lexicographically by head lemma.
std::vector<ClueRecord> group_variants(
    const std::vector<ExtractionContextHit>& hits);

/// Keeps the shortest frequency-sorted prefix whose cumulative frequency
/// reaches `threshold` of the total (inclusive boundary). Input must
/// already be sorted by frequency descending.
std::vector<ClueRecord> pareto_cutoff(const std::vector<ClueRecord>& records,
                                      double threshold = 0.8);

/// Seed list file: one skill per line, "label TAB space-separated lemmas".
std::vector<SeedSkill> read_seed_file(const std::string& path);

/// Clue list as TSV rows (head_lemma, frequency, pipe-separated variants),
/// preceded by "# key = value" provenance lines.
void write_clue_tsv(const std::vector<ClueRecord>& records,
                    const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>&
                        provenance = {});

}  // namespace skillner

#endif  // SKILLNER_CLUEMINER_HPP_
