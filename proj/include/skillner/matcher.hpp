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

#ifndef SKILLNER_MATCHER_HPP_
#define SKILLNER_MATCHER_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "skillner/corpus.hpp"

namespace skillner {

/// Token attributes a pattern step may constrain. TEXT compares
/// case-insensitively; LEMMA/POS/DEP are exact.
enum class Attr : int { Text = 0, Lemma = 1, Pos = 2, Dep = 3 };

enum class Quantifier { One, ZeroOrMore };

/// One step of a pattern: a set of attribute constraints on a single token,
/// or a pure wildcard. A ZeroOrMore step carries no constraints — the
/// compiler rejects constrained wildcards.
struct PatternStep {
  std::map<Attr, std::string> constraints;
  Quantifier quantifier = Quantifier::One;
};

struct Pattern {
  std::string name;
  std::vector<PatternStep> steps;
};

/// A pattern occurrence: half-open token extent within one sentence.
struct Match {
  std::size_t sentence_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string pattern_name;

  bool operator==(const Match&) const = default;
};

struct MatchOptions {
  /// Hard cap on how many tokens one wildcard may absorb. Extraction
  /// contexts are short noun-phrase neighborhoods; an uncapped greedy
  /// wildcard would swallow whole sentences.
  std::size_t max_wildcard = 10;
};

/// Compiles the JSON step-list syntax, e.g.
///   [{"POS": "NOUN"}, {"OP": "*"}, {"LEMMA": "solve"}, {"LEMMA": "problem"}]
/// Attribute keys: TEXT, LEMMA, POS, DEP; {"OP": "*"} is the wildcard.
/// Rejects empty patterns, unknown attributes, constrained wildcards, and
/// patterns made only of wildcards.
Pattern compile_pattern(const std::string& json_steps,
                        const std::string& name);

/// Same validation for an already-built step list.
Pattern compile_pattern(std::vector<PatternStep> steps,
                        const std::string& name);

/// Loads a pattern file: a JSON array of step lists. Patterns are named
/// "pattern_0", "pattern_1", ... by position.
std::vector<Pattern> load_patterns(const std::string& path);

bool step_matches(const PatternStep& step, const AnnotatedToken& token);

/// All matches of `pattern` in one sentence, ordered by (start, end).
/// Per anchor position the wildcard expands lazily, so each start yields
/// its shortest satisfying window; identical extents are deduplicated.
/// Matching never crosses the sentence boundary.
std::vector<Match> find_matches(const Pattern& pattern,
                                const Sentence& sentence,
                                std::size_t sentence_index = 0,
                                const MatchOptions& options = {});

/// Union of per-pattern matches over a corpus, stably ordered by
/// (sentence, start, end, pattern order).
std::vector<Match> find_all(const std::vector<Pattern>& patterns,
                            const std::vector<Sentence>& corpus,
                            const MatchOptions& options = {});

}  // namespace skillner

#endif  // SKILLNER_MATCHER_HPP_
