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

#include "skillner/matcher.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "skillner/error.hpp"

namespace skillner {

namespace {

bool iequals(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

Attr attr_from_key(const std::string& key) {
  if (key == "TEXT") return Attr::Text;
  if (key == "LEMMA") return Attr::Lemma;
  if (key == "POS") return Attr::Pos;
  if (key == "DEP") return Attr::Dep;
  throw DataError("unknown pattern attribute: '" + key + "'");
}

std::vector<PatternStep> steps_from_json(const nlohmann::json& array,
                                         const std::string& name) {
  if (!array.is_array()) {
    throw DataError("pattern '" + name + "': expected a JSON array of steps");
  }
  std::vector<PatternStep> steps;
  for (const auto& obj : array) {
    if (!obj.is_object() || obj.empty()) {
      throw DataError("pattern '" + name +
                      "': each step must be a non-empty JSON object");
    }
    PatternStep step;
    for (const auto& [key, value] : obj.items()) {
      if (!value.is_string()) {
        throw DataError("pattern '" + name + "': step value for '" + key +
                        "' must be a string");
      }
      if (key == "OP") {
        if (value.get<std::string>() != "*") {
          throw DataError("pattern '" + name + "': unsupported quantifier '" +
                          value.get<std::string>() + "' (only \"*\")");
        }
        step.quantifier = Quantifier::ZeroOrMore;
      } else {
        step.constraints[attr_from_key(key)] = value.get<std::string>();
      }
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

// Matches steps[si...] against tokens starting at position `pos`,
// expanding wildcards lazily so the first success is the shortest window.
bool match_from(const std::vector<PatternStep>& steps, std::size_t si,
                const std::vector<AnnotatedToken>& tokens, std::size_t pos,
                std::size_t max_wildcard, std::size_t& end_out) {
  if (si == steps.size()) {
    end_out = pos;
    return true;
  }
  const PatternStep& step = steps[si];
  if (step.quantifier == Quantifier::One) {
    if (pos >= tokens.size() || !step_matches(step, tokens[pos])) return false;
    return match_from(steps, si + 1, tokens, pos + 1, max_wildcard, end_out);
  }
  for (std::size_t skipped = 0; skipped <= max_wildcard; ++skipped) {
    if (pos + skipped > tokens.size()) break;
    if (match_from(steps, si + 1, tokens, pos + skipped, max_wildcard,
                   end_out)) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool step_matches(const PatternStep& step, const AnnotatedToken& token) {
  for (const auto& [attr, required] : step.constraints) {
    switch (attr) {
      case Attr::Text:
        if (!iequals(token.text, required)) return false;
        break;
      case Attr::Lemma:
        if (token.lemma != required) return false;
        break;
      case Attr::Pos:
        if (token.pos != required) return false;
        break;
      case Attr::Dep:
        if (token.dep != required) return false;
        break;
    }
  }
  return true;
}

Pattern compile_pattern(std::vector<PatternStep> steps,
                        const std::string& name) {
  if (steps.empty()) throw DataError("pattern '" + name + "' is empty");
  bool has_one = false;
  for (const PatternStep& step : steps) {
    if (step.quantifier == Quantifier::ZeroOrMore) {
      if (!step.constraints.empty()) {
        throw DataError("pattern '" + name +
                        "': a wildcard step cannot carry constraints");
      }
    } else {
      if (step.constraints.empty()) {
        throw DataError("pattern '" + name +
                        "': a non-wildcard step needs at least one constraint");
      }
      has_one = true;
    }
  }
  if (!has_one) {
    throw DataError("pattern '" + name +
                    "' matches nothing concrete (wildcards only)");
  }
  return Pattern{name, std::move(steps)};
}

Pattern compile_pattern(const std::string& json_steps,
                        const std::string& name) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(json_steps);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("pattern '" + name + "': " + e.what());
  }
  return compile_pattern(steps_from_json(parsed, name), name);
}

std::vector<Pattern> load_patterns(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open pattern file: " + path);
  nlohmann::json parsed;
  try {
    in >> parsed;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
  if (!parsed.is_array()) {
    throw DataError(path + ": expected a JSON array of patterns");
  }
  std::vector<Pattern> patterns;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    const std::string name = "pattern_" + std::to_string(i);
    patterns.push_back(compile_pattern(steps_from_json(parsed[i], name), name));
  }
  return patterns;
}

std::vector<Match> find_matches(const Pattern& pattern,
                                const Sentence& sentence,
                                std::size_t sentence_index,
                                const MatchOptions& options) {
  std::vector<Match> matches;
  const std::vector<AnnotatedToken>& tokens = sentence.tokens;
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    std::size_t end = 0;
    if (!match_from(pattern.steps, 0, tokens, start, options.max_wildcard,
                    end)) {
      continue;
    }
    // One (shortest) match per start position. Extents from distinct
    // starts are distinct, so within one pattern no further dedup applies.
    Match m;
    m.sentence_index = sentence_index;
    m.start = start;
    m.end = end;
    m.pattern_name = pattern.name;
    matches.push_back(std::move(m));
  }
  return matches;
}

std::vector<Match> find_all(const std::vector<Pattern>& patterns,
                            const std::vector<Sentence>& corpus,
                            const MatchOptions& options) {
  std::vector<Match> all;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    for (const Pattern& pattern : patterns) {
      std::vector<Match> ms = find_matches(pattern, corpus[s], s, options);
      all.insert(all.end(), std::make_move_iterator(ms.begin()),
                 std::make_move_iterator(ms.end()));
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Match& a, const Match& b) {
    if (a.sentence_index != b.sentence_index) {
      return a.sentence_index < b.sentence_index;
    }
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });
  return all;
}

}  // namespace skillner
