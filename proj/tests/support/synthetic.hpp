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
//
// Synthetic data with known ground truth: a BIO corpus where clue phrases
// are planted before skill spans, and 2D Gaussian blobs for the linear
// classifier.

#ifndef SKILLNER_TESTS_SUPPORT_SYNTHETIC_HPP_
#define SKILLNER_TESTS_SUPPORT_SYNTHETIC_HPP_

#include <array>
#include <string>
#include <vector>

#include "skillner/corpus.hpp"
#include "skillner/rng.hpp"
#include "skillner/svm.hpp"

namespace skillner::testing {

inline const std::array<std::vector<std::string>, 12>& clue_phrases() {
  static const std::array<std::vector<std::string>, 12> clues = {{
      {"ability", "to"},
      {"capacity", "for"},
      {"level", "of"},
      {"knowhow", "in"},
      {"proficiency", "at"},
      {"talent", "for"},
      {"aptitude", "in"},
      {"knack", "at"},
      {"competence", "in"},
      {"capability", "of"},
      {"mastery", "of"},
      {"flair", "for"},
  }};
  return clues;
}

inline const std::array<std::vector<std::string>, 8>& skill_phrases() {
  static const std::array<std::vector<std::string>, 8> skills = {{
      {"solving", "hard", "problems"},
      {"coordinating", "teamwork"},
      {"communicating", "clearly"},
      {"critical", "thinking"},
      {"leading", "teams"},
      {"active", "listening"},
      {"managing", "conflict"},
      {"adapting", "quickly"},
  }};
  return skills;
}

// A tagged corpus over a closed vocabulary. Ground truth per sentence:
//   60%  clue + skill, the whole run tagged as one span
//   15%  decoy: clue phrase with no following skill (all O)
//   15%  skill alone, tagged as a span
//   10%  filler only
// Filler tokens are wNN words that never collide with clue/skill words, so
// the tag of every token is decidable from a short context window.
inline std::vector<Sentence> synthetic_bio_corpus(std::size_t sentence_count,
                                                  std::uint64_t seed) {
  Rng rng(seed);
  const auto& clues = clue_phrases();
  const auto& skills = skill_phrases();

  std::vector<std::string> filler;
  for (int i = 0; i < 120; ++i) filler.push_back("w" + std::to_string(i));

  std::vector<Sentence> corpus;
  corpus.reserve(sentence_count);
  for (std::size_t s = 0; s < sentence_count; ++s) {
    Sentence sentence;
    sentence.source_id = "synth:" + std::to_string(s);
    auto push = [&](const std::string& text, BioTag tag) {
      AnnotatedToken token;
      token.text = text;
      token.lemma = text;
      // Closed POS assignment keyed on the first character group.
      token.pos = text[0] == 'w' ? "X" : "NOUN";
      token.dep = "dep";
      token.tag = tag;
      sentence.tokens.push_back(std::move(token));
    };
    auto push_fillers = [&](std::size_t count) {
      for (std::size_t i = 0; i < count; ++i) {
        push(filler[rng.below(filler.size())], BioTag::O);
      }
    };

    push_fillers(2 + rng.below(4));
    const double event = rng.uniform();
    if (event < 0.60) {
      const auto& clue = clues[rng.below(clues.size())];
      const auto& skill = skills[rng.below(skills.size())];
      bool first = true;
      for (const std::string& word : clue) {
        push(word, first ? BioTag::BeginExtr : BioTag::InsideExtr);
        first = false;
      }
      for (const std::string& word : skill) push(word, BioTag::InsideExtr);
    } else if (event < 0.75) {
      for (const std::string& word : clues[rng.below(clues.size())]) {
        push(word, BioTag::O);
      }
    } else if (event < 0.90) {
      const auto& skill = skills[rng.below(skills.size())];
      bool first = true;
      for (const std::string& word : skill) {
        push(word, first ? BioTag::BeginExtr : BioTag::InsideExtr);
        first = false;
      }
    }
    push_fillers(2 + rng.below(4));
    push(".", BioTag::O);
    corpus.push_back(std::move(sentence));
  }
  return corpus;
}

// Two separable Gaussian blobs in 2D, as sparse two-column examples.
struct ToyBlobs {
  std::vector<SparseFeatures> xs;
  std::vector<int> labels;  // +1 / -1
};

inline ToyBlobs make_blobs(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  ToyBlobs blobs;
  for (std::size_t i = 0; i < per_class * 2; ++i) {
    const int label = i < per_class ? +1 : -1;
    const double cx = label > 0 ? 2.0 : -2.0;
    const double cy = label > 0 ? 2.0 : -2.0;
    SparseFeatures x;
    x.columns = {0, 1};
    x.values = {cx + 0.5 * rng.normal(), cy + 0.5 * rng.normal()};
    blobs.xs.push_back(std::move(x));
    blobs.labels.push_back(label);
  }
  return blobs;
}

}  // namespace skillner::testing

#endif  // SKILLNER_TESTS_SUPPORT_SYNTHETIC_HPP_
